#pragma once

// Test-only helpers: an independent Levenshtein oracle, op replay, seeded
// generators and scratch directories.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unistd.h>
#include <vector>

#include "gtcurate/align.hpp"
#include "gtcurate/corpus.hpp"

namespace testsupport {

// Top-down recursive Levenshtein straight from the recurrence, memoized so
// the exhaustive sweep stays fast. Shares no code with the library.
inline std::size_t oracle_distance(std::u32string_view a, std::u32string_view b) {
  std::vector<std::int32_t> memo((a.size() + 1) * (b.size() + 1), -1);
  std::function<std::size_t(std::size_t, std::size_t)> lev = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto& slot = memo[i * (b.size() + 1) + j];
    if (slot >= 0) return static_cast<std::size_t>(slot);
    const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
    const std::size_t best = std::min({lev(i - 1, j) + 1, lev(i, j - 1) + 1, lev(i - 1, j - 1) + cost});
    slot = static_cast<std::int32_t>(best);
    return best;
  };
  return lev(a.size(), b.size());
}

// Applies ops to `source`; characters for Insert/Substitute come from `target`.
// Returns false if the ops are not a well-formed, monotone edit script.
inline bool replay(const gtcurate::AlignmentResult& r, std::u32string_view source, std::u32string_view target,
                   std::u32string& out) {
  using gtcurate::EditKind;
  out.clear();
  std::size_t next_s = 0;
  std::size_t next_t = 0;
  for (const auto& op : r.ops) {
    const bool has_s = op.source_pos.has_value();
    const bool has_t = op.target_pos.has_value();
    switch (op.kind) {
      case EditKind::Match:
      case EditKind::Substitute:
        if (!has_s || !has_t) return false;
        break;
      case EditKind::Delete:
        if (!has_s || has_t) return false;
        break;
      case EditKind::Insert:
        if (has_s || !has_t) return false;
        break;
    }
    if (has_s && *op.source_pos != next_s++) return false;
    if (has_t && *op.target_pos != next_t++) return false;
    if (has_s && *op.source_pos >= source.size()) return false;
    if (has_t && *op.target_pos >= target.size()) return false;
    switch (op.kind) {
      case EditKind::Match:
        if (source[*op.source_pos] != target[*op.target_pos]) return false;
        out += source[*op.source_pos];
        break;
      case EditKind::Substitute:
        if (source[*op.source_pos] == target[*op.target_pos]) return false;
        out += target[*op.target_pos];
        break;
      case EditKind::Insert:
        out += target[*op.target_pos];
        break;
      case EditKind::Delete:
        break;
    }
  }
  return next_s == source.size();
}

// Every string over `alphabet` of length 0..max_len.
inline std::vector<std::u32string> all_strings(std::u32string_view alphabet, std::size_t max_len) {
  std::vector<std::u32string> out{U""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char32_t c : alphabet) out.push_back(out[i] + c);
    begin = end;
  }
  return out;
}

inline std::u32string random_string(std::mt19937_64& rng, std::u32string_view alphabet, std::size_t min_len,
                                    std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::u32string s(len(rng), U' ');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

// Words of lowercase letters joined by single spaces; never empty.
inline std::u32string random_sentence(std::mt19937_64& rng, std::size_t max_words = 6) {
  std::uniform_int_distribution<std::size_t> words(1, max_words);
  std::u32string s;
  const std::size_t n = words(rng);
  for (std::size_t w = 0; w < n; ++w) {
    if (w) s += U' ';
    s += random_string(rng, U"abcdefghijklmnopqrstuvwxyzäöü", 1, 8);
  }
  return s;
}

inline gtcurate::LineRecord make_line(std::string id, std::string page, std::int64_t index, gtcurate::Split split,
                                      std::string gt, std::vector<std::pair<std::string, std::string>> preds = {}) {
  gtcurate::LineRecord r;
  r.id = std::move(id);
  r.letter_id = "letter-" + page;
  r.page_id = std::move(page);
  r.line_index = index;
  r.split = split;
  r.ground_truth = std::move(gt);
  for (auto& [m, p] : preds) r.predictions[m] = p;
  return r;
}

// A fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("gtcurate-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string corpus_jsonl(const std::vector<gtcurate::LineRecord>& lines) {
  std::ostringstream s;
  gtcurate::write_corpus(s, std::span<const gtcurate::LineRecord>(lines));
  return s.str();
}

}  // namespace testsupport

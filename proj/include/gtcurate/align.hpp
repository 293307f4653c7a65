#pragma once

// Unit-cost Levenshtein alignment with a deterministic backtrace, and the
// CER/WER metrics built on it.
//
// Direction convention: ops transform the source (ground truth) into the
// target (prediction). Insert = only in the prediction, Delete = only in the
// ground truth.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gtcurate/corpus.hpp"

namespace gtcurate {

enum class EditKind : std::uint8_t { Match, Substitute, Insert, Delete };

std::string_view to_string(EditKind k) noexcept;

struct EditOp {
  EditKind kind = EditKind::Match;
  std::optional<std::size_t> source_pos;
  std::optional<std::size_t> target_pos;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

struct AlignmentResult {
  std::vector<EditOp> ops;
  std::size_t distance = 0;
  EditCounts counts;
};

namespace detail {

// Full (n+1)x(m+1) table; row-major, cell (i, j) = distance(source[:i], target[:j]).
template <class T>
std::vector<std::uint32_t> distance_table(std::span<const T> source, std::span<const T> target) {
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  const std::size_t w = m + 1;
  std::vector<std::uint32_t> d((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) d[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    d[i * w] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag = d[(i - 1) * w + j - 1] + (source[i - 1] == target[j - 1] ? 0u : 1u);
      const std::uint32_t up = d[(i - 1) * w + j] + 1;
      const std::uint32_t left = d[i * w + j - 1] + 1;
      d[i * w + j] = std::min(diag, std::min(up, left));
    }
  }
  return d;
}

}  // namespace detail

/// Minimal-cost alignment. Ties are broken Match > Substitute > Delete >
/// Insert while walking back from the final table cell, so gaps are pushed
/// toward the start of the sequences.
template <class T>
AlignmentResult align_sequences(std::span<const T> source, std::span<const T> target) {
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  const std::size_t w = m + 1;
  const auto d = detail::distance_table(source, target);

  AlignmentResult result;
  result.distance = d[n * w + m];
  result.ops.reserve(std::max(n, m));

  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = d[i * w + j];
    if (i > 0 && j > 0 && source[i - 1] == target[j - 1] && d[(i - 1) * w + j - 1] == here) {
      result.ops.push_back({EditKind::Match, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && j > 0 && d[(i - 1) * w + j - 1] + 1 == here) {
      result.ops.push_back({EditKind::Substitute, i - 1, j - 1});
      ++result.counts.substitutions;
      --i, --j;
    } else if (i > 0 && d[(i - 1) * w + j] + 1 == here) {
      result.ops.push_back({EditKind::Delete, i - 1, std::nullopt});
      ++result.counts.deletions;
      --i;
    } else {
      result.ops.push_back({EditKind::Insert, std::nullopt, j - 1});
      ++result.counts.insertions;
      --j;
    }
  }
  std::reverse(result.ops.begin(), result.ops.end());
  return result;
}

/// The same alignment problem resolved from the first cell instead: ties use
/// the same priority but gaps are pushed toward the end of the sequences.
/// Computed as the mirror image of align_sequences on the reversed inputs.
template <class T>
AlignmentResult align_sequences_from_start(std::span<const T> source, std::span<const T> target) {
  std::vector<T> rs(source.rbegin(), source.rend());
  std::vector<T> rt(target.rbegin(), target.rend());
  AlignmentResult r = align_sequences(std::span<const T>(rs), std::span<const T>(rt));
  std::reverse(r.ops.begin(), r.ops.end());
  for (auto& op : r.ops) {
    if (op.source_pos) op.source_pos = source.size() - 1 - *op.source_pos;
    if (op.target_pos) op.target_pos = target.size() - 1 - *op.target_pos;
  }
  return r;
}

/// Two-row distance only; same value as align_sequences(...).distance.
template <class T>
std::size_t sequence_distance(std::span<const T> source, std::span<const T> target) {
  if (source.size() < target.size()) std::swap(source, target);
  std::vector<std::uint32_t> prev(target.size() + 1), cur(target.size() + 1);
  for (std::size_t j = 0; j <= target.size(); ++j) prev[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= source.size(); ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= target.size(); ++j) {
      const std::uint32_t diag = prev[j - 1] + (source[i - 1] == target[j - 1] ? 0u : 1u);
      cur[j] = std::min(diag, std::min(prev[j], cur[j - 1]) + 1);
    }
    std::swap(prev, cur);
  }
  return prev[target.size()];
}

AlignmentResult edit_alignment(std::u32string_view source, std::u32string_view target);
/// UTF-8 overload; characters are Unicode scalar values.
AlignmentResult edit_alignment(std::string_view source, std::string_view target);

std::size_t edit_distance(std::u32string_view source, std::u32string_view target);

// Error counts for one line or an aggregate of lines. Rates are exact
// ratios of the integer counts.
struct Metrics {
  std::size_t lines = 0;
  std::size_t char_errors = 0;
  std::size_t char_total = 0;
  std::size_t word_errors = 0;
  std::size_t word_total = 0;

  /// nullopt is the undefined-denominator state: zero reference units with
  /// at least one error, or an empty aggregate.
  std::optional<double> cer() const noexcept;
  std::optional<double> wer() const noexcept;

  Metrics& operator+=(const Metrics& other) noexcept;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

Metrics line_metrics(std::string_view ground_truth, std::string_view prediction);

/// Micro-averaged metrics for `model` over `subset`, parallel over lines.
/// Throws MissingPredictionError listing every line without a prediction.
Metrics evaluate(const Corpus& corpus, std::string_view model, const Subset& subset);

}  // namespace gtcurate

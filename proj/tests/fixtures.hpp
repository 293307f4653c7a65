#pragma once

// A 1900-line annotated test split with fixed status and label totals.

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gtcurate/annotation.hpp"
#include "gtcurate/corpus.hpp"
#include "support.hpp"

namespace testsupport {

struct LabelQuota {
  gtcurate::ErrorLabel label;
  std::size_t count;
};

inline constexpr std::array<std::pair<gtcurate::AnnotationStatus, std::size_t>, 4> kStatusCounts = {{
    {gtcurate::AnnotationStatus::Correct, 415},
    {gtcurate::AnnotationStatus::Fixed, 1463},
    {gtcurate::AnnotationStatus::Unsure, 21},
    {gtcurate::AnnotationStatus::HasErrors, 1},
}};

inline constexpr std::array<LabelQuota, 4> kStartQuota = {{
    {gtcurate::ErrorLabel::MissingWords, 191},
    {gtcurate::ErrorLabel::AdditionalWords, 3},
    {gtcurate::ErrorLabel::HyphenatedMissing, 315},
    {gtcurate::ErrorLabel::HyphenatedExtraChars, 167},
}};

inline constexpr std::array<LabelQuota, 5> kEndQuota = {{
    {gtcurate::ErrorLabel::MissingWords, 104},
    {gtcurate::ErrorLabel::AdditionalWords, 24},
    {gtcurate::ErrorLabel::HyphenatedMissing, 111},
    {gtcurate::ErrorLabel::HyphenatedExtraChars, 623},
    {gtcurate::ErrorLabel::HyphenationCharacter, 480},
}};

struct AnnotatedSplit {
  std::vector<gtcurate::LineRecord> lines;
  std::vector<gtcurate::StoredAnnotation> log;  // one version-1 record per line
};

// Statuses are laid out in blocks: Correct lines first, then the others.
// Error labels go on non-Correct lines, each label starting at its own
// offset so the sets overlap unevenly; HyphenationCharacter starts at line 0
// and so also lands on Correct lines.
inline AnnotatedSplit annotated_split() {
  using namespace gtcurate;
  AnnotatedSplit f;
  std::vector<AnnotationStatus> statuses;
  for (const auto& [status, n] : kStatusCounts) statuses.insert(statuses.end(), n, status);
  const std::size_t total = statuses.size();
  const std::size_t first_error_line = kStatusCounts[0].second;
  const std::size_t error_lines = total - first_error_line;

  for (std::size_t i = 0; i < total; ++i) {
    const std::string id = "T" + std::to_string(10000 + i);
    f.lines.push_back(make_line(id, "page" + std::to_string(i / 25), static_cast<std::int64_t>(i % 25),
                                Split::Test, "linea " + std::to_string(i) + " verbum", {{"m1", "linea"}}));
    AnnotationRecord r;
    r.line_id = id;
    r.status = statuses[i];
    if (r.status == AnnotationStatus::Fixed) r.corrected_text = f.lines.back().ground_truth + " emendatum";
    r.annotator_id = "fixture";
    r.timestamp = "2024-01-01T00:00:00.000Z";
    r.version = 1;
    f.log.push_back({r, f.lines.back().ground_truth});
  }

  std::size_t offset = 0;
  const auto spread = [&](ErrorLabel label, std::size_t count, bool start) {
    for (std::size_t k = 0; k < count; ++k) {
      auto& rec = f.log[first_error_line + (offset + k) % error_lines].record;
      (start ? rec.start_labels : rec.end_labels).insert(label);
    }
    offset += 97;
  };
  for (const auto& q : kStartQuota) spread(q.label, q.count, true);
  for (const auto& q : kEndQuota) {
    if (q.label == ErrorLabel::HyphenationCharacter) {
      for (std::size_t k = 0; k < q.count; ++k) f.log[k].record.end_labels.insert(q.label);
    } else {
      spread(q.label, q.count, false);
    }
  }
  return f;
}

inline void write_annotated_split(const AnnotatedSplit& f, const std::filesystem::path& corpus,
                                const std::filesystem::path& log) {
  write_file(corpus, corpus_jsonl(f.lines));
  std::string out;
  for (const auto& e : f.log) out += gtcurate::to_json_line(e) + "\n";
  write_file(log, out);
}

}  // namespace testsupport

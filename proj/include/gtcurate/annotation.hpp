#pragma once

// Human verdicts on flagged lines, kept as an append-only JSONL log. The
// latest record per line is authoritative; writers must name the version
// they read (optimistic concurrency).

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "gtcurate/corpus.hpp"
#include "gtcurate/percent.hpp"

namespace gtcurate {

enum class AnnotationStatus : std::uint8_t { Correct, Fixed, Unsure, HasErrors };

enum class ErrorLabel : std::uint8_t {
  MissingWords,
  AdditionalWords,
  HyphenatedMissing,
  HyphenatedExtraChars,
  HyphenationCharacter,  // end of line only
};

inline constexpr std::array<AnnotationStatus, 4> kAllStatuses = {
    AnnotationStatus::Correct, AnnotationStatus::Fixed, AnnotationStatus::Unsure, AnnotationStatus::HasErrors};
inline constexpr std::array<ErrorLabel, 5> kAllLabels = {
    ErrorLabel::MissingWords, ErrorLabel::AdditionalWords, ErrorLabel::HyphenatedMissing,
    ErrorLabel::HyphenatedExtraChars, ErrorLabel::HyphenationCharacter};

std::string_view to_string(AnnotationStatus s) noexcept;
std::string_view to_string(ErrorLabel l) noexcept;
std::optional<AnnotationStatus> parse_status(std::string_view s) noexcept;
std::optional<ErrorLabel> parse_label(std::string_view s) noexcept;

using LabelSet = std::set<ErrorLabel>;

struct AnnotationRecord {
  std::string line_id;
  AnnotationStatus status = AnnotationStatus::Correct;
  std::optional<std::string> corrected_text;
  LabelSet start_labels;
  LabelSet end_labels;
  std::string annotator_id;
  std::string timestamp;  // UTC, ISO 8601
  std::int64_t version = 0;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

/// Record invariants against the line's original ground truth. Empty means valid.
std::vector<std::string> check_record(const AnnotationRecord& record, std::string_view original_ground_truth);

// A log entry: the record plus the ground truth it was judged against.
struct StoredAnnotation {
  AnnotationRecord record;
  std::string original_ground_truth;

  friend bool operator==(const StoredAnnotation&, const StoredAnnotation&) = default;
};

std::string to_json_line(const StoredAnnotation& entry);
StoredAnnotation parse_json_line(std::string_view line, const std::string& source, std::size_t row);

/// Latest record per line id.
using AnnotationSnapshot = std::map<std::string, StoredAnnotation>;

enum class SubmitStatus : std::uint8_t { Stored, Conflict, Invalid };

struct SubmitResult {
  SubmitStatus status = SubmitStatus::Stored;
  std::optional<StoredAnnotation> record;  // stored record, or the current one on Conflict
  std::vector<std::string> violations;
};

std::string utc_now_iso8601();

class AnnotationStore {
 public:
  struct Options {
    bool fsync = true;
  };

  /// In-memory store with no backing log.
  AnnotationStore();
  /// Replays `log` (created if absent) and appends to it from then on. A
  /// torn final line without a newline is dropped; any other bad row throws.
  explicit AnnotationStore(std::filesystem::path log, Options options);
  explicit AnnotationStore(std::filesystem::path log) : AnnotationStore(std::move(log), Options{}) {}
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// `expected_version` is the version the caller last saw (0 for none).
  /// The store assigns version and, when empty, timestamp.
  SubmitResult submit(AnnotationRecord record, std::int64_t expected_version, std::string_view original_ground_truth);

  std::optional<StoredAnnotation> latest(std::string_view line_id) const;
  std::int64_t current_version(std::string_view line_id) const;
  AnnotationSnapshot snapshot() const;
  std::size_t log_entries() const;
  std::size_t dropped_tail_bytes() const noexcept { return dropped_tail_bytes_; }

 private:
  void replay();
  void append(const StoredAnnotation& entry);

  std::optional<std::filesystem::path> path_;
  Options options_;
  int fd_ = -1;
  std::size_t dropped_tail_bytes_ = 0;

  mutable std::shared_mutex mutex_;
  AnnotationSnapshot latest_;
  std::size_t entries_ = 0;
};

/// Reads a whole log into a snapshot (same rules as the store's replay).
AnnotationSnapshot replay_log(const std::filesystem::path& log);

struct StatusRow {
  AnnotationStatus status;
  std::size_t count = 0;
  Percent percent;
};

struct StatusReport {
  std::array<StatusRow, 4> rows;
  std::size_t total = 0;
};

struct LabelRow {
  ErrorLabel label;
  std::optional<std::size_t> start_count;  // absent for HyphenationCharacter
  std::optional<Percent> start_percent;
  std::size_t end_count = 0;
  Percent end_percent;
};

struct ErrorTypeReport {
  std::array<LabelRow, 5> rows;
  std::size_t total = 0;
};

StatusReport status_report(const AnnotationSnapshot& annotations);
/// Labels are counted on every latest record regardless of status;
/// percentages are against all annotated lines.
ErrorTypeReport error_type_report(const AnnotationSnapshot& annotations);

struct CorrectedExport {
  std::vector<LineRecord> lines;  // sorted by id
  std::vector<std::string> warnings;
};

/// Lines of `scope` whose latest status is Correct or Fixed; Fixed lines take
/// the corrected text. Unannotated scope lines are excluded with a warning.
CorrectedExport export_corrected(const Corpus& corpus, const AnnotationSnapshot& annotations, Split scope);

}  // namespace gtcurate

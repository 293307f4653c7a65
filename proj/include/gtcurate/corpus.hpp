#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace gtcurate {

enum class Split : std::uint8_t { Train, Validation, Test };

std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view s) noexcept;

// One text-line sample.
struct LineRecord {
  std::string id;
  std::string letter_id;
  std::string page_id;
  std::int64_t line_index = 0;
  Split split = Split::Train;
  std::string ground_truth;
  std::map<std::string, std::string> predictions;
  std::optional<std::string> image_ref;

  // Only set on exported (corrected) corpora.
  std::optional<std::string> original_ground_truth;
  std::optional<std::string> annotation_status;

  const std::string* prediction(std::string_view model) const;

  friend bool operator==(const LineRecord&, const LineRecord&) = default;
};

// Immutable after construction. Construction rejects duplicate ids; lines
// sharing a (page_id, line_index) key are ordered by id (validate reports them).
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<LineRecord> records);

  std::span<const LineRecord> lines() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const LineRecord* find(std::string_view id) const;

  /// Page ids in ascending order.
  std::vector<std::string> page_ids() const;
  bool has_page(std::string_view page_id) const;

  /// Records of one page sorted by line_index. Throws UnknownKeyError.
  std::vector<const LineRecord*> ordered_lines(std::string_view page_id) const;

  /// Same-page successor in reading order, or nullptr for a page's last line.
  const LineRecord* successor(const LineRecord& line) const;
  const LineRecord* predecessor(const LineRecord& line) const;

 private:
  std::vector<LineRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  // page id -> record positions sorted by line_index
  std::map<std::string, std::vector<std::size_t>, std::less<>> pages_;
  // record position -> rank inside its page
  std::vector<std::size_t> rank_;
};

/// A selection of corpus lines: everything, one split, or an explicit id set.
struct Subset {
  std::variant<std::monostate, Split, std::vector<std::string>> selector;

  static Subset all() { return {}; }
  static Subset of(Split s) { return {s}; }
  static Subset of(std::vector<std::string> ids) { return {std::move(ids)}; }

  std::string describe() const;
};

/// Resolves a subset to records in corpus order. Unknown ids throw UnknownKeyError.
std::vector<const LineRecord*> select(const Corpus& corpus, const Subset& subset);

enum class CorpusFormat : std::uint8_t { Jsonl, TsvPairs };

std::optional<CorpusFormat> parse_corpus_format(std::string_view s) noexcept;

struct ReadOptions {
  CorpusFormat format = CorpusFormat::Jsonl;
  bool normalize = true;

  // tsv-pairs has no page/split columns; these fill them in.
  Split tsv_split = Split::Train;
  std::string tsv_model = "model";
  std::string tsv_page_id = "page";
  std::string tsv_letter_id = "letter";
};

enum class IssueSeverity : std::uint8_t { Error, Warning };

enum class IssueCode : std::uint8_t {
  DuplicateId,
  DuplicateOrderKey,
  MissingGroundTruth,
  NonNormalizedText,
  BadSplit,
  DanglingImageRef,
};

std::string_view to_string(IssueSeverity s) noexcept;
std::string_view to_string(IssueCode c) noexcept;

struct RowLocator {
  std::size_t row = 0;
  friend bool operator==(const RowLocator&, const RowLocator&) = default;
};

struct ValidationIssue {
  IssueSeverity severity = IssueSeverity::Error;
  std::variant<std::string, RowLocator> locator;  // line id or input row
  IssueCode code = IssueCode::DuplicateId;
  std::string detail;

  std::string locator_text() const;
  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

// Records plus the problems that made some rows unloadable (lenient mode).
struct RawRecords {
  std::vector<LineRecord> records;
  std::vector<std::size_t> rows;  // 1-based input row of each record
  std::vector<ValidationIssue> issues;
};

/// Parses without uniqueness checks. With `lenient`, bad split values become
/// BadSplit issues instead of throwing.
RawRecords read_records(const std::filesystem::path& path, const ReadOptions& options, bool lenient = false);
RawRecords parse_records(std::istream& in, const std::string& source, const ReadOptions& options,
                         bool lenient = false);

Corpus load_corpus(const std::filesystem::path& path, const ReadOptions& options = {});

void write_record(std::ostream& out, const LineRecord& line);
void write_corpus(std::ostream& out, std::span<const LineRecord> lines);
void write_corpus(std::ostream& out, const Corpus& corpus);

/// Lines sorted by id, the canonical output order for derived corpora.
std::vector<LineRecord> sorted_by_id(std::span<const LineRecord> lines);

std::vector<ValidationIssue> validate(std::span<const LineRecord> records,
                                      const std::optional<std::filesystem::path>& image_root = std::nullopt);

struct SplitCounts {
  std::size_t letters = 0;
  std::size_t pages = 0;
  std::size_t lines = 0;
  std::size_t words = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

struct CorpusStats {
  SplitCounts train;
  SplitCounts validation;
  SplitCounts test;
  SplitCounts total;

  const SplitCounts& of(Split s) const noexcept;
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace gtcurate

#pragma once

// Hyphenation-error candidates. A hyphenated word that the line alignment
// assigned wholly to one line shows up as a pure run of insertions or
// deletions anchored at the end of that line or at the start of the next.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gtcurate/align.hpp"
#include "gtcurate/corpus.hpp"
#include "gtcurate/percent.hpp"

namespace gtcurate {

enum class RunKind : std::uint8_t { InsertionRun, DeletionRun };

std::string_view to_string(RunKind k) noexcept;

struct BoundaryRun {
  RunKind kind = RunKind::InsertionRun;
  std::size_t length = 0;

  friend bool operator==(const BoundaryRun&, const BoundaryRun&) = default;
};

struct BoundaryRuns {
  std::optional<BoundaryRun> head;
  std::optional<BoundaryRun> tail;

  friend bool operator==(const BoundaryRuns&, const BoundaryRuns&) = default;
};

/// Maximal pure Insert or pure Delete runs at either end of one op sequence.
BoundaryRuns boundary_runs(const AlignmentResult& alignment);

/// Runs for a ground-truth/prediction pair. The head run is read from the
/// alignment resolved from the final cell (gaps pushed to the start) and the
/// tail run from the one resolved from the first cell (gaps pushed to the
/// end), so a planted prefix or suffix is always reported at full length.
BoundaryRuns boundary_runs(std::u32string_view ground_truth, std::u32string_view prediction);
BoundaryRuns boundary_runs(std::string_view ground_truth, std::string_view prediction);

enum class FlagTrigger : std::uint8_t { TailRun, NextHeadRun, ExternalMarker };

std::string_view to_string(FlagTrigger t) noexcept;
std::optional<FlagTrigger> parse_flag_trigger(std::string_view s) noexcept;
std::optional<RunKind> parse_run_kind(std::string_view s) noexcept;

struct HyphenationFlag {
  std::string line_id;
  FlagTrigger trigger = FlagTrigger::TailRun;
  std::optional<RunKind> run_kind;
  std::optional<std::size_t> run_length;
  std::optional<std::string> related_line_id;
  std::string model;

  friend bool operator==(const HyphenationFlag&, const HyphenationFlag&) = default;
};

/// Canonical order: line_id, then trigger.
void sort_flags(std::vector<HyphenationFlag>& flags);

struct LineProblem {
  std::string line_id;
  std::string message;

  friend bool operator==(const LineProblem&, const LineProblem&) = default;
};

struct DetectionResult {
  std::vector<HyphenationFlag> flags;
  std::vector<LineProblem> errors;
};

/// Pages are processed in parallel; output is canonically sorted.
DetectionResult detect_candidates(const Corpus& corpus, std::string_view model, std::size_t min_run = 3);

struct HyphenSymbolHit {
  std::string line_id;
  char32_t symbol = U'=';
  std::size_t position = 0;  // character index of the final non-whitespace character

  friend bool operator==(const HyphenSymbolHit&, const HyphenSymbolHit&) = default;
};

/// {-, =, ¬}, plus ':' when `include_colon`.
std::u32string default_hyphen_symbols(bool include_colon = false);

struct TextField {
  std::optional<std::string> model;  // nullopt selects ground_truth

  static TextField ground_truth() { return {}; }
  static TextField prediction(std::string model) { return {std::move(model)}; }
};

/// Lines whose selected text ends in one of `symbols`. Lines lacking the
/// selected prediction are skipped.
std::vector<HyphenSymbolHit> scan_hyphen_symbols(const Corpus& corpus, const TextField& field,
                                                 std::u32string_view symbols);

struct MarkerIngest {
  std::vector<HyphenationFlag> flags;
  std::map<std::string, std::string> texts;  // line id -> transcription, marker stripped
  std::vector<std::string> warnings;
};

/// Reads `id<TAB>text` rows produced by an external detector that ends
/// hyphenated lines with `marker`.
MarkerIngest ingest_marker_flags(std::istream& in, const std::string& source, const Corpus& corpus,
                                 char32_t marker = U'¬', const std::string& detector = "external-marker");
MarkerIngest ingest_marker_flags(const std::filesystem::path& path, const Corpus& corpus,
                                 char32_t marker = U'¬', const std::string& detector = "external-marker");

struct Exclusion {
  std::vector<LineRecord> kept;
  std::vector<LineRecord> removed;
  Percent retention;
  std::vector<std::string> warnings;
};

/// Removes every line of `scope` carrying at least one flag of any trigger.
Exclusion exclude_flagged(const Corpus& corpus, std::span<const HyphenationFlag> flags, Split scope);

// Flag file: one JSON object per line.
void write_flag(std::ostream& out, const HyphenationFlag& flag);
void write_flags(std::ostream& out, std::span<const HyphenationFlag> flags);
std::vector<HyphenationFlag> read_flags(std::istream& in, const std::string& source);
std::vector<HyphenationFlag> read_flags(const std::filesystem::path& path);

}  // namespace gtcurate

#include "gtcurate/hyphen.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "gtcurate/error.hpp"
#include "gtcurate/text.hpp"

namespace gtcurate {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(RunKind k) noexcept {
  return k == RunKind::InsertionRun ? "InsertionRun" : "DeletionRun";
}

std::string_view to_string(FlagTrigger t) noexcept {
  switch (t) {
    case FlagTrigger::TailRun: return "TailRun";
    case FlagTrigger::NextHeadRun: return "NextHeadRun";
    case FlagTrigger::ExternalMarker: return "ExternalMarker";
  }
  return "TailRun";
}

std::optional<FlagTrigger> parse_flag_trigger(std::string_view s) noexcept {
  if (s == "TailRun") return FlagTrigger::TailRun;
  if (s == "NextHeadRun") return FlagTrigger::NextHeadRun;
  if (s == "ExternalMarker") return FlagTrigger::ExternalMarker;
  return std::nullopt;
}

std::optional<RunKind> parse_run_kind(std::string_view s) noexcept {
  if (s == "InsertionRun") return RunKind::InsertionRun;
  if (s == "DeletionRun") return RunKind::DeletionRun;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Boundary runs

namespace {

std::optional<RunKind> run_kind_of(EditKind k) {
  if (k == EditKind::Insert) return RunKind::InsertionRun;
  if (k == EditKind::Delete) return RunKind::DeletionRun;
  return std::nullopt;
}

template <class It>
std::optional<BoundaryRun> leading_run(It first, It last) {
  if (first == last) return std::nullopt;
  const auto kind = run_kind_of(first->kind);
  if (!kind) return std::nullopt;
  const EditKind op = first->kind;
  std::size_t n = 0;
  for (; first != last && first->kind == op; ++first) ++n;
  return BoundaryRun{*kind, n};
}

}  // namespace

BoundaryRuns boundary_runs(const AlignmentResult& alignment) {
  const auto& ops = alignment.ops;
  return {leading_run(ops.begin(), ops.end()), leading_run(ops.rbegin(), ops.rend())};
}

BoundaryRuns boundary_runs(std::u32string_view ground_truth, std::u32string_view prediction) {
  const std::span<const char32_t> gt(ground_truth.data(), ground_truth.size());
  const std::span<const char32_t> pred(prediction.data(), prediction.size());
  const AlignmentResult gaps_first = align_sequences(gt, pred);
  const AlignmentResult gaps_last = align_sequences_from_start(gt, pred);
  return {boundary_runs(gaps_first).head, boundary_runs(gaps_last).tail};
}

BoundaryRuns boundary_runs(std::string_view ground_truth, std::string_view prediction) {
  return boundary_runs(std::u32string_view(text::decode_utf8(ground_truth)),
                       std::u32string_view(text::decode_utf8(prediction)));
}

// ---------------------------------------------------------------------------
// Candidate detection

void sort_flags(std::vector<HyphenationFlag>& flags) {
  std::stable_sort(flags.begin(), flags.end(), [](const HyphenationFlag& a, const HyphenationFlag& b) {
    if (a.line_id != b.line_id) return a.line_id < b.line_id;
    return a.trigger < b.trigger;
  });
}

namespace detail {

// Flags for one page; shared by the parallel driver and the serial reference.
void detect_page(const std::vector<const LineRecord*>& page, std::string_view model, std::size_t min_run,
                 std::vector<HyphenationFlag>& flags, std::vector<LineProblem>& errors) {
  std::vector<std::optional<BoundaryRuns>> runs(page.size());
  for (std::size_t i = 0; i < page.size(); ++i) {
    const std::string* pred = page[i]->prediction(model);
    if (pred == nullptr) {
      errors.push_back({page[i]->id, "missing prediction for model '" + std::string(model) + "'"});
      continue;
    }
    try {
      runs[i] = boundary_runs(std::string_view(page[i]->ground_truth), std::string_view(*pred));
    } catch (const Error& e) {
      errors.push_back({page[i]->id, e.what()});
    }
  }

  const auto fires = [min_run](const std::optional<BoundaryRun>& r) { return r && r->length >= min_run; };
  for (std::size_t i = 0; i < page.size(); ++i) {
    if (runs[i] && fires(runs[i]->tail)) {
      flags.push_back({page[i]->id, FlagTrigger::TailRun, runs[i]->tail->kind, runs[i]->tail->length,
                       std::nullopt, std::string(model)});
    }
    if (i + 1 < page.size() && runs[i + 1] && fires(runs[i + 1]->head)) {
      flags.push_back({page[i]->id, FlagTrigger::NextHeadRun, runs[i + 1]->head->kind, runs[i + 1]->head->length,
                       page[i + 1]->id, std::string(model)});
    }
  }
}

}  // namespace detail

DetectionResult detect_candidates(const Corpus& corpus, std::string_view model, std::size_t min_run) {
  if (min_run == 0) throw Error("min_run must be at least 1");
  const auto pages = corpus.page_ids();
  const auto n = static_cast<std::ptrdiff_t>(pages.size());
  std::vector<std::vector<HyphenationFlag>> page_flags(pages.size());
  std::vector<std::vector<LineProblem>> page_errors(pages.size());

#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t p = 0; p < n; ++p) {
    detail::detect_page(corpus.ordered_lines(pages[p]), model, min_run, page_flags[p], page_errors[p]);
  }

  DetectionResult result;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    result.flags.insert(result.flags.end(), page_flags[p].begin(), page_flags[p].end());
    result.errors.insert(result.errors.end(), page_errors[p].begin(), page_errors[p].end());
  }
  sort_flags(result.flags);
  std::stable_sort(result.errors.begin(), result.errors.end(),
            [](const LineProblem& a, const LineProblem& b) { return a.line_id < b.line_id; });
  return result;
}

// ---------------------------------------------------------------------------
// Symbol scan

std::u32string default_hyphen_symbols(bool include_colon) {
  std::u32string s = U"-=¬";
  if (include_colon) s += U':';
  return s;
}

std::vector<HyphenSymbolHit> scan_hyphen_symbols(const Corpus& corpus, const TextField& field,
                                                 std::u32string_view symbols) {
  std::vector<HyphenSymbolHit> hits;
  for (const auto& line : corpus.lines()) {
    const std::string* source = &line.ground_truth;
    if (field.model) {
      source = line.prediction(*field.model);
      if (source == nullptr) continue;
    }
    const std::u32string chars = text::decode_utf8(*source);
    const std::u32string_view body = text::trim_right(chars);
    if (body.empty()) continue;
    if (symbols.find(body.back()) == std::u32string_view::npos) continue;
    hits.push_back({line.id, body.back(), body.size() - 1});
  }
  std::sort(hits.begin(), hits.end(),
            [](const HyphenSymbolHit& a, const HyphenSymbolHit& b) { return a.line_id < b.line_id; });
  return hits;
}

// ---------------------------------------------------------------------------
// External marker ingestion

MarkerIngest ingest_marker_flags(std::istream& in, const std::string& source, const Corpus& corpus, char32_t marker,
                                 const std::string& detector) {
  MarkerIngest out;
  std::string raw;
  std::size_t row = 0;
  while (std::getline(in, raw)) {
    ++row;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    const auto tab = raw.find('\t');
    if (tab == std::string::npos || tab == 0) throw FormatError(source, row, "expected id<TAB>text");
    const std::string id = raw.substr(0, tab);
    std::u32string chars;
    try {
      chars = text::decode_utf8(std::string_view(raw).substr(tab + 1));
    } catch (const FormatError& e) {
      throw FormatError(source, row, e.what());
    }
    if (corpus.find(id) == nullptr) {
      out.warnings.push_back(source + ":" + std::to_string(row) + ": unknown line id " + id + ", skipped");
      continue;
    }
    std::u32string_view body = text::trim_right(chars);
    const bool marked = !body.empty() && body.back() == marker;
    if (marked) {
      body.remove_suffix(1);
      out.flags.push_back({id, FlagTrigger::ExternalMarker, std::nullopt, std::nullopt, std::nullopt, detector});
    }
    out.texts[id] = text::normalize_line(text::encode_utf8(body));
  }
  sort_flags(out.flags);
  out.flags.erase(std::unique(out.flags.begin(), out.flags.end()), out.flags.end());
  return out;
}

MarkerIngest ingest_marker_flags(const std::filesystem::path& path, const Corpus& corpus, char32_t marker,
                                 const std::string& detector) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return ingest_marker_flags(in, path.string(), corpus, marker, detector);
}

// ---------------------------------------------------------------------------
// Exclusion

Exclusion exclude_flagged(const Corpus& corpus, std::span<const HyphenationFlag> flags, Split scope) {
  Exclusion out;
  std::unordered_set<std::string> flagged;
  std::set<std::string> ignored;
  for (const auto& f : flags) {
    const LineRecord* line = corpus.find(f.line_id);
    if (line == nullptr || line->split != scope) {
      ignored.insert(f.line_id);
      continue;
    }
    flagged.insert(f.line_id);
  }
  for (const auto& id : ignored)
    out.warnings.push_back("flag on " + id + " ignored: line not in " + std::string(to_string(scope)) + " split");

  std::size_t scope_size = 0;
  for (const auto& line : corpus.lines()) {
    if (line.split != scope) continue;
    ++scope_size;
    (flagged.count(line.id) ? out.removed : out.kept).push_back(line);
  }
  out.retention = Percent::of(out.kept.size(), scope_size);
  return out;
}

// ---------------------------------------------------------------------------
// Flag file I/O

void write_flag(std::ostream& out, const HyphenationFlag& flag) {
  ordered_json obj;
  obj["line_id"] = flag.line_id;
  obj["trigger"] = to_string(flag.trigger);
  if (flag.run_kind) obj["run_kind"] = to_string(*flag.run_kind);
  if (flag.run_length) obj["run_length"] = *flag.run_length;
  if (flag.related_line_id) obj["related_line_id"] = *flag.related_line_id;
  obj["model"] = flag.model;
  out << obj.dump() << '\n';
}

void write_flags(std::ostream& out, std::span<const HyphenationFlag> flags) {
  for (const auto& f : flags) write_flag(out, f);
}

std::vector<HyphenationFlag> read_flags(std::istream& in, const std::string& source) {
  std::vector<HyphenationFlag> flags;
  std::string raw;
  std::size_t row = 0;
  while (std::getline(in, raw)) {
    ++row;
    if (raw.empty() || raw.front() == '#') continue;
    json obj;
    try {
      obj = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw FormatError(source, row, std::string("invalid JSON: ") + e.what());
    }
    try {
      HyphenationFlag f;
      f.line_id = obj.at("line_id").get<std::string>();
      auto trigger = parse_flag_trigger(obj.at("trigger").get<std::string>());
      if (!trigger) throw FormatError(source, row, "unknown trigger");
      f.trigger = *trigger;
      if (obj.contains("run_kind") && !obj["run_kind"].is_null()) {
        auto kind = parse_run_kind(obj["run_kind"].get<std::string>());
        if (!kind) throw FormatError(source, row, "unknown run_kind");
        f.run_kind = *kind;
      }
      if (obj.contains("run_length") && !obj["run_length"].is_null())
        f.run_length = obj["run_length"].get<std::size_t>();
      if (obj.contains("related_line_id") && !obj["related_line_id"].is_null())
        f.related_line_id = obj["related_line_id"].get<std::string>();
      f.model = obj.value("model", std::string());

      const bool run_trigger = f.trigger != FlagTrigger::ExternalMarker;
      if (run_trigger != (f.run_kind && f.run_length))
        throw FormatError(source, row, "run_kind/run_length do not match trigger");
      if ((f.trigger == FlagTrigger::NextHeadRun) != f.related_line_id.has_value())
        throw FormatError(source, row, "related_line_id is required exactly for NextHeadRun");
      flags.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw FormatError(source, row, e.what());
    }
  }
  return flags;
}

std::vector<HyphenationFlag> read_flags(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return read_flags(in, path.string());
}

}  // namespace gtcurate

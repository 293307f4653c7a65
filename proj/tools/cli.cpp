#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gtcurate/align.hpp"
#include "gtcurate/annotation.hpp"
#include "gtcurate/corpus.hpp"
#include "gtcurate/deviation.hpp"
#include "gtcurate/error.hpp"
#include "gtcurate/hyphen.hpp"
#include "gtcurate/service.hpp"
#include "gtcurate/text.hpp"

namespace gtcurate::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

enum class OutputFormat { Jsonl, Table };

struct Options {
  std::string corpus;
  std::string input_format = "jsonl";
  std::string model;
  std::string split;
  std::string page_id = "page";
  std::string letter_id = "letter";
  std::size_t min_run = 3;
  double k = 1.0;
  std::string flags;
  std::string annotations;
  std::string out;
  std::string removed;
  std::string format = "jsonl";
  bool no_timestamp = false;

  std::string image_root;
  std::string ids;
  std::string symbols;
  bool colon = false;
  std::string markers;
  std::string marker = "¬";
  std::string kind = "status";

  std::string config;
  std::string host;
  int port = -1;
  std::string cross_reference_url;
  std::string ui_root;
};

// An output destination with the optional timestamp header already written.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool timestamp) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw IoError("cannot write " + path);
    }
    fallback_ = &fallback;
    if (timestamp) stream() << "# generated_at: " << utc_now_iso8601() << '\n';
  }

  std::ostream& stream() { return file_ ? *file_ : *fallback_; }

  void close() {
    if (file_) {
      file_->flush();
      if (!*file_) throw IoError("write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* fallback_ = nullptr;
};

OutputFormat output_format(const Options& o) { return o.format == "table" ? OutputFormat::Table : OutputFormat::Jsonl; }

ReadOptions read_options(const Options& o) {
  ReadOptions r;
  r.format = *parse_corpus_format(o.input_format);
  if (!o.split.empty()) r.tsv_split = *parse_split(o.split);
  if (!o.model.empty()) r.tsv_model = o.model;
  r.tsv_page_id = o.page_id;
  r.tsv_letter_id = o.letter_id;
  return r;
}

Subset subset_of(const Options& o) {
  if (!o.ids.empty()) {
    std::vector<std::string> ids;
    std::stringstream ss(o.ids);
    for (std::string id; std::getline(ss, id, ',');)
      if (!id.empty()) ids.push_back(id);
    return Subset::of(std::move(ids));
  }
  if (!o.split.empty()) return Subset::of(*parse_split(o.split));
  return Subset::all();
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string status_display(AnnotationStatus s) {
  return s == AnnotationStatus::HasErrors ? "Has Errors" : std::string(to_string(s));
}

std::string label_display(ErrorLabel l) {
  switch (l) {
    case ErrorLabel::MissingWords: return "Missing Word(s)";
    case ErrorLabel::AdditionalWords: return "Additional Word(s)";
    case ErrorLabel::HyphenatedMissing: return "Hyphenated (missing)";
    case ErrorLabel::HyphenatedExtraChars: return "Hyphenated (extra chars)";
    case ErrorLabel::HyphenationCharacter: return "Hyphenation Character";
  }
  return {};
}

void report_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  const RawRecords raw = read_records(o.corpus, read_options(o));
  const Corpus corpus(raw.records);  // rejects duplicate ids
  for (const auto& issue : validate(corpus.lines()))
    err << to_string(issue.severity) << ": " << issue.locator_text() << ": " << to_string(issue.code) << ": "
        << issue.detail << '\n';
  Sink sink(o.out, out, !o.no_timestamp);
  write_corpus(sink.stream(), corpus);
  sink.close();
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  ReadOptions r = read_options(o);
  r.normalize = false;
  RawRecords raw = read_records(o.corpus, r, /*lenient=*/true);
  std::optional<std::filesystem::path> image_root;
  if (!o.image_root.empty()) image_root = o.image_root;

  // Row-level problems first, then record-level ones.
  std::vector<ValidationIssue> issues = raw.issues;
  for (auto& issue : validate(raw.records, image_root)) issues.push_back(std::move(issue));

  Sink sink(o.out, out, !o.no_timestamp);
  bool any_error = false;
  for (const auto& issue : issues) {
    any_error |= issue.severity == IssueSeverity::Error;
    if (output_format(o) == OutputFormat::Table) {
      sink.stream() << std::left << std::setw(8) << to_string(issue.severity) << std::setw(20) << issue.locator_text()
                    << std::setw(20) << to_string(issue.code) << issue.detail << '\n';
    } else {
      ordered_json j;
      j["severity"] = to_string(issue.severity);
      if (const auto* id = std::get_if<std::string>(&issue.locator))
        j["line_id"] = *id;
      else
        j["row"] = std::get<RowLocator>(issue.locator).row;
      j["code"] = to_string(issue.code);
      j["detail"] = issue.detail;
      sink.stream() << j.dump() << '\n';
    }
  }
  if (output_format(o) == OutputFormat::Table && issues.empty()) sink.stream() << "no issues\n";
  sink.close();
  return any_error ? kDomainError : kOk;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream&) {
  const CorpusStats stats = corpus_stats(load_corpus(o.corpus));
  Sink sink(o.out, out, !o.no_timestamp);
  auto& s = sink.stream();
  const std::pair<const char*, const SplitCounts*> cols[] = {
      {"train", &stats.train}, {"validation", &stats.validation}, {"test", &stats.test}, {"total", &stats.total}};
  if (output_format(o) == OutputFormat::Table) {
    s << std::left << std::setw(14) << "" << std::right << std::setw(12) << "Training" << std::setw(12) << "Validation"
      << std::setw(12) << "Test" << std::setw(12) << "Total" << '\n';
    const std::pair<const char*, std::size_t SplitCounts::*> rows[] = {{"# of letters", &SplitCounts::letters},
                                                                       {"# of pages", &SplitCounts::pages},
                                                                       {"# of lines", &SplitCounts::lines},
                                                                       {"# of words", &SplitCounts::words}};
    for (const auto& [name, field] : rows) {
      s << std::left << std::setw(14) << name << std::right;
      for (const auto& [_, counts] : cols) s << std::setw(12) << counts->*field;
      s << '\n';
    }
  } else {
    for (const auto& [name, c] : cols) {
      ordered_json j;
      j["split"] = name;
      j["letters"] = c->letters;
      j["pages"] = c->pages;
      j["lines"] = c->lines;
      j["words"] = c->words;
      s << j.dump() << '\n';
    }
  }
  sink.close();
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream&) {
  const Corpus corpus = load_corpus(o.corpus);
  const Subset subset = subset_of(o);
  const Metrics m = evaluate(corpus, o.model, subset);
  Sink sink(o.out, out, !o.no_timestamp);
  if (output_format(o) == OutputFormat::Table) {
    const auto pct = [](const std::optional<double>& r) { return r ? fixed(*r * 100.0, 2) + "%" : "undefined"; };
    sink.stream() << "model   " << o.model << "\nsubset  " << subset.describe() << "\nlines   " << m.lines
                  << "\nCER     " << pct(m.cer()) << "  (" << m.char_errors << " / " << m.char_total << ")"
                  << "\nWER     " << pct(m.wer()) << "  (" << m.word_errors << " / " << m.word_total << ")\n";
  } else {
    ordered_json j;
    j["model"] = o.model;
    j["subset"] = subset.describe();
    j["cer"] = optional_number(m.cer());
    j["wer"] = optional_number(m.wer());
    j["char_errors"] = m.char_errors;
    j["char_total"] = m.char_total;
    j["word_errors"] = m.word_errors;
    j["word_total"] = m.word_total;
    sink.stream() << j.dump() << '\n';
  }
  sink.close();
  return kOk;
}

void write_flag_output(const Options& o, std::ostream& out, const std::vector<HyphenationFlag>& flags) {
  Sink sink(o.out, out, !o.no_timestamp);
  if (output_format(o) == OutputFormat::Table) {
    for (const auto& f : flags) {
      sink.stream() << std::left << std::setw(16) << f.line_id << std::setw(16) << to_string(f.trigger);
      if (f.run_kind) sink.stream() << std::setw(14) << to_string(*f.run_kind) << std::setw(5) << *f.run_length;
      if (f.related_line_id) sink.stream() << "-> " << *f.related_line_id;
      sink.stream() << '\n';
    }
  } else {
    write_flags(sink.stream(), flags);
  }
  sink.close();
}

int cmd_detect(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(o.corpus);
  const DetectionResult r = detect_candidates(corpus, o.model, o.min_run);
  for (const auto& e : r.errors) err << "warning: " << e.line_id << ": " << e.message << '\n';
  write_flag_output(o, out, r.flags);
  return kOk;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream&) {
  const Corpus corpus = load_corpus(o.corpus);
  std::u32string symbols = o.symbols.empty() ? default_hyphen_symbols(o.colon) : text::decode_utf8(o.symbols);
  if (!o.symbols.empty() && o.colon && symbols.find(U':') == std::u32string::npos) symbols += U':';
  const TextField field = o.model.empty() ? TextField::ground_truth() : TextField::prediction(o.model);
  Sink sink(o.out, out, !o.no_timestamp);
  for (const auto& hit : scan_hyphen_symbols(corpus, field, symbols)) {
    const std::string sym = text::encode_utf8(std::u32string(1, hit.symbol));
    if (output_format(o) == OutputFormat::Table) {
      sink.stream() << std::left << std::setw(16) << hit.line_id << sym << "  @" << hit.position << '\n';
    } else {
      ordered_json j;
      j["line_id"] = hit.line_id;
      j["symbol"] = sym;
      j["position"] = hit.position;
      sink.stream() << j.dump() << '\n';
    }
  }
  sink.close();
  return kOk;
}

int cmd_ingest_markers(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(o.corpus);
  const std::u32string marker = text::decode_utf8(o.marker);
  if (marker.size() != 1) throw Error("--marker must be a single character");
  const MarkerIngest r = ingest_marker_flags(std::filesystem::path(o.markers), corpus, marker.front());
  report_warnings(err, r.warnings);
  write_flag_output(o, out, r.flags);
  return kOk;
}

void write_lines(const std::string& path, const std::vector<LineRecord>& lines, bool timestamp) {
  if (path.empty()) return;
  Sink sink(path, std::cout, timestamp);
  write_corpus(sink.stream(), sorted_by_id(lines));
  sink.close();
}

int cmd_exclude(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(o.corpus);
  const auto flags = read_flags(std::filesystem::path(o.flags));
  const Split scope = o.split.empty() ? Split::Train : *parse_split(o.split);
  const Exclusion r = exclude_flagged(corpus, flags, scope);
  report_warnings(err, r.warnings);
  write_lines(o.out, r.kept, !o.no_timestamp);
  write_lines(o.removed, r.removed, !o.no_timestamp);

  Sink sink("", out, !o.no_timestamp);
  const std::size_t scope_size = r.kept.size() + r.removed.size();
  if (output_format(o) == OutputFormat::Table) {
    sink.stream() << "scope      " << to_string(scope) << "\nlines      " << scope_size << "\nkept       "
                  << r.kept.size() << "\nremoved    " << r.removed.size() << "\nretention  " << r.retention.str()
                  << "%\n";
  } else {
    ordered_json j;
    j["scope"] = to_string(scope);
    j["lines"] = scope_size;
    j["kept"] = r.kept.size();
    j["removed"] = r.removed.size();
    j["retention_percent"] = r.retention.value();
    sink.stream() << j.dump() << '\n';
  }
  sink.close();
  return kOk;
}

int cmd_filter(const Options& o, std::ostream& out, std::ostream&) {
  const Corpus corpus = load_corpus(o.corpus);
  const Subset subset = subset_of(o);
  const DeviationFilter r = filter_by_deviation(corpus, o.model, subset, o.k);
  write_lines(o.out, r.kept, !o.no_timestamp);
  write_lines(o.removed, r.removed, !o.no_timestamp);

  Sink sink("", out, !o.no_timestamp);
  if (output_format(o) == OutputFormat::Table) {
    sink.stream() << "model      " << r.stats.model << "\nsubset     " << r.stats.subset << "\nn          "
                  << r.stats.n << "\nmu         " << fixed(r.stats.mu, 4) << "\nsigma      " << fixed(r.stats.sigma, 4)
                  << "\nk          " << r.k << "\ninterval   [" << fixed(r.stats.mu - r.k * r.stats.sigma, 4) << ", "
                  << fixed(r.stats.mu + r.k * r.stats.sigma, 4) << "]\nkept       " << r.kept.size()
                  << "\nremoved    " << r.removed.size() << "\nretention  " << r.retention.str() << "%\n";
  } else {
    ordered_json j;
    j["model"] = r.stats.model;
    j["subset"] = r.stats.subset;
    j["n"] = r.stats.n;
    j["mu"] = r.stats.mu;
    j["sigma"] = r.stats.sigma;
    j["k"] = r.k;
    j["kept"] = r.kept.size();
    j["removed"] = r.removed.size();
    j["retention_percent"] = r.retention.value();
    sink.stream() << j.dump() << '\n';
  }
  sink.close();
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream&) {
  const AnnotationSnapshot snap = replay_log(o.annotations);
  Sink sink(o.out, out, !o.no_timestamp);
  auto& s = sink.stream();
  const bool table = output_format(o) == OutputFormat::Table;
  if (o.kind == "status") {
    const StatusReport rep = status_report(snap);
    if (table) {
      s << "Annotation Status\n";
      for (const auto& row : rep.rows)
        s << std::left << std::setw(12) << status_display(row.status) << std::right << std::setw(8) << row.count
          << "  (" << row.percent.str() << "%)\n";
      s << std::left << std::setw(12) << "Total" << std::right << std::setw(8) << rep.total << "  ("
        << (rep.total ? "100" : "0") << "%)\n";
    } else {
      for (const auto& row : rep.rows)
        s << ordered_json{{"status", to_string(row.status)}, {"count", row.count}, {"percent", row.percent.value()}}.dump()
          << '\n';
      s << ordered_json{{"status", "Total"}, {"count", rep.total}, {"percent", rep.total ? 100.0 : 0.0}}.dump() << '\n';
    }
  } else {
    const ErrorTypeReport rep = error_type_report(snap);
    if (table) {
      s << std::left << std::setw(26) << "Labels" << std::setw(20) << "Start of Line" << "End of Line\n";
      for (const auto& row : rep.rows) {
        std::string start = "-";
        if (row.start_count) start = std::to_string(*row.start_count) + " (" + row.start_percent->str() + "%)";
        s << std::left << std::setw(26) << label_display(row.label) << std::setw(20) << start << row.end_count << " ("
          << row.end_percent.str() << "%)\n";
      }
    } else {
      for (const auto& row : rep.rows) {
        ordered_json j;
        j["label"] = to_string(row.label);
        j["start_count"] = row.start_count ? ordered_json(*row.start_count) : ordered_json(nullptr);
        j["start_percent"] = row.start_percent ? ordered_json(row.start_percent->value()) : ordered_json(nullptr);
        j["end_count"] = row.end_count;
        j["end_percent"] = row.end_percent.value();
        j["total"] = rep.total;
        s << j.dump() << '\n';
      }
    }
  }
  sink.close();
  return kOk;
}

int cmd_export(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus(o.corpus);
  const Split scope = o.split.empty() ? Split::Test : *parse_split(o.split);
  const CorrectedExport r = export_corrected(corpus, replay_log(o.annotations), scope);
  report_warnings(err, r.warnings);
  Sink sink(o.out, out, !o.no_timestamp);
  write_corpus(sink.stream(), r.lines);
  sink.close();
  return kOk;
}

int cmd_serve(const Options& o, std::ostream&, std::ostream&) {
  ServiceConfig config;
  if (!o.config.empty()) config = load_service_config(o.config);
  apply_env_overrides(config);
  if (!o.corpus.empty()) config.corpus = o.corpus;
  if (!o.flags.empty()) config.flags = o.flags;
  if (!o.annotations.empty()) config.annotations = o.annotations;
  if (!o.image_root.empty()) config.image_root = o.image_root;
  if (!o.model.empty()) config.model = o.model;
  if (!o.cross_reference_url.empty()) config.cross_reference_url = o.cross_reference_url;
  if (!o.host.empty()) config.host = o.host;
  if (o.port >= 0) config.port = o.port;
  if (!o.ui_root.empty()) config.ui_root = std::filesystem::path(o.ui_root);
  return run_service(config);
}

// ---------------------------------------------------------------------------
// Diagnostics

void print_error(std::ostream& err, const char* kind, const std::exception& e, ordered_json extra = {}) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = e.what();
  if (extra.is_object())
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  err << j.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Audit and curate line-level handwriting transcription corpora", "gtcurate"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  const auto splits = CLI::IsMember({"train", "validation", "test"});
  const auto formats = CLI::IsMember({"jsonl", "table"});

  const auto add_common_out = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default: standard output)");
    sub->add_option("--format", o.format, "Output format")->check(formats);
    sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the '# generated_at' header line");
  };
  const auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Line-record corpus (jsonl)")->required()->envname("GTCURATE_CORPUS");
  };
  const auto add_model = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--model", o.model, "Model name whose predictions to use")->envname("GTCURATE_MODEL");
    if (required) opt->required();
  };

  auto* ingest = app.add_subcommand("ingest", "Normalize a corpus (NFC, trim) and write it as jsonl");
  add_corpus(ingest);
  ingest->add_option("--input-format", o.input_format, "Input format")->check(CLI::IsMember({"jsonl", "tsv-pairs"}));
  ingest->add_option("--split", o.split, "Split for tsv-pairs input")->check(splits);
  add_model(ingest, false);
  ingest->add_option("--page-id", o.page_id, "Page id for tsv-pairs input");
  ingest->add_option("--letter-id", o.letter_id, "Letter id for tsv-pairs input");
  add_common_out(ingest);

  auto* validate_cmd = app.add_subcommand("validate", "Report corpus invariant violations");
  add_corpus(validate_cmd);
  validate_cmd->add_option("--input-format", o.input_format, "Input format")
      ->check(CLI::IsMember({"jsonl", "tsv-pairs"}));
  validate_cmd->add_option("--image-root", o.image_root, "Directory that image_ref paths are relative to");
  add_common_out(validate_cmd);

  auto* stats = app.add_subcommand("stats", "Letters, pages, lines and words per split");
  add_corpus(stats);
  add_common_out(stats);

  auto* eval = app.add_subcommand("evaluate", "Micro-averaged CER and WER");
  add_corpus(eval);
  add_model(eval, true);
  eval->add_option("--split", o.split, "Restrict to one split")->check(splits);
  eval->add_option("--ids", o.ids, "Comma-separated line ids");
  add_common_out(eval);

  auto* detect = app.add_subcommand("detect-hyphen", "Flag hyphenation-error candidates from boundary runs");
  add_corpus(detect);
  add_model(detect, true);
  detect->add_option("--min-run", o.min_run, "Minimum pure insertion/deletion run")
      ->check(CLI::PositiveNumber)
      ->envname("GTCURATE_MIN_RUN");
  add_common_out(detect);

  auto* scan = app.add_subcommand("scan-symbols", "Lines ending in a hyphen symbol");
  add_corpus(scan);
  add_model(scan, false);
  scan->add_option("--symbols", o.symbols, "Symbol set (default: -=¬)");
  scan->add_flag("--colon", o.colon, "Also treat ':' as a hyphen symbol");
  add_common_out(scan);

  auto* markers = app.add_subcommand("ingest-markers", "Flags from an external detector's marker transcriptions");
  add_corpus(markers);
  markers->add_option("--markers", o.markers, "id<TAB>text file")->required();
  markers->add_option("--marker", o.marker, "End-of-line marker character");
  add_common_out(markers);

  auto* exclude = app.add_subcommand("exclude-flagged", "Drop every flagged line from a split");
  add_corpus(exclude);
  exclude->add_option("--flags", o.flags, "Flag file (jsonl)")->required()->envname("GTCURATE_FLAGS");
  exclude->add_option("--split", o.split, "Scope split (default: train)")->check(splits);
  exclude->add_option("--removed", o.removed, "Write removed lines here");
  add_common_out(exclude);

  auto* filter = app.add_subcommand("filter-deviation", "Keep lines whose length deviation is within mu ± k·sigma");
  add_corpus(filter);
  add_model(filter, true);
  filter->add_option("--split", o.split, "Subset split (default: all lines)")->check(splits);
  filter->add_option("--k", o.k, "Interval half-width in standard deviations")
      ->check(CLI::NonNegativeNumber)
      ->envname("GTCURATE_K");
  filter->add_option("--removed", o.removed, "Write removed lines here");
  add_common_out(filter);

  auto* report = app.add_subcommand("report", "Annotation status or error-type report");
  report->add_option("--annotations", o.annotations, "Annotation log (jsonl)")
      ->required()
      ->envname("GTCURATE_ANNOTATIONS");
  report->add_option("--kind", o.kind, "Report kind")->check(CLI::IsMember({"status", "errors"}));
  add_common_out(report);

  auto* exp = app.add_subcommand("export", "Corrected evaluation set from the annotation log");
  add_corpus(exp);
  exp->add_option("--annotations", o.annotations, "Annotation log (jsonl)")
      ->required()
      ->envname("GTCURATE_ANNOTATIONS");
  exp->add_option("--split", o.split, "Scope split (default: test)")->check(splits);
  add_common_out(exp);

  auto* serve = app.add_subcommand("serve", "Run the review HTTP service");
  serve->add_option("--config", o.config, "Service config file (json)");
  serve->add_option("--corpus", o.corpus, "Corpus (overrides config)");
  serve->add_option("--flags", o.flags, "Flag file (overrides config)");
  serve->add_option("--annotations", o.annotations, "Annotation log (overrides config)");
  serve->add_option("--image-root", o.image_root, "Image directory (overrides config)");
  serve->add_option("--model", o.model, "Model shown to annotators (overrides config)");
  serve->add_option("--cross-reference-url", o.cross_reference_url, "URL template with {letter_id}");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Bind port")->check(CLI::Range(0, 65535));
  serve->add_option("--ui-root", o.ui_root, "Static UI assets directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << " (run with --help for usage)\n";
    return kUsageError;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(o, out, err);
    if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    if (stats->parsed()) return cmd_stats(o, out, err);
    if (eval->parsed()) return cmd_evaluate(o, out, err);
    if (detect->parsed()) return cmd_detect(o, out, err);
    if (scan->parsed()) return cmd_scan(o, out, err);
    if (markers->parsed()) return cmd_ingest_markers(o, out, err);
    if (exclude->parsed()) return cmd_exclude(o, out, err);
    if (filter->parsed()) return cmd_filter(o, out, err);
    if (report->parsed()) return cmd_report(o, out, err);
    if (exp->parsed()) return cmd_export(o, out, err);
    if (serve->parsed()) return cmd_serve(o, out, err);
  } catch (const MissingPredictionError& e) {
    print_error(err, "MissingPrediction", e, {{"model", e.model()}, {"line_ids", e.line_ids()}});
    return kDomainError;
  } catch (const FormatError& e) {
    print_error(err, "Format", e, {{"source", e.source()}, {"row", e.row()}});
    return kDomainError;
  } catch (const DuplicateIdError& e) {
    print_error(err, "DuplicateId", e, {{"line_id", e.id()}});
    return kDomainError;
  } catch (const IoError& e) {
    print_error(err, "Io", e);
    return kDomainError;
  } catch (const Error& e) {
    print_error(err, "Domain", e);
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace gtcurate::cli

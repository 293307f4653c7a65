// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <httplib.h>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <sys/wait.h>
#include <unistd.h>

#include "gtcurate/align.hpp"
#include "gtcurate/annotation.hpp"
#include "gtcurate/deviation.hpp"
#include "gtcurate/error.hpp"
#include "gtcurate/hyphen.hpp"
#include "gtcurate/service.hpp"
#include "gtcurate/text.hpp"
#include "fixtures.hpp"
#include "support.hpp"

using namespace gtcurate;
using testsupport::make_line;

namespace {

// A failed check records its message; the first one is reported.
struct Check {
  std::vector<std::string> failures;
  std::string detail;

  bool operator()(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
    return ok;
  }
};

std::string u8(std::u32string_view s) { return text::encode_utf8(s); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed1(double v) {
  std::ostringstream s;
  s.precision(1);
  s << std::fixed << v;
  return s.str();
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::u32string, std::u32string>> random_pairs() {
  std::mt19937_64 rng(101);
  std::vector<std::pair<std::u32string, std::u32string>> out;
  for (int i = 0; i < 10000; ++i) {
    auto a = testsupport::random_string(rng, U"abcdefgh ", 0, 12);
    auto b = testsupport::random_string(rng, U"abcdefgh ", 0, 12);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

void oracle_equivalence(Check& check) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto all = testsupport::all_strings(U"abc", 6);
  std::size_t pairs = 0;
  for (const auto& a : all)
    for (const auto& b : all) {
      ++pairs;
      if (edit_alignment(a, b).distance != testsupport::oracle_distance(a, b)) {
        check(false, "distance differs for '" + u8(a) + "' / '" + u8(b) + "'");
        return;
      }
    }
  for (const auto& [a, b] : random_pairs()) {
    ++pairs;
    if (edit_alignment(a, b).distance != testsupport::oracle_distance(a, b)) {
      check(false, "distance differs for '" + u8(a) + "' / '" + u8(b) + "'");
      return;
    }
  }
  const double secs = seconds_since(t0);
  check(secs < 60.0, "took " + fixed1(secs) + " s");
  check.detail = std::to_string(pairs) + " pairs in " + fixed1(secs) + " s";
}

void alignment_replay(Check& check) {
  const auto all = testsupport::all_strings(U"abc", 6);
  std::size_t pairs = 0;
  std::u32string out;
  const auto one = [&](const std::u32string& a, const std::u32string& b) {
    ++pairs;
    for (const auto& r : {edit_alignment(a, b),
                          align_sequences_from_start(std::span<const char32_t>(a), std::span<const char32_t>(b))}) {
      if (!testsupport::replay(r, a, b, out) || out != b)
        return check(false, "replay of '" + u8(a) + "' -> '" + u8(b) + "' does not reproduce the target");
    }
    return true;
  };
  for (const auto& a : all)
    for (const auto& b : all)
      if (!one(a, b)) return;
  for (const auto& [a, b] : random_pairs())
    if (!one(a, b)) return;
  check.detail = std::to_string(pairs) + " pairs, both tie-break directions";
}

// ---------------------------------------------------------------------------

std::u32string corrupt(std::mt19937_64& rng, std::u32string s) {
  const std::u32string alphabet = U"abcdefghijklmnopqrstuvwxyzäöü ";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  const std::size_t edits = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
  for (std::size_t e = 0; e < edits; ++e) {
    const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, s.size())(rng);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), alphabet[pick(rng)]); break;
      case 1: if (pos < s.size()) s.erase(pos, 1); break;
      default: if (pos < s.size()) s[pos] = alphabet[pick(rng)]; break;
    }
  }
  return s;
}

std::vector<std::u32string> words_of(std::u32string_view s) {
  std::vector<std::u32string> out;
  std::u32string cur;
  for (char32_t c : s) {
    if (c == U' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Word sequences become symbol strings so the character oracle applies.
std::pair<std::u32string, std::u32string> word_symbols(std::u32string_view a, std::u32string_view b) {
  std::map<std::u32string, char32_t> ids;
  const auto encode = [&](std::u32string_view s) {
    std::u32string out;
    for (auto& w : words_of(s)) out += ids.try_emplace(w, static_cast<char32_t>(0xE000 + ids.size())).first->second;
    return out;
  };
  auto ea = encode(a);
  auto eb = encode(b);
  return {ea, eb};
}

void cer_wer_suite(Check& check) {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 200; ++i) {
    const auto s = u8(testsupport::random_sentence(rng));
    const auto m = line_metrics(s, s);
    if (!check(m.cer() == 0.0 && m.wer() == 0.0, "identity pair '" + s + "' has nonzero rates")) return;
  }

  const auto ago = line_metrics("Ago", "morti. Ago");
  check(ago.char_errors == 7 && ago.char_total == 3, "Ago / morti. Ago counts");
  check(ago.cer() == 7.0 / 3.0, "Ago / morti. Ago CER is not 7/3");

  for (int c = 0; c < 100; ++c) {
    std::vector<LineRecord> lines;
    std::size_t char_errors = 0, char_total = 0, word_errors = 0, word_total = 0;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const auto gt = testsupport::random_sentence(rng);
      const auto pred = corrupt(rng, gt);
      char_errors += testsupport::oracle_distance(gt, pred);
      char_total += gt.size();
      const auto [wg, wp] = word_symbols(gt, pred);
      word_errors += testsupport::oracle_distance(wg, wp);
      word_total += wg.size();
      lines.push_back(make_line("C" + std::to_string(1000 + i), "P", static_cast<std::int64_t>(i), Split::Test, u8(gt),
                                {{"m1", u8(pred)}}));
    }
    const auto m = evaluate(Corpus(lines), "m1", Subset::all());
    const bool ok = m.char_errors == char_errors && m.char_total == char_total && m.word_errors == word_errors &&
                    m.word_total == word_total && m.cer() == static_cast<double>(char_errors) / char_total &&
                    m.wer() == static_cast<double>(word_errors) / word_total;
    if (!check(ok, "corpus " + std::to_string(c) + ": micro-average differs from summed oracle counts")) return;
  }
  check.detail = "identity, CER 7/3, 100 random corpora";
}

// ---------------------------------------------------------------------------

void planted_affix_suite(Check& check) {
  std::mt19937_64 rng(107);
  const std::size_t min_run = 3;
  std::size_t flagged_pairs = 0;

  // Each pair gets its own two-line page; the affix goes on one of four boundaries.
  std::vector<LineRecord> lines;
  std::vector<std::optional<HyphenationFlag>> expected;
  for (int p = 0; p < 200; ++p) {
    const std::size_t k = 1 + static_cast<std::size_t>(p) % 10;
    const auto affix = testsupport::random_string(rng, U"abcdefghij ", k, k);
    const auto first = testsupport::random_string(rng, U"abcdefghij", 1, 12);
    const auto second = testsupport::random_string(rng, U"abcdefghij", 1, 12);
    const std::string page = "page" + std::to_string(1000 + p);
    const std::string a = "A" + std::to_string(1000 + p);
    const std::string b = "B" + std::to_string(1000 + p);
    std::u32string gt_a = first, pred_a = first, gt_b = second, pred_b = second;
    HyphenationFlag flag{a, FlagTrigger::TailRun, RunKind::InsertionRun, k, std::nullopt, "m1"};
    switch (p % 4) {
      case 0: pred_a += affix; break;
      case 1: gt_a += affix; flag.run_kind = RunKind::DeletionRun; break;
      case 2: pred_b = affix + pred_b; flag.trigger = FlagTrigger::NextHeadRun; flag.related_line_id = b; break;
      default:
        gt_b = affix + gt_b;
        flag.trigger = FlagTrigger::NextHeadRun;
        flag.run_kind = RunKind::DeletionRun;
        flag.related_line_id = b;
        break;
    }
    lines.push_back(make_line(a, page, 0, Split::Train, u8(gt_a), {{"m1", u8(pred_a)}}));
    lines.push_back(make_line(b, page, 1, Split::Train, u8(gt_b), {{"m1", u8(pred_b)}}));
    expected.push_back(k >= min_run ? std::optional(flag) : std::nullopt);
    flagged_pairs += k >= min_run;
  }
  const auto got = detect_candidates(Corpus(lines), "m1", min_run);
  check(got.errors.empty(), "detector reported line errors");
  // A head affix that repeats the text after it can also be aligned as a tail
  // run on the same line; those extra flags stay within the pair.
  std::vector<std::vector<HyphenationFlag>> by_pair(expected.size());
  for (const auto& f : got.flags) by_pair[std::stoul(f.line_id.substr(1)) - 1000].push_back(f);
  std::size_t doubled = 0;
  for (std::size_t p = 0; p < expected.size(); ++p) {
    const auto& flags = by_pair[p];
    const bool ok = expected[p] ? std::find(flags.begin(), flags.end(), *expected[p]) != flags.end() : flags.empty();
    if (!check(ok, "pair " + std::to_string(p) + " (affix length " + std::to_string(1 + p % 10) + ") has " +
                       std::to_string(flags.size()) + " flags" +
                       (expected[p] ? ", planted flag missing" : ", none expected")))
      break;
    doubled += flags.size() > 1;
  }

  // Up to five substitutions: a boundary run of 3 would need 3 more deletions than the distance allows.
  std::vector<LineRecord> subst;
  for (int p = 0; p < 200; ++p) {
    const auto gt = testsupport::random_string(rng, U"abcdefghij ", 6, 20);
    auto pred = gt;
    const std::size_t edits = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    for (std::size_t e = 0; e < edits; ++e) {
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, pred.size() - 1)(rng);
      pred[pos] = pred[pos] == U'z' ? U'y' : U'z';
    }
    subst.push_back(make_line("S" + std::to_string(1000 + p), "sub" + std::to_string(p / 5), p % 5, Split::Train,
                              u8(gt), {{"m1", u8(pred)}}));
  }
  const auto none = detect_candidates(Corpus(subst), "m1", min_run);
  check(none.flags.empty(), std::to_string(none.flags.size()) + " flags on pure substitutions");
  check.detail = "200 planted pairs, " + std::to_string(flagged_pairs) + " flagged (" + std::to_string(doubled) +
                 " also as a tail run); 200 substitution pairs, 0 flagged";
}

// ---------------------------------------------------------------------------

Corpus deviation_corpus(const std::vector<std::int64_t>& ds) {
  std::vector<LineRecord> lines;
  for (std::size_t i = 0; i < ds.size(); ++i)
    lines.push_back(make_line("D" + std::to_string(1000 + i), "P", static_cast<std::int64_t>(i), Split::Train,
                              std::string(200, 'x'), {{"m1", std::string(static_cast<std::size_t>(200 + ds[i]), 'y')}}));
  return Corpus(lines);
}

std::set<std::string> ids_of(const std::vector<LineRecord>& lines) {
  std::set<std::string> out;
  for (const auto& l : lines) out.insert(l.id);
  return out;
}

void deviation_filter(Check& check) {
  const auto r = filter_by_deviation(deviation_corpus({0, 0, 0, 4}), "m1", Subset::all(), 1.0);
  check(r.stats.mu == 1.0, "mu is not 1");
  check(std::abs(r.stats.sigma - std::sqrt(3.0)) <= 1e-15, "sigma is not sqrt(3)");
  check(r.retention.str() == "75.00", "retention " + r.retention.str() + "%");

  std::mt19937_64 rng(109);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<std::int64_t> ds(10000);
  for (auto& d : ds) d = std::llround(1000.0 * z(rng));
  const auto m = moments_of(ds);
  std::size_t kept = 0;
  for (auto d : ds) kept += m.within(d, 1.0);
  const auto normal = Percent::of(kept, ds.size());
  check(normal.hundredths >= 6630 && normal.hundredths <= 7030, "normal retention " + normal.str() + "%");

  for (int round = 0; round < 100; ++round) {
    std::vector<std::int64_t> base(std::uniform_int_distribution<std::size_t>(1, 80)(rng));
    for (auto& d : base) d = std::uniform_int_distribution<std::int64_t>(-40, 40)(rng);
    const std::int64_t c = std::uniform_int_distribution<std::int64_t>(-60, 60)(rng);
    auto shifted = base;
    for (auto& d : shifted) d += c;
    const double k = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const auto a = filter_by_deviation(deviation_corpus(base), "m1", Subset::all(), k);
    const auto b = filter_by_deviation(deviation_corpus(shifted), "m1", Subset::all(), k);
    if (!check(ids_of(a.kept) == ids_of(b.kept), "kept set changes under shift " + std::to_string(c))) break;
  }
  check.detail = "[0,0,0,4] -> 75.00%, normal " + normal.str() + "%, 100 shifts";
}

// ---------------------------------------------------------------------------

void report_arithmetic(Check& check) {
  const auto f = testsupport::annotated_split();
  testsupport::ScratchDir dir("acceptance-report");
  testsupport::write_annotated_split(f, dir / "corpus.jsonl", dir / "log.jsonl");
  const auto snap = replay_log(dir / "log.jsonl");

  const auto status = status_report(snap);
  const std::array<std::pair<std::size_t, const char*>, 4> want_status{
      {{415, "21.84"}, {1463, "77.00"}, {21, "1.11"}, {1, "0.05"}}};
  check(status.total == 1900, "status total");
  for (std::size_t i = 0; i < 4; ++i)
    check(status.rows[i].count == want_status[i].first && status.rows[i].percent.str() == want_status[i].second,
          std::string(to_string(status.rows[i].status)) + " " + status.rows[i].percent.str() + "%");

  struct Want {
    std::optional<std::size_t> start;
    const char* start_pct;
    std::size_t end;
    const char* end_pct;
  };
  const std::array<Want, 5> want_errors{{{191, "10.05", 104, "5.47"},
                                         {3, "0.16", 24, "1.26"},
                                         {315, "16.58", 111, "5.84"},
                                         {167, "8.79", 623, "32.79"},
                                         {std::nullopt, nullptr, 480, "25.26"}}};
  const auto errors = error_type_report(snap);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& row = errors.rows[i];
    const auto& w = want_errors[i];
    const bool start_ok = w.start ? (row.start_count == w.start && row.start_percent &&
                                     row.start_percent->str() == w.start_pct)
                                  : (!row.start_count && !row.start_percent);
    check(start_ok && row.end_count == w.end && row.end_percent.str() == w.end_pct,
          std::string(to_string(row.label)) + " row " + row.end_percent.str() + "%");
  }

  const auto exported = export_corrected(load_corpus(dir / "corpus.jsonl"), snap, Split::Test);
  check(exported.lines.size() == 1878, "export has " + std::to_string(exported.lines.size()) + " lines");
  check.detail = "21.84/77.00/1.11/0.05; 16.58/32.79/25.26; export 1878";
}

// ---------------------------------------------------------------------------

constexpr std::size_t kWriterLines = 40;

std::string writer_line(std::size_t i) { return "W" + std::to_string(1000 + i % kWriterLines); }

// The i-th submission of the writer child; a pure function of i.
AnnotationRecord writer_record(std::size_t i) {
  AnnotationRecord r;
  r.line_id = writer_line(i);
  r.status = static_cast<AnnotationStatus>(i % 4);
  if (r.status == AnnotationStatus::Fixed) r.corrected_text = "emendatum " + std::to_string(i);
  if (r.status != AnnotationStatus::Correct) r.start_labels.insert(static_cast<ErrorLabel>(i % 4));
  r.end_labels.insert(static_cast<ErrorLabel>(i % 5));
  if (r.status == AnnotationStatus::Correct) r.end_labels = {ErrorLabel::HyphenationCharacter};
  r.annotator_id = "writer";
  r.timestamp = "2024-01-01T00:00:00.000Z";
  return r;
}

void submit_writer_record(AnnotationStore& store, std::size_t i) {
  const auto r = writer_record(i);
  const auto res = store.submit(r, store.current_version(r.line_id), "original");
  if (res.status != SubmitStatus::Stored) throw Error("writer submission " + std::to_string(i) + " rejected");
}

[[noreturn]] void run_writer(const std::filesystem::path& log) {
  AnnotationStore store(log, {.fsync = true});
  for (std::size_t i = store.log_entries();; ++i) submit_writer_record(store, i);
}

std::size_t count_newlines(const std::filesystem::path& p) {
  const auto s = testsupport::read_file(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string report_fingerprint(const AnnotationSnapshot& snap) {
  std::string out;
  const auto s = status_report(snap);
  for (const auto& row : s.rows) out += std::to_string(row.count) + ":" + row.percent.str() + " ";
  const auto e = error_type_report(snap);
  for (const auto& row : e.rows)
    out += std::to_string(row.start_count.value_or(0)) + ":" + std::to_string(row.end_count) + ":" +
           row.end_percent.str() + " ";
  for (const auto& [id, entry] : snap) out += to_json_line(entry) + "\n";
  return out;
}

bool kill_and_replay(Check& check, const std::filesystem::path& log, std::size_t round, std::size_t& entries) {
  const pid_t child = ::fork();
  if (child == 0) {
    ::execl("/proc/self/exe", "acceptance", "--durability-writer", log.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  if (!check(child > 0, "fork failed")) return false;
  const std::size_t target = entries + 60 + 37 * round;
  const auto t0 = std::chrono::steady_clock::now();
  while (count_newlines(log) < target && seconds_since(t0) < 60.0)
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  ::kill(child, SIGKILL);
  int status = 0;
  ::waitpid(child, &status, 0);
  if (!check(WIFSIGNALED(status) && WTERMSIG(status) == SIGKILL, "writer exited before it was killed")) return false;

  AnnotationStore replayed(log, {.fsync = false});
  entries = replayed.log_entries();
  if (!check(entries >= target, "writer produced " + std::to_string(entries) + " entries")) return false;

  AnnotationStore reference;
  for (std::size_t i = 0; i < entries; ++i) submit_writer_record(reference, i);
  const auto got = report_fingerprint(replayed.snapshot());
  if (!check(got == report_fingerprint(reference.snapshot()), "replayed state differs after kill " +
                                                                  std::to_string(round)))
    return false;
  AnnotationStore again(log, {.fsync = false});
  return check(report_fingerprint(again.snapshot()) == got, "second replay differs");
}

void two_writer_conflict(Check& check) {
  const Corpus corpus({make_line("L1", "P", 0, Split::Test, "virtu", {{"m1", "virtutem"}})});
  AnnotationStore store;
  ReviewService service(corpus, {}, store, {});
  httplib::Server server;
  service.install(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  std::size_t rounds_ok = 0;
  for (int round = 0; round < 50; ++round) {
    const auto version = store.current_version("L1");
    std::array<int, 2> codes{};
    std::vector<std::thread> writers;
    for (int w = 0; w < 2; ++w)
      writers.emplace_back([&, w] {
        httplib::Client c("127.0.0.1", port);
        const auto body = nlohmann::json{{"status", "Unsure"}, {"expected_version", version}}.dump();
        const auto res = c.Post("/api/lines/L1/annotation", body, "application/json");
        codes[w] = res ? res->status : -1;
      });
    for (auto& t : writers) t.join();
    std::sort(codes.begin(), codes.end());
    rounds_ok += codes == std::array<int, 2>{200, 409};
  }
  server.stop();
  thread.join();
  check(rounds_ok == 50, std::to_string(50 - rounds_ok) + " of 50 two-writer rounds were not one 200 and one 409");
}

void store_durability(Check& check) {
  testsupport::ScratchDir dir("acceptance-durability");
  const auto log = dir / "log.jsonl";
  std::size_t entries = 0;
  for (std::size_t round = 0; round < 3; ++round)
    if (!kill_and_replay(check, log, round, entries)) return;
  two_writer_conflict(check);
  check.detail = "3 kills, " + std::to_string(entries) + " entries replayed; 50 two-writer rounds";
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> run_pipeline(const std::filesystem::path& dir, Check& check) {
  const std::string bin = GTCURATE_CLI;
  const std::string fixtures = GTCURATE_FIXTURES;
  const auto p = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::string> steps{
      "ingest --corpus " + fixtures + "/pipeline_50.jsonl --out " + p("corpus.jsonl"),
      "detect-hyphen --corpus " + p("corpus.jsonl") + " --model m1 --out " + p("flags.jsonl"),
      "exclude-flagged --corpus " + p("corpus.jsonl") + " --flags " + p("flags.jsonl") + " --split train --out " +
          p("kept.jsonl") + " --removed " + p("removed.jsonl") + " > " + p("exclude.json"),
      "filter-deviation --corpus " + p("kept.jsonl") + " --model m1 --split train --out " + p("filtered.jsonl") +
          " --removed " + p("deviating.jsonl") + " > " + p("filter.json"),
      "evaluate --corpus " + p("corpus.jsonl") + " --model m1 --split test --out " + p("evaluate.json"),
      "export --corpus " + p("corpus.jsonl") + " --annotations " + fixtures + "/pipeline_50_annotations.jsonl --out " +
          p("export.jsonl"),
  };
  for (const auto& step : steps) {
    const int raw = std::system((bin + " " + step + " --no-timestamp 2>>" + p("stderr.txt")).c_str());
    if (!check(WIFEXITED(raw) && WEXITSTATUS(raw) == 0, "step failed: " + step.substr(0, step.find(' ')))) return {};
  }
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    out[entry.path().filename().string()] = testsupport::read_file(entry.path());
  return out;
}

std::size_t record_rows(const std::string& s) {
  std::size_t n = 0;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) n += !line.empty() && line[0] != '#';
  return n;
}

void pipeline_smoke(Check& check) {
  testsupport::ScratchDir first("acceptance-e2e-a");
  testsupport::ScratchDir second("acceptance-e2e-b");
  const auto a = run_pipeline(first.path(), check);
  if (a.empty()) return;
  const auto b = run_pipeline(second.path(), check);
  if (b.empty()) return;
  check(a.size() == 11, std::to_string(a.size()) + " output files");
  check(a == b, "outputs differ between runs");
  check(record_rows(a.at("corpus.jsonl")) == 50, "ingest row count");
  check(record_rows(a.at("flags.jsonl")) == 2, "flag count");
  check(record_rows(a.at("removed.jsonl")) == 2, "excluded count");
  check(record_rows(a.at("export.jsonl")) == 8, "export count");
  check(a.at("corpus.jsonl").find("u\xCC\x88") == std::string::npos, "ingest left a decomposed umlaut");
  check.detail = std::to_string(a.size()) + " files byte-identical across two runs";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string_view(argv[1]) == "--durability-writer") run_writer(argv[2]);

  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"edit-distance oracle equivalence", oracle_equivalence},
      {"alignment replay", alignment_replay},
      {"CER/WER definitional suite", cer_wer_suite},
      {"hyphenation planted-affix suite", planted_affix_suite},
      {"deviation filter", deviation_filter},
      {"annotation report arithmetic and export", report_arithmetic},
      {"annotation store durability", store_durability},
      {"end-to-end CLI pipeline", pipeline_smoke},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check check;
    try {
      run(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    if (check.failures.empty()) {
      std::cout << "PASS  " << name << "  (" << check.detail << ")" << std::endl;
    } else {
      ++failed;
      std::cout << "FAIL  " << name << ": " << check.failures.front();
      if (check.failures.size() > 1) std::cout << " (+" << check.failures.size() - 1 << " more)";
      std::cout << std::endl;
    }
  }
  return failed ? 1 : 0;
}

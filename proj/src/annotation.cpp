#include "gtcurate/annotation.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gtcurate/error.hpp"
#include "gtcurate/text.hpp"

namespace gtcurate {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(AnnotationStatus s) noexcept {
  switch (s) {
    case AnnotationStatus::Correct: return "Correct";
    case AnnotationStatus::Fixed: return "Fixed";
    case AnnotationStatus::Unsure: return "Unsure";
    case AnnotationStatus::HasErrors: return "HasErrors";
  }
  return "Correct";
}

std::string_view to_string(ErrorLabel l) noexcept {
  switch (l) {
    case ErrorLabel::MissingWords: return "MissingWords";
    case ErrorLabel::AdditionalWords: return "AdditionalWords";
    case ErrorLabel::HyphenatedMissing: return "HyphenatedMissing";
    case ErrorLabel::HyphenatedExtraChars: return "HyphenatedExtraChars";
    case ErrorLabel::HyphenationCharacter: return "HyphenationCharacter";
  }
  return "MissingWords";
}

std::optional<AnnotationStatus> parse_status(std::string_view s) noexcept {
  for (auto st : kAllStatuses)
    if (to_string(st) == s) return st;
  return std::nullopt;
}

std::optional<ErrorLabel> parse_label(std::string_view s) noexcept {
  for (auto l : kAllLabels)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

std::vector<std::string> check_record(const AnnotationRecord& record, std::string_view original_ground_truth) {
  std::vector<std::string> v;
  if (record.line_id.empty()) v.emplace_back("line_id is empty");
  if (record.start_labels.count(ErrorLabel::HyphenationCharacter))
    v.emplace_back("HyphenationCharacter is an end-of-line label only");

  switch (record.status) {
    case AnnotationStatus::Fixed:
      if (!record.corrected_text)
        v.emplace_back("Fixed requires corrected_text");
      else if (*record.corrected_text == original_ground_truth)
        v.emplace_back("Fixed requires corrected_text to differ from the original ground truth");
      break;
    case AnnotationStatus::Correct: {
      if (record.corrected_text) v.emplace_back("Correct must not carry corrected_text");
      if (!record.start_labels.empty()) v.emplace_back("Correct must not carry start labels");
      const bool only_hyphen_char = std::all_of(record.end_labels.begin(), record.end_labels.end(),
                                                [](ErrorLabel l) { return l == ErrorLabel::HyphenationCharacter; });
      if (!only_hyphen_char) v.emplace_back("Correct allows only the HyphenationCharacter end label");
      break;
    }
    case AnnotationStatus::Unsure:
    case AnnotationStatus::HasErrors:
      break;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Log format

namespace {

ordered_json labels_json(const LabelSet& labels) {
  ordered_json arr = ordered_json::array();
  for (auto l : labels) arr.push_back(to_string(l));
  return arr;
}

LabelSet parse_labels(const json& arr, const std::string& source, std::size_t row) {
  if (!arr.is_array()) throw FormatError(source, row, "labels must be an array");
  LabelSet out;
  for (const auto& item : arr) {
    auto l = item.is_string() ? parse_label(item.get<std::string>()) : std::nullopt;
    if (!l) throw FormatError(source, row, "unknown label " + item.dump());
    out.insert(*l);
  }
  return out;
}

}  // namespace

std::string to_json_line(const StoredAnnotation& entry) {
  const auto& r = entry.record;
  ordered_json obj;
  obj["line_id"] = r.line_id;
  obj["status"] = to_string(r.status);
  obj["corrected_text"] = r.corrected_text ? ordered_json(*r.corrected_text) : ordered_json(nullptr);
  obj["start_labels"] = labels_json(r.start_labels);
  obj["end_labels"] = labels_json(r.end_labels);
  obj["annotator_id"] = r.annotator_id;
  obj["timestamp"] = r.timestamp;
  obj["version"] = r.version;
  obj["original_ground_truth"] = entry.original_ground_truth;
  return obj.dump();
}

StoredAnnotation parse_json_line(std::string_view line, const std::string& source, std::size_t row) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(source, row, std::string("invalid JSON: ") + e.what());
  }
  try {
    StoredAnnotation e;
    auto& r = e.record;
    r.line_id = obj.at("line_id").get<std::string>();
    auto status = parse_status(obj.at("status").get<std::string>());
    if (!status) throw FormatError(source, row, "unknown status");
    r.status = *status;
    if (obj.contains("corrected_text") && !obj["corrected_text"].is_null())
      r.corrected_text = obj["corrected_text"].get<std::string>();
    r.start_labels = parse_labels(obj.value("start_labels", json::array()), source, row);
    r.end_labels = parse_labels(obj.value("end_labels", json::array()), source, row);
    r.annotator_id = obj.value("annotator_id", std::string());
    r.timestamp = obj.value("timestamp", std::string());
    r.version = obj.at("version").get<std::int64_t>();
    e.original_ground_truth = obj.value("original_ground_truth", std::string());
    return e;
  } catch (const json::exception& ex) {
    throw FormatError(source, row, ex.what());
  }
}

std::string utc_now_iso8601() {
  const auto now = std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  const auto ms = (now.time_since_epoch() % std::chrono::seconds(1)).count();
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

struct ReplayOutcome {
  AnnotationSnapshot latest;
  std::size_t entries = 0;
  std::size_t valid_bytes = 0;   // prefix length to keep
  std::size_t dropped_bytes = 0;
  bool needs_newline = false;    // last record parsed but lacked '\n'
};

void apply(AnnotationSnapshot& latest, StoredAnnotation entry, const std::string& source, std::size_t row) {
  auto it = latest.find(entry.record.line_id);
  const std::int64_t current = it == latest.end() ? 0 : it->second.record.version;
  if (entry.record.version != current + 1)
    throw FormatError(source, row,
                      "version " + std::to_string(entry.record.version) + " for " + entry.record.line_id +
                          " does not follow " + std::to_string(current));
  latest[entry.record.line_id] = std::move(entry);
}

ReplayOutcome replay_bytes(const std::string& data, const std::string& source) {
  ReplayOutcome out;
  std::size_t pos = 0;
  std::size_t row = 0;
  while (pos < data.size()) {
    ++row;
    const std::size_t nl = data.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string_view line(data.data() + pos, (terminated ? nl : data.size()) - pos);
    if (!terminated) {
      // A crash mid-append leaves at most one unterminated line.
      try {
        apply(out.latest, parse_json_line(line, source, row), source, row);
        ++out.entries;
        out.valid_bytes = data.size();
        out.needs_newline = true;
      } catch (const FormatError&) {
        out.dropped_bytes = line.size();
      }
      break;
    }
    if (!line.empty() && line.front() != '#') {
      apply(out.latest, parse_json_line(line, source, row), source, row);
      ++out.entries;
    }
    pos = nl + 1;
    out.valid_bytes = pos;
  }
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_all(int fd, std::string_view bytes, const std::filesystem::path& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("write to " + path.string() + " failed: " + std::strerror(errno));
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

AnnotationSnapshot replay_log(const std::filesystem::path& log) {
  return replay_bytes(slurp(log), log.string()).latest;
}

AnnotationStore::AnnotationStore() = default;

AnnotationStore::AnnotationStore(std::filesystem::path log, Options options)
    : path_(std::move(log)), options_(options) {
  replay();
}

AnnotationStore::~AnnotationStore() {
  if (fd_ >= 0) ::close(fd_);
}

void AnnotationStore::replay() {
  const auto& path = *path_;
  std::string data;
  if (std::filesystem::exists(path)) data = slurp(path);
  ReplayOutcome r = replay_bytes(data, path.string());

  if (r.dropped_bytes > 0 && ::truncate(path.c_str(), static_cast<off_t>(r.valid_bytes)) != 0)
    throw IoError("cannot truncate torn tail of " + path.string() + ": " + std::strerror(errno));

  fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw IoError("cannot open " + path.string() + " for append: " + std::strerror(errno));
  if (r.needs_newline) write_all(fd_, "\n", path);

  latest_ = std::move(r.latest);
  entries_ = r.entries;
  dropped_tail_bytes_ = r.dropped_bytes;
}

void AnnotationStore::append(const StoredAnnotation& entry) {
  if (fd_ < 0) return;
  const std::string line = to_json_line(entry) + "\n";
  write_all(fd_, line, *path_);
  if (options_.fsync && ::fsync(fd_) != 0)
    throw IoError("fsync of " + path_->string() + " failed: " + std::strerror(errno));
}

SubmitResult AnnotationStore::submit(AnnotationRecord record, std::int64_t expected_version,
                                     std::string_view original_ground_truth) {
  if (record.corrected_text) {
    try {
      record.corrected_text = text::normalize_line(*record.corrected_text);
    } catch (const FormatError& e) {
      return {SubmitStatus::Invalid, std::nullopt, {std::string("corrected_text: ") + e.what()}};
    }
  }
  auto violations = check_record(record, original_ground_truth);
  if (!violations.empty()) return {SubmitStatus::Invalid, std::nullopt, std::move(violations)};

  std::unique_lock lock(mutex_);
  auto it = latest_.find(record.line_id);
  const std::int64_t current = it == latest_.end() ? 0 : it->second.record.version;
  if (expected_version != current) {
    SubmitResult r{SubmitStatus::Conflict, std::nullopt, {}};
    if (it != latest_.end()) r.record = it->second;
    r.violations.push_back("expected version " + std::to_string(expected_version) + " but current is " +
                           std::to_string(current));
    return r;
  }

  record.version = current + 1;
  if (record.timestamp.empty()) record.timestamp = utc_now_iso8601();
  StoredAnnotation entry{std::move(record), std::string(original_ground_truth)};
  append(entry);
  ++entries_;
  latest_[entry.record.line_id] = entry;
  return {SubmitStatus::Stored, std::move(entry), {}};
}

std::optional<StoredAnnotation> AnnotationStore::latest(std::string_view line_id) const {
  std::shared_lock lock(mutex_);
  auto it = latest_.find(std::string(line_id));
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

std::int64_t AnnotationStore::current_version(std::string_view line_id) const {
  std::shared_lock lock(mutex_);
  auto it = latest_.find(std::string(line_id));
  return it == latest_.end() ? 0 : it->second.record.version;
}

AnnotationSnapshot AnnotationStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return latest_;
}

std::size_t AnnotationStore::log_entries() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

// ---------------------------------------------------------------------------
// Reports and export

StatusReport status_report(const AnnotationSnapshot& annotations) {
  StatusReport rep;
  rep.total = annotations.size();
  std::array<std::size_t, 4> counts{};
  for (const auto& [id, e] : annotations) ++counts[static_cast<std::size_t>(e.record.status)];
  for (std::size_t i = 0; i < kAllStatuses.size(); ++i)
    rep.rows[i] = {kAllStatuses[i], counts[i], Percent::of(counts[i], rep.total)};
  return rep;
}

ErrorTypeReport error_type_report(const AnnotationSnapshot& annotations) {
  ErrorTypeReport rep;
  rep.total = annotations.size();
  std::array<std::size_t, 5> start{}, end{};
  for (const auto& [id, e] : annotations) {
    for (auto l : e.record.start_labels) ++start[static_cast<std::size_t>(l)];
    for (auto l : e.record.end_labels) ++end[static_cast<std::size_t>(l)];
  }
  for (std::size_t i = 0; i < kAllLabels.size(); ++i) {
    LabelRow row{kAllLabels[i], std::nullopt, std::nullopt, end[i], Percent::of(end[i], rep.total)};
    if (kAllLabels[i] != ErrorLabel::HyphenationCharacter) {
      row.start_count = start[i];
      row.start_percent = Percent::of(start[i], rep.total);
    }
    rep.rows[i] = row;
  }
  return rep;
}

CorrectedExport export_corrected(const Corpus& corpus, const AnnotationSnapshot& annotations, Split scope) {
  CorrectedExport out;
  for (const auto& line : corpus.lines()) {
    if (line.split != scope) continue;
    auto it = annotations.find(line.id);
    if (it == annotations.end()) {
      out.warnings.push_back("line " + line.id + " has no annotation, excluded");
      continue;
    }
    const auto& rec = it->second.record;
    if (rec.status != AnnotationStatus::Correct && rec.status != AnnotationStatus::Fixed) continue;
    LineRecord exported = line;
    exported.original_ground_truth = line.ground_truth;
    exported.annotation_status = std::string(to_string(rec.status));
    if (rec.status == AnnotationStatus::Fixed) exported.ground_truth = *rec.corrected_text;
    out.lines.push_back(std::move(exported));
  }
  std::sort(out.lines.begin(), out.lines.end(), [](const LineRecord& a, const LineRecord& b) { return a.id < b.id; });
  std::sort(out.warnings.begin(), out.warnings.end());
  return out;
}

}  // namespace gtcurate

#include "gtcurate/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "gtcurate/error.hpp"
#include "gtcurate/text.hpp"

namespace gtcurate {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view s) noexcept {
  if (s == "train") return Split::Train;
  if (s == "validation") return Split::Validation;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view s) noexcept {
  if (s == "jsonl") return CorpusFormat::Jsonl;
  if (s == "tsv-pairs") return CorpusFormat::TsvPairs;
  return std::nullopt;
}

const std::string* LineRecord::prediction(std::string_view model) const {
  auto it = predictions.find(std::string(model));
  return it == predictions.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<LineRecord> records) : records_(std::move(records)) {
  by_id_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!by_id_.emplace(records_[i].id, i).second) throw DuplicateIdError(records_[i].id);
    pages_[records_[i].page_id].push_back(i);
  }
  rank_.assign(records_.size(), 0);
  for (auto& [page, positions] : pages_) {
    std::sort(positions.begin(), positions.end(), [this](std::size_t a, std::size_t b) {
      const auto& la = records_[a];
      const auto& lb = records_[b];
      if (la.line_index != lb.line_index) return la.line_index < lb.line_index;
      return la.id < lb.id;
    });
    for (std::size_t r = 0; r < positions.size(); ++r) rank_[positions[r]] = r;
  }
}

const LineRecord* Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::vector<std::string> Corpus::page_ids() const {
  std::vector<std::string> ids;
  ids.reserve(pages_.size());
  for (const auto& [page, _] : pages_) ids.push_back(page);
  return ids;
}

bool Corpus::has_page(std::string_view page_id) const { return pages_.find(page_id) != pages_.end(); }

std::vector<const LineRecord*> Corpus::ordered_lines(std::string_view page_id) const {
  auto it = pages_.find(page_id);
  if (it == pages_.end()) throw UnknownKeyError("unknown page id: " + std::string(page_id));
  std::vector<const LineRecord*> out;
  out.reserve(it->second.size());
  for (std::size_t pos : it->second) out.push_back(&records_[pos]);
  return out;
}

const LineRecord* Corpus::successor(const LineRecord& line) const {
  auto id = by_id_.find(line.id);
  if (id == by_id_.end()) return nullptr;
  const auto& page = pages_.find(line.page_id)->second;
  const std::size_t r = rank_[id->second];
  return r + 1 < page.size() ? &records_[page[r + 1]] : nullptr;
}

const LineRecord* Corpus::predecessor(const LineRecord& line) const {
  auto id = by_id_.find(line.id);
  if (id == by_id_.end()) return nullptr;
  const auto& page = pages_.find(line.page_id)->second;
  const std::size_t r = rank_[id->second];
  return r > 0 ? &records_[page[r - 1]] : nullptr;
}

std::string Subset::describe() const {
  if (std::holds_alternative<std::monostate>(selector)) return "all";
  if (const auto* s = std::get_if<Split>(&selector)) return std::string(to_string(*s));
  return "ids(" + std::to_string(std::get<std::vector<std::string>>(selector).size()) + ")";
}

std::vector<const LineRecord*> select(const Corpus& corpus, const Subset& subset) {
  std::vector<const LineRecord*> out;
  if (const auto* ids = std::get_if<std::vector<std::string>>(&subset.selector)) {
    std::unordered_set<std::string> wanted;
    for (const auto& id : *ids) {
      if (corpus.find(id) == nullptr) throw UnknownKeyError("unknown line id: " + id);
      wanted.insert(id);
    }
    for (const auto& line : corpus.lines())
      if (wanted.count(line.id)) out.push_back(&line);
    return out;
  }
  const auto* split = std::get_if<Split>(&subset.selector);
  for (const auto& line : corpus.lines())
    if (split == nullptr || line.split == *split) out.push_back(&line);
  return out;
}

// ---------------------------------------------------------------------------
// Reading

namespace {

std::string require_string(const json& obj, const char* key, const std::string& source, std::size_t row) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw FormatError(source, row, std::string("field '") + key + "' missing or not a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, const std::string& source,
                                           std::size_t row) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw FormatError(source, row, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::string checked_text(std::string s, bool normalize, const std::string& source, std::size_t row) {
  try {
    if (normalize) return text::normalize_line(s);
    (void)text::decode_utf8(s);
    return s;
  } catch (const FormatError& e) {
    throw FormatError(source, row, e.what());
  }
}

bool skippable(std::string_view line) {
  return line.empty() || line.front() == '#' || line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

RawRecords parse_records(std::istream& in, const std::string& source, const ReadOptions& options,
                         bool lenient) {
  RawRecords out;
  std::string raw;
  std::size_t row = 0;
  while (std::getline(in, raw)) {
    ++row;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (skippable(raw)) continue;

    LineRecord rec;
    if (options.format == CorpusFormat::TsvPairs) {
      const auto t1 = raw.find('\t');
      const auto t2 = t1 == std::string::npos ? std::string::npos : raw.find('\t', t1 + 1);
      if (t2 == std::string::npos || raw.find('\t', t2 + 1) != std::string::npos)
        throw FormatError(source, row, "expected id<TAB>ground_truth<TAB>prediction");
      rec.id = raw.substr(0, t1);
      if (rec.id.empty()) throw FormatError(source, row, "empty id");
      rec.letter_id = options.tsv_letter_id;
      rec.page_id = options.tsv_page_id;
      rec.line_index = static_cast<std::int64_t>(out.records.size());
      rec.split = options.tsv_split;
      rec.ground_truth = checked_text(raw.substr(t1 + 1, t2 - t1 - 1), options.normalize, source, row);
      rec.predictions[options.tsv_model] = checked_text(raw.substr(t2 + 1), options.normalize, source, row);
    } else {
      json obj;
      try {
        obj = json::parse(raw);
      } catch (const json::parse_error& e) {
        throw FormatError(source, row, std::string("invalid JSON: ") + e.what());
      }
      if (!obj.is_object()) throw FormatError(source, row, "record is not a JSON object");
      rec.id = require_string(obj, "id", source, row);
      if (rec.id.empty()) throw FormatError(source, row, "empty id");
      rec.letter_id = require_string(obj, "letter_id", source, row);
      rec.page_id = require_string(obj, "page_id", source, row);
      auto idx = obj.find("line_index");
      if (idx == obj.end() || !idx->is_number_integer() || idx->get<std::int64_t>() < 0)
        throw FormatError(source, row, "field 'line_index' missing or not a non-negative integer");
      rec.line_index = idx->get<std::int64_t>();

      const std::string split_text = require_string(obj, "split", source, row);
      auto split = parse_split(split_text);
      if (!split) {
        if (!lenient) throw FormatError(source, row, "bad split '" + split_text + "'");
        out.issues.push_back({IssueSeverity::Error, RowLocator{row}, IssueCode::BadSplit,
                              "split '" + split_text + "' on line " + rec.id});
        continue;
      }
      rec.split = *split;
      rec.ground_truth = checked_text(require_string(obj, "ground_truth", source, row), options.normalize, source, row);

      auto preds = obj.find("predictions");
      if (preds != obj.end() && !preds->is_null()) {
        if (!preds->is_object()) throw FormatError(source, row, "field 'predictions' is not an object");
        for (auto it = preds->begin(); it != preds->end(); ++it) {
          if (!it.value().is_string())
            throw FormatError(source, row, "prediction '" + it.key() + "' is not a string");
          rec.predictions[it.key()] = checked_text(it.value().get<std::string>(), options.normalize, source, row);
        }
      }
      rec.image_ref = optional_string(obj, "image_ref", source, row);
      rec.original_ground_truth = optional_string(obj, "original_ground_truth", source, row);
      rec.annotation_status = optional_string(obj, "annotation_status", source, row);
    }
    out.records.push_back(std::move(rec));
    out.rows.push_back(row);
  }
  return out;
}

RawRecords read_records(const std::filesystem::path& path, const ReadOptions& options, bool lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return parse_records(in, path.string(), options, lenient);
}

Corpus load_corpus(const std::filesystem::path& path, const ReadOptions& options) {
  return Corpus(read_records(path, options).records);
}

// ---------------------------------------------------------------------------
// Writing

void write_record(std::ostream& out, const LineRecord& line) {
  ordered_json obj;
  obj["id"] = line.id;
  obj["letter_id"] = line.letter_id;
  obj["page_id"] = line.page_id;
  obj["line_index"] = line.line_index;
  obj["split"] = to_string(line.split);
  obj["ground_truth"] = line.ground_truth;
  obj["predictions"] = ordered_json::object();
  for (const auto& [model, text] : line.predictions) obj["predictions"][model] = text;
  if (line.image_ref) obj["image_ref"] = *line.image_ref;
  if (line.original_ground_truth) obj["original_ground_truth"] = *line.original_ground_truth;
  if (line.annotation_status) obj["annotation_status"] = *line.annotation_status;
  out << obj.dump() << '\n';
}

void write_corpus(std::ostream& out, std::span<const LineRecord> lines) {
  for (const auto& line : lines) write_record(out, line);
}

void write_corpus(std::ostream& out, const Corpus& corpus) { write_corpus(out, corpus.lines()); }

std::vector<LineRecord> sorted_by_id(std::span<const LineRecord> lines) {
  std::vector<LineRecord> out(lines.begin(), lines.end());
  std::sort(out.begin(), out.end(), [](const LineRecord& a, const LineRecord& b) { return a.id < b.id; });
  return out;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(IssueSeverity s) noexcept { return s == IssueSeverity::Error ? "error" : "warning"; }

std::string_view to_string(IssueCode c) noexcept {
  switch (c) {
    case IssueCode::DuplicateId: return "DuplicateId";
    case IssueCode::DuplicateOrderKey: return "DuplicateOrderKey";
    case IssueCode::MissingGroundTruth: return "MissingGroundTruth";
    case IssueCode::NonNormalizedText: return "NonNormalizedText";
    case IssueCode::BadSplit: return "BadSplit";
    case IssueCode::DanglingImageRef: return "DanglingImageRef";
  }
  return "DuplicateId";
}

std::string ValidationIssue::locator_text() const {
  if (const auto* id = std::get_if<std::string>(&locator)) return *id;
  return "row " + std::to_string(std::get<RowLocator>(locator).row);
}

namespace {

bool looks_like_url(std::string_view ref) { return ref.find("://") != std::string_view::npos; }

bool normalized_or_invalid(const std::string& s, bool& invalid) {
  try {
    return text::is_normalized_line(s);
  } catch (const FormatError&) {
    invalid = true;
    return false;
  }
}

}  // namespace

std::vector<ValidationIssue> validate(std::span<const LineRecord> records,
                                      const std::optional<std::filesystem::path>& image_root) {
  std::vector<ValidationIssue> issues;
  std::unordered_set<std::string> seen_ids;
  std::set<std::pair<std::string, std::int64_t>> seen_keys;

  for (const auto& rec : records) {
    if (!seen_ids.insert(rec.id).second)
      issues.push_back({IssueSeverity::Error, rec.id, IssueCode::DuplicateId, "id occurs more than once"});
    if (!seen_keys.emplace(rec.page_id, rec.line_index).second)
      issues.push_back({IssueSeverity::Error, rec.id, IssueCode::DuplicateOrderKey,
                        "page " + rec.page_id + " already has line_index " + std::to_string(rec.line_index)});
    if (rec.ground_truth.empty())
      issues.push_back({IssueSeverity::Warning, rec.id, IssueCode::MissingGroundTruth, "empty ground_truth"});

    bool invalid = false;
    std::string where;
    if (!normalized_or_invalid(rec.ground_truth, invalid)) where = "ground_truth";
    for (const auto& [model, pred] : rec.predictions) {
      if (!where.empty()) break;
      if (!normalized_or_invalid(pred, invalid)) where = "prediction " + model;
    }
    if (!where.empty())
      issues.push_back({invalid ? IssueSeverity::Error : IssueSeverity::Warning, rec.id, IssueCode::NonNormalizedText,
                        where + (invalid ? " is not valid UTF-8" : " is not NFC-composed and trimmed")});

    if (image_root && rec.image_ref && !looks_like_url(*rec.image_ref)) {
      std::error_code ec;
      if (!std::filesystem::exists(*image_root / *rec.image_ref, ec))
        issues.push_back({IssueSeverity::Warning, rec.id, IssueCode::DanglingImageRef,
                          "image " + *rec.image_ref + " not found"});
    }
  }
  return issues;
}

// ---------------------------------------------------------------------------
// Statistics

const SplitCounts& CorpusStats::of(Split s) const noexcept {
  switch (s) {
    case Split::Train: return train;
    case Split::Validation: return validation;
    case Split::Test: return test;
  }
  return train;
}

namespace {

SplitCounts& counts_of(CorpusStats& stats, Split s) {
  switch (s) {
    case Split::Train: return stats.train;
    case Split::Validation: return stats.validation;
    case Split::Test: return stats.test;
  }
  return stats.train;
}

}  // namespace

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  std::array<std::set<std::string>, 3> letters, pages;
  for (const auto& line : corpus.lines()) {
    const auto s = static_cast<std::size_t>(line.split);
    letters[s].insert(line.letter_id);
    pages[s].insert(line.page_id);
    auto& c = counts_of(stats, line.split);
    c.lines += 1;
    c.words += text::word_count(line.ground_truth);
  }
  for (Split s : {Split::Train, Split::Validation, Split::Test}) {
    auto& c = counts_of(stats, s);
    c.letters = letters[static_cast<std::size_t>(s)].size();
    c.pages = pages[static_cast<std::size_t>(s)].size();
    stats.total.letters += c.letters;
    stats.total.pages += c.pages;
    stats.total.lines += c.lines;
    stats.total.words += c.words;
  }
  return stats;
}

}  // namespace gtcurate

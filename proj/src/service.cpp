#include "gtcurate/service.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <httplib.h>

#include "gtcurate/error.hpp"
#include "gtcurate/text.hpp"

namespace gtcurate {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

ServiceConfig parse_service_config(const json& obj, const std::filesystem::path& base_dir) {
  if (!obj.is_object()) throw Error("service config must be a JSON object");
  ServiceConfig c;
  try {
    if (obj.contains("corpus")) c.corpus = resolve(base_dir, obj["corpus"].get<std::string>());
    if (obj.contains("flags")) c.flags = resolve(base_dir, obj["flags"].get<std::string>());
    if (obj.contains("annotations")) c.annotations = resolve(base_dir, obj["annotations"].get<std::string>());
    if (obj.contains("image_root")) c.image_root = resolve(base_dir, obj["image_root"].get<std::string>());
    if (obj.contains("ui_root")) c.ui_root = resolve(base_dir, obj["ui_root"].get<std::string>());
    c.model = obj.value("model", c.model);
    c.cross_reference_url = obj.value("cross_reference_url", c.cross_reference_url);
    c.host = obj.value("host", c.host);
    c.port = obj.value("port", c.port);
  } catch (const json::exception& e) {
    throw Error(std::string("service config: ") + e.what());
  }
  return c;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string(), 0, e.what());
  }
  return parse_service_config(obj, path.parent_path());
}

void apply_env_overrides(ServiceConfig& c, const std::function<const char*(const char*)>& getenv_fn) {
  const auto get = [&](const char* name) -> const char* {
    return getenv_fn ? getenv_fn(name) : std::getenv(name);
  };
  if (const char* v = get("GTCURATE_CORPUS")) c.corpus = v;
  if (const char* v = get("GTCURATE_FLAGS")) c.flags = v;
  if (const char* v = get("GTCURATE_ANNOTATIONS")) c.annotations = v;
  if (const char* v = get("GTCURATE_IMAGE_ROOT")) c.image_root = v;
  if (const char* v = get("GTCURATE_MODEL")) c.model = v;
  if (const char* v = get("GTCURATE_CROSS_REFERENCE_URL")) c.cross_reference_url = v;
  if (const char* v = get("GTCURATE_HOST")) c.host = v;
  if (const char* v = get("GTCURATE_UI_ROOT")) c.ui_root = std::filesystem::path(v);
  if (const char* v = get("GTCURATE_PORT")) {
    int port = 0;
    const std::string_view s(v);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), port);
    if (ec != std::errc() || p != s.data() + s.size() || port < 0 || port > 65535)
      throw Error("GTCURATE_PORT is not a valid port: " + std::string(s));
    c.port = port;
  }
}

// ---------------------------------------------------------------------------
// JSON views

ordered_json to_json(const HyphenationFlag& f) {
  ordered_json o;
  o["line_id"] = f.line_id;
  o["trigger"] = to_string(f.trigger);
  o["run_kind"] = f.run_kind ? ordered_json(to_string(*f.run_kind)) : ordered_json(nullptr);
  o["run_length"] = f.run_length ? ordered_json(*f.run_length) : ordered_json(nullptr);
  o["related_line_id"] = f.related_line_id ? ordered_json(*f.related_line_id) : ordered_json(nullptr);
  o["model"] = f.model;
  return o;
}

ordered_json to_json(const QueueItem& item) {
  const auto opt = [](const std::optional<std::string>& s) { return s ? ordered_json(*s) : ordered_json(nullptr); };
  ordered_json o;
  o["line_id"] = item.line_id;
  o["ground_truth"] = item.ground_truth;
  o["prediction"] = opt(item.prediction);
  o["flags"] = ordered_json::array();
  for (const auto& f : item.flags) o["flags"].push_back(to_json(f));
  o["neighbor_context"] = {{"previous", opt(item.neighbor_context.previous)},
                           {"next", opt(item.neighbor_context.next)}};
  o["image_url"] = opt(item.image_url);
  o["cross_reference_url"] = opt(item.cross_reference_url);
  o["current_version"] = item.current_version;
  return o;
}

ordered_json to_json(const StoredAnnotation& entry) { return ordered_json::parse(to_json_line(entry)); }

ordered_json to_json(const StatusReport& report) {
  ordered_json o;
  o["total"] = report.total;
  o["rows"] = ordered_json::array();
  for (const auto& row : report.rows)
    o["rows"].push_back({{"status", to_string(row.status)}, {"count", row.count}, {"percent", row.percent.value()}});
  return o;
}

ordered_json to_json(const ErrorTypeReport& report) {
  ordered_json o;
  o["total"] = report.total;
  o["rows"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["label"] = to_string(row.label);
    r["start_count"] = row.start_count ? ordered_json(*row.start_count) : ordered_json(nullptr);
    r["start_percent"] = row.start_percent ? ordered_json(row.start_percent->value()) : ordered_json(nullptr);
    r["end_count"] = row.end_count;
    r["end_percent"] = row.end_percent.value();
    o["rows"].push_back(std::move(r));
  }
  return o;
}

// ---------------------------------------------------------------------------
// Service

ReviewService::ReviewService(const Corpus& corpus, std::vector<HyphenationFlag> flags, AnnotationStore& store,
                             ServiceConfig config)
    : corpus_(corpus), flags_(std::move(flags)), store_(store), config_(std::move(config)) {
  sort_flags(flags_);
  for (const auto& f : flags_) {
    if (corpus_.find(f.line_id) == nullptr) continue;
    if (flagged_ids_.empty() || flagged_ids_.back() != f.line_id) flagged_ids_.push_back(f.line_id);
  }
}

QueueItem ReviewService::make_item(const LineRecord& line) const {
  QueueItem item;
  item.line_id = line.id;
  item.ground_truth = line.ground_truth;
  if (!config_.model.empty())
    if (const std::string* p = line.prediction(config_.model)) item.prediction = *p;
  const auto first = std::lower_bound(flags_.begin(), flags_.end(), line.id,
                                      [](const HyphenationFlag& f, const std::string& id) { return f.line_id < id; });
  const auto last = std::upper_bound(first, flags_.end(), line.id,
                                     [](const std::string& id, const HyphenationFlag& f) { return id < f.line_id; });
  item.flags.assign(first, last);
  if (const LineRecord* prev = corpus_.predecessor(line)) item.neighbor_context.previous = prev->ground_truth;
  if (const LineRecord* next = corpus_.successor(line)) item.neighbor_context.next = next->ground_truth;
  if (line.image_ref) item.image_url = "/api/lines/" + line.id + "/image";
  if (!config_.cross_reference_url.empty()) {
    std::string url = config_.cross_reference_url;
    const std::string placeholder = "{letter_id}";
    for (auto pos = url.find(placeholder); pos != std::string::npos; pos = url.find(placeholder, pos + line.letter_id.size()))
      url.replace(pos, placeholder.size(), line.letter_id);
    item.cross_reference_url = url;
  }
  item.current_version = store_.current_version(line.id);
  return item;
}

std::vector<QueueItem> ReviewService::queue(std::size_t limit, QueueFilter filter) const {
  std::vector<QueueItem> out;
  for (const auto& id : flagged_ids_) {
    if (out.size() >= limit) break;
    if (filter == QueueFilter::Unannotated && store_.current_version(id) > 0) continue;
    out.push_back(make_item(*corpus_.find(id)));
  }
  return out;
}

std::optional<QueueItem> ReviewService::item(std::string_view line_id) const {
  const LineRecord* line = corpus_.find(line_id);
  if (line == nullptr) return std::nullopt;
  return make_item(*line);
}

namespace {

void reply_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply_json(res, status, ordered_json{{"error", message}});
}

std::string content_type_for(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".tif" || ext == ".tiff") return "image/tiff";
  if (ext == ".gif") return "image/gif";
  if (ext == ".bmp") return "image/bmp";
  if (ext == ".webp") return "image/webp";
  return "application/octet-stream";
}

// Resolves an image reference under root; nullopt when it escapes root or is missing.
std::optional<std::filesystem::path> image_path(const std::filesystem::path& root, const std::string& ref) {
  if (root.empty() || ref.find("://") != std::string::npos) return std::nullopt;
  std::error_code ec;
  const auto base = std::filesystem::weakly_canonical(root, ec);
  if (ec) return std::nullopt;
  const auto full = std::filesystem::weakly_canonical(base / ref, ec);
  if (ec) return std::nullopt;
  const auto rel = full.lexically_relative(base);
  if (rel.empty() || *rel.begin() == "..") return std::nullopt;
  if (!std::filesystem::is_regular_file(full, ec)) return std::nullopt;
  return full;
}

struct ParsedSubmission {
  AnnotationRecord record;
  std::int64_t expected_version = 0;
};

// Throws std::invalid_argument (400) or std::domain_error (422).
ParsedSubmission parse_submission(const std::string& body, const std::string& line_id,
                                  const std::string& header_annotator) {
  json obj;
  try {
    obj = json::parse(body);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("body is not valid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw std::invalid_argument("body must be a JSON object");

  ParsedSubmission s;
  auto& r = s.record;
  r.line_id = line_id;
  if (obj.contains("line_id") && obj["line_id"] != line_id)
    throw std::invalid_argument("line_id in body does not match the path");

  const auto ev = obj.find("expected_version");
  if (ev == obj.end() || !ev->is_number_integer() || ev->get<std::int64_t>() < 0)
    throw std::invalid_argument("expected_version must be a non-negative integer");
  s.expected_version = ev->get<std::int64_t>();

  const auto st = obj.find("status");
  if (st == obj.end() || !st->is_string()) throw std::domain_error("status is required");
  const auto status = parse_status(st->get<std::string>());
  if (!status) throw std::domain_error("unknown status " + st->dump());
  r.status = *status;

  if (obj.contains("corrected_text") && !obj["corrected_text"].is_null()) {
    if (!obj["corrected_text"].is_string()) throw std::domain_error("corrected_text must be a string");
    r.corrected_text = obj["corrected_text"].get<std::string>();
  }
  const auto labels = [&](const char* key) {
    LabelSet out;
    if (!obj.contains(key) || obj[key].is_null()) return out;
    if (!obj[key].is_array()) throw std::domain_error(std::string(key) + " must be an array");
    for (const auto& item : obj[key]) {
      auto l = item.is_string() ? parse_label(item.get<std::string>()) : std::nullopt;
      if (!l) throw std::domain_error(std::string("unknown label in ") + key + ": " + item.dump());
      out.insert(*l);
    }
    return out;
  };
  r.start_labels = labels("start_labels");
  r.end_labels = labels("end_labels");

  if (obj.contains("annotator_id") && obj["annotator_id"].is_string())
    r.annotator_id = obj["annotator_id"].get<std::string>();
  else
    r.annotator_id = header_annotator;
  return s;
}

}  // namespace

void ReviewService::install(httplib::Server& server) const {
  server.Get("/api/queue", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t limit = 50;
    if (req.has_param("limit")) {
      const std::string v = req.get_param_value("limit");
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), limit);
      if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        return reply_error(res, 400, "limit must be a non-negative integer");
    }
    QueueFilter filter = QueueFilter::Unannotated;
    if (req.has_param("filter")) {
      const std::string f = req.get_param_value("filter");
      if (f == "all")
        filter = QueueFilter::All;
      else if (f != "unannotated")
        return reply_error(res, 400, "filter must be 'unannotated' or 'all'");
    }
    ordered_json arr = ordered_json::array();
    for (const auto& item : queue(limit, filter)) arr.push_back(to_json(item));
    reply_json(res, 200, arr);
  });

  server.Get("/api/lines/:id", [this](const httplib::Request& req, httplib::Response& res) {
    auto found = item(req.path_params.at("id"));
    if (!found) return reply_error(res, 404, "unknown line id");
    reply_json(res, 200, to_json(*found));
  });

  server.Get("/api/lines/:id/image", [this](const httplib::Request& req, httplib::Response& res) {
    const LineRecord* line = corpus_.find(req.path_params.at("id"));
    if (line == nullptr) return reply_error(res, 404, "unknown line id");
    if (!line->image_ref) return reply_error(res, 404, "line has no image");
    auto path = image_path(config_.image_root, *line->image_ref);
    if (!path) return reply_error(res, 404, "image not found");
    std::ifstream in(*path, std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    res.status = 200;
    res.set_content(bytes.str(), content_type_for(*path));
  });

  server.Post("/api/lines/:id/annotation", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.path_params.at("id");
    const LineRecord* line = corpus_.find(id);
    if (line == nullptr) return reply_error(res, 404, "unknown line id");
    ParsedSubmission sub;
    try {
      sub = parse_submission(req.body, id, req.get_header_value("X-Annotator-Id"));
    } catch (const std::invalid_argument& e) {
      return reply_error(res, 400, e.what());
    } catch (const std::domain_error& e) {
      return reply_json(res, 422, ordered_json{{"error", "invalid"}, {"violations", {e.what()}}});
    }
    SubmitResult result;
    try {
      result = store_.submit(std::move(sub.record), sub.expected_version, line->ground_truth);
    } catch (const Error& e) {
      return reply_error(res, 500, e.what());
    }
    switch (result.status) {
      case SubmitStatus::Stored:
        return reply_json(res, 200, to_json(*result.record));
      case SubmitStatus::Conflict:
        return reply_json(res, 409,
                          ordered_json{{"error", "conflict"},
                                       {"current", result.record ? to_json(*result.record) : ordered_json(nullptr)}});
      case SubmitStatus::Invalid:
        return reply_json(res, 422, ordered_json{{"error", "invalid"}, {"violations", result.violations}});
    }
  });

  server.Get("/api/reports/status", [this](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200, to_json(status_report(store_.snapshot())));
  });

  server.Get("/api/reports/errors", [this](const httplib::Request&, httplib::Response& res) {
    reply_json(res, 200, to_json(error_type_report(store_.snapshot())));
  });

  server.Get("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string scope_text = req.has_param("scope") ? req.get_param_value("scope") : "test";
    const auto scope = parse_split(scope_text);
    if (!scope) return reply_error(res, 400, "scope must be train, validation or test");
    const auto exported = export_corrected(corpus_, store_.snapshot(), *scope);
    std::ostringstream out;
    write_corpus(out, exported.lines);
    res.status = 200;
    res.set_content(out.str(), "application/x-ndjson; charset=utf-8");
  });

  if (config_.ui_root && std::filesystem::is_directory(*config_.ui_root))
    server.set_mount_point("/", config_.ui_root->string());
}

int run_service(const ServiceConfig& config) {
  if (config.corpus.empty()) throw Error("service config: corpus path is required");
  if (config.annotations.empty()) throw Error("service config: annotations path is required");
  const Corpus corpus = load_corpus(config.corpus);
  std::vector<HyphenationFlag> flags;
  if (!config.flags.empty()) flags = read_flags(config.flags);
  AnnotationStore store(config.annotations);
  if (store.dropped_tail_bytes() > 0)
    std::cerr << "warning: dropped " << store.dropped_tail_bytes() << " bytes of torn tail from "
              << config.annotations << '\n';

  ReviewService service(corpus, std::move(flags), store, config);
  httplib::Server server;
  service.install(server);
  std::cerr << "serving " << corpus.size() << " lines on http://" << config.host << ":" << config.port << '\n';
  if (!server.listen(config.host, config.port)) throw IoError("cannot bind " + config.host + ":" + std::to_string(config.port));
  return 0;
}

}  // namespace gtcurate

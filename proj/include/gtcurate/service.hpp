#pragma once

// JSON-over-HTTP interface for the review UI and scripts. Stateless above
// the corpus, the flag list and the annotation store.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gtcurate/annotation.hpp"
#include "gtcurate/corpus.hpp"
#include "gtcurate/hyphen.hpp"

namespace httplib {
class Server;
}

namespace gtcurate {

struct ServiceConfig {
  std::filesystem::path corpus;
  std::filesystem::path flags;
  std::filesystem::path annotations;
  std::filesystem::path image_root;
  std::string model;
  std::string cross_reference_url;  // "{letter_id}" is substituted
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> ui_root;  // static assets, mounted at /
};

/// Relative paths in the file resolve against the file's directory.
ServiceConfig load_service_config(const std::filesystem::path& path);
ServiceConfig parse_service_config(const nlohmann::json& obj, const std::filesystem::path& base_dir = {});

/// Applies GTCURATE_CORPUS, GTCURATE_FLAGS, GTCURATE_ANNOTATIONS,
/// GTCURATE_IMAGE_ROOT, GTCURATE_MODEL, GTCURATE_CROSS_REFERENCE_URL,
/// GTCURATE_HOST, GTCURATE_PORT and GTCURATE_UI_ROOT.
void apply_env_overrides(ServiceConfig& config,
                         const std::function<const char*(const char*)>& getenv_fn = nullptr);

struct NeighborContext {
  std::optional<std::string> previous;
  std::optional<std::string> next;
};

struct QueueItem {
  std::string line_id;
  std::string ground_truth;
  std::optional<std::string> prediction;
  std::vector<HyphenationFlag> flags;
  NeighborContext neighbor_context;
  std::optional<std::string> image_url;
  std::optional<std::string> cross_reference_url;
  std::int64_t current_version = 0;
};

nlohmann::ordered_json to_json(const QueueItem& item);
nlohmann::ordered_json to_json(const HyphenationFlag& flag);
nlohmann::ordered_json to_json(const StoredAnnotation& entry);
nlohmann::ordered_json to_json(const StatusReport& report);
nlohmann::ordered_json to_json(const ErrorTypeReport& report);

enum class QueueFilter : std::uint8_t { Unannotated, All };

class ReviewService {
 public:
  ReviewService(const Corpus& corpus, std::vector<HyphenationFlag> flags, AnnotationStore& store,
                ServiceConfig config);

  /// Flagged lines in line_id order, at most `limit`.
  std::vector<QueueItem> queue(std::size_t limit, QueueFilter filter) const;
  std::optional<QueueItem> item(std::string_view line_id) const;

  /// Registers every /api route (and the static UI mount, if configured).
  void install(httplib::Server& server) const;

 private:
  QueueItem make_item(const LineRecord& line) const;

  const Corpus& corpus_;
  std::vector<HyphenationFlag> flags_;  // sorted
  std::vector<std::string> flagged_ids_;
  AnnotationStore& store_;
  ServiceConfig config_;
};

/// Loads corpus, flags and log from `config`, binds, and serves until stopped.
int run_service(const ServiceConfig& config);

}  // namespace gtcurate

#include "gtcurate/serial.hpp"

#include <algorithm>

#include "gtcurate/error.hpp"

namespace gtcurate {
namespace detail {
void detect_page(const std::vector<const LineRecord*>& page, std::string_view model, std::size_t min_run,
                 std::vector<HyphenationFlag>& flags, std::vector<LineProblem>& errors);
}  // namespace detail

namespace serial {

namespace {

std::vector<const LineRecord*> require_predictions(const Corpus& corpus, std::string_view model,
                                                   const Subset& subset) {
  auto lines = select(corpus, subset);
  std::vector<std::string> missing;
  for (const auto* line : lines)
    if (line->prediction(model) == nullptr) missing.push_back(line->id);
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    throw MissingPredictionError(std::string(model), std::move(missing));
  }
  return lines;
}

}  // namespace

Metrics evaluate(const Corpus& corpus, std::string_view model, const Subset& subset) {
  Metrics total;
  for (const auto* line : require_predictions(corpus, model, subset))
    total += line_metrics(line->ground_truth, *line->prediction(model));
  return total;
}

DetectionResult detect_candidates(const Corpus& corpus, std::string_view model, std::size_t min_run) {
  if (min_run == 0) throw Error("min_run must be at least 1");
  DetectionResult result;
  for (const auto& page : corpus.page_ids())
    detail::detect_page(corpus.ordered_lines(page), model, min_run, result.flags, result.errors);
  sort_flags(result.flags);
  std::stable_sort(result.errors.begin(), result.errors.end(),
            [](const LineProblem& a, const LineProblem& b) { return a.line_id < b.line_id; });
  return result;
}

std::vector<LineDeviation> line_deviations(const Corpus& corpus, std::string_view model, const Subset& subset) {
  std::vector<LineDeviation> out;
  for (const auto* line : require_predictions(corpus, model, subset)) out.push_back(char_diff(*line, model));
  return out;
}

}  // namespace serial
}  // namespace gtcurate

#pragma once

// Training-set filter on the signed character-count difference between a
// model's prediction and the ground truth: keep lines inside mu ± k·sigma.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gtcurate/corpus.hpp"
#include "gtcurate/percent.hpp"

namespace gtcurate {

struct LineDeviation {
  std::string line_id;
  std::int64_t d = 0;  // chars(prediction) - chars(ground_truth)

  friend bool operator==(const LineDeviation&, const LineDeviation&) = default;
};

/// Throws MissingPredictionError.
LineDeviation char_diff(const LineRecord& line, std::string_view model);

// Exact integer moments of a deviation sample. The interval test is done on
// these directly so the boundary and shift invariance hold exactly.
struct DeviationMoments {
  std::int64_t n = 0;
  __int128 sum = 0;
  __int128 sum_sq = 0;

  void add(std::int64_t d) noexcept {
    ++n;
    sum += d;
    sum_sq += static_cast<__int128>(d) * d;
  }

  double mean() const noexcept;
  /// Population standard deviation (divides by n).
  double stddev() const noexcept;

  /// mu - k·sigma <= d <= mu + k·sigma, evaluated as
  /// (n·d - sum)^2 <= k^2 · (n·sum_sq - sum^2).
  bool within(std::int64_t d, double k) const noexcept;
};

DeviationMoments moments_of(std::span<const std::int64_t> deviations);

struct DeviationStats {
  double mu = 0.0;
  double sigma = 0.0;
  std::size_t n = 0;
  std::string model;
  std::string subset;
};

/// Per-line deviations in subset (corpus) order, parallel over lines.
std::vector<LineDeviation> line_deviations(const Corpus& corpus, std::string_view model, const Subset& subset);

/// Throws Error on an empty subset and MissingPredictionError listing the
/// lines without a prediction.
DeviationStats deviation_stats(const Corpus& corpus, std::string_view model, const Subset& subset);

struct DeviationFilter {
  std::vector<LineRecord> kept;
  std::vector<LineRecord> removed;
  Percent retention;
  DeviationStats stats;
  double k = 1.0;
};

/// Stats come from the whole subset before filtering; the interval is closed.
DeviationFilter filter_by_deviation(const Corpus& corpus, std::string_view model, const Subset& subset,
                                    double k = 1.0);

}  // namespace gtcurate

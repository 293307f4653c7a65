#include "gtcurate/deviation.hpp"

#include <algorithm>
#include <cmath>

#include "gtcurate/error.hpp"
#include "gtcurate/text.hpp"

namespace gtcurate {

LineDeviation char_diff(const LineRecord& line, std::string_view model) {
  const std::string* pred = line.prediction(model);
  if (pred == nullptr) throw MissingPredictionError(std::string(model), {line.id});
  return {line.id, static_cast<std::int64_t>(text::char_count(*pred)) -
                       static_cast<std::int64_t>(text::char_count(line.ground_truth))};
}

double DeviationMoments::mean() const noexcept {
  return n == 0 ? 0.0 : static_cast<double>(static_cast<long double>(sum) / n);
}

double DeviationMoments::stddev() const noexcept {
  if (n == 0) return 0.0;
  const __int128 scaled_var = static_cast<__int128>(n) * sum_sq - sum * sum;  // n^2 · var
  return static_cast<double>(std::sqrt(static_cast<long double>(scaled_var)) / n);
}

bool DeviationMoments::within(std::int64_t d, double k) const noexcept {
  const __int128 offset = static_cast<__int128>(n) * d - sum;
  const __int128 lhs = offset * offset;
  const __int128 scaled_var = static_cast<__int128>(n) * sum_sq - sum * sum;
  if (k == 1.0) return lhs <= scaled_var;
  const long double kk = static_cast<long double>(k) * k;
  return static_cast<long double>(lhs) <= kk * static_cast<long double>(scaled_var);
}

DeviationMoments moments_of(std::span<const std::int64_t> deviations) {
  DeviationMoments m;
  for (auto d : deviations) m.add(d);
  return m;
}

std::vector<LineDeviation> line_deviations(const Corpus& corpus, std::string_view model, const Subset& subset) {
  const auto lines = select(corpus, subset);
  std::vector<std::string> missing;
  for (const auto* line : lines)
    if (line->prediction(model) == nullptr) missing.push_back(line->id);
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    throw MissingPredictionError(std::string(model), std::move(missing));
  }

  std::vector<LineDeviation> out(lines.size());
  const auto n = static_cast<std::ptrdiff_t>(lines.size());
  bool failed = false;
#pragma omp parallel for schedule(static) reduction(|| : failed)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = char_diff(*lines[i], model);
    } catch (...) {
      failed = true;
    }
  }
  if (failed) throw Error("line_deviations: ill-formed text in corpus");
  return out;
}

namespace {

DeviationStats stats_from(const DeviationMoments& m, std::string_view model, const Subset& subset) {
  return {m.mean(), m.stddev(), static_cast<std::size_t>(m.n), std::string(model), subset.describe()};
}

DeviationMoments moments_of(const std::vector<LineDeviation>& devs) {
  DeviationMoments m;
  for (const auto& d : devs) m.add(d.d);
  return m;
}

}  // namespace

DeviationStats deviation_stats(const Corpus& corpus, std::string_view model, const Subset& subset) {
  const auto devs = line_deviations(corpus, model, subset);
  if (devs.empty()) throw Error("deviation_stats: subset '" + subset.describe() + "' is empty");
  return stats_from(moments_of(devs), model, subset);
}

DeviationFilter filter_by_deviation(const Corpus& corpus, std::string_view model, const Subset& subset, double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw Error("k must be a finite non-negative number");
  const auto devs = line_deviations(corpus, model, subset);
  if (devs.empty()) throw Error("filter_by_deviation: subset '" + subset.describe() + "' is empty");
  const DeviationMoments m = moments_of(devs);

  DeviationFilter out;
  out.stats = stats_from(m, model, subset);
  out.k = k;
  for (const auto& dev : devs) {
    const LineRecord& line = *corpus.find(dev.line_id);
    (m.within(dev.d, k) ? out.kept : out.removed).push_back(line);
  }
  out.retention = Percent::of(out.kept.size(), devs.size());
  return out;
}

}  // namespace gtcurate

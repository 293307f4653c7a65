#pragma once

// Single-threaded reference versions of the OpenMP kernels. Tests and the
// benchmark compare the parallel paths against these.

#include <string_view>
#include <vector>

#include "gtcurate/align.hpp"
#include "gtcurate/corpus.hpp"
#include "gtcurate/deviation.hpp"
#include "gtcurate/hyphen.hpp"

namespace gtcurate::serial {

Metrics evaluate(const Corpus& corpus, std::string_view model, const Subset& subset);
DetectionResult detect_candidates(const Corpus& corpus, std::string_view model, std::size_t min_run = 3);
std::vector<LineDeviation> line_deviations(const Corpus& corpus, std::string_view model, const Subset& subset);

}  // namespace gtcurate::serial

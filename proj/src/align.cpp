#include "gtcurate/align.hpp"

#include <algorithm>

#include "gtcurate/error.hpp"
#include "gtcurate/text.hpp"

namespace gtcurate {

std::string_view to_string(EditKind k) noexcept {
  switch (k) {
    case EditKind::Match: return "Match";
    case EditKind::Substitute: return "Substitute";
    case EditKind::Insert: return "Insert";
    case EditKind::Delete: return "Delete";
  }
  return "Match";
}

AlignmentResult edit_alignment(std::u32string_view source, std::u32string_view target) {
  return align_sequences(std::span<const char32_t>(source.data(), source.size()),
                         std::span<const char32_t>(target.data(), target.size()));
}

AlignmentResult edit_alignment(std::string_view source, std::string_view target) {
  return edit_alignment(std::u32string_view(text::decode_utf8(source)), std::u32string_view(text::decode_utf8(target)));
}

std::size_t edit_distance(std::u32string_view source, std::u32string_view target) {
  return sequence_distance(std::span<const char32_t>(source.data(), source.size()),
                           std::span<const char32_t>(target.data(), target.size()));
}

namespace {

std::optional<double> rate(std::size_t lines, std::size_t errors, std::size_t total) noexcept {
  if (total > 0) return static_cast<double>(errors) / static_cast<double>(total);
  if (lines > 0 && errors == 0) return 0.0;
  return std::nullopt;
}

}  // namespace

std::optional<double> Metrics::cer() const noexcept { return rate(lines, char_errors, char_total); }
std::optional<double> Metrics::wer() const noexcept { return rate(lines, word_errors, word_total); }

Metrics& Metrics::operator+=(const Metrics& other) noexcept {
  lines += other.lines;
  char_errors += other.char_errors;
  char_total += other.char_total;
  word_errors += other.word_errors;
  word_total += other.word_total;
  return *this;
}

Metrics line_metrics(std::string_view ground_truth, std::string_view prediction) {
  const std::u32string gt = text::decode_utf8(ground_truth);
  const std::u32string pred = text::decode_utf8(prediction);
  const auto gt_words = text::split_words(gt);
  const auto pred_words = text::split_words(pred);

  Metrics m;
  m.lines = 1;
  m.char_errors = edit_distance(gt, pred);
  m.char_total = gt.size();
  m.word_errors = sequence_distance(std::span<const std::u32string>(gt_words), std::span<const std::u32string>(pred_words));
  m.word_total = gt_words.size();
  return m;
}

namespace {

std::vector<const LineRecord*> checked_selection(const Corpus& corpus, std::string_view model, const Subset& subset) {
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
  const auto lines = checked_selection(corpus, model, subset);
  const auto n = static_cast<std::ptrdiff_t>(lines.size());

  std::size_t char_errors = 0, char_total = 0, word_errors = 0, word_total = 0;
  bool failed = false;
  // Counts are integers, so the reduction order cannot change the result.
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : char_errors, char_total, word_errors, word_total) \
    reduction(|| : failed)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const Metrics m = line_metrics(lines[i]->ground_truth, *lines[i]->prediction(model));
      char_errors += m.char_errors;
      char_total += m.char_total;
      word_errors += m.word_errors;
      word_total += m.word_total;
    } catch (...) {
      failed = true;
    }
  }
  if (failed) throw Error("evaluate: ill-formed text in corpus (load it through load_corpus)");

  Metrics total;
  total.lines = lines.size();
  total.char_errors = char_errors;
  total.char_total = char_total;
  total.word_errors = word_errors;
  total.word_total = word_total;
  return total;
}

}  // namespace gtcurate

// Serial reference vs OpenMP kernels over a synthetic corpus.
//
//   ./bench_kernels --benchmark_filter=Evaluate
//   OMP_NUM_THREADS=4 ./bench_kernels

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>

#include "gtcurate/serial.hpp"

namespace {

using namespace gtcurate;

std::string random_words(std::mt19937_64& rng, int max_words) {
  static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::uniform_int_distribution<int> words(3, max_words);
  std::uniform_int_distribution<int> len(2, 9);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (int w = words(rng); w > 0; --w) {
    if (!s.empty()) s += ' ';
    for (int c = len(rng); c > 0; --c) s += alphabet[pick(rng)];
  }
  return s;
}

// Pages of 25 lines; predictions carry boundary affixes and interior edits.
const Corpus& corpus_of(std::size_t lines) {
  static std::map<std::size_t, Corpus> cache;
  auto it = cache.find(lines);
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(lines);
  std::uniform_int_distribution<int> op(0, 4);
  std::vector<LineRecord> records;
  for (std::size_t i = 0; i < lines; ++i) {
    LineRecord r;
    r.id = "L" + std::to_string(1000000 + i);
    r.page_id = "P" + std::to_string(i / 25);
    r.letter_id = "letter" + std::to_string(i / 100);
    r.line_index = static_cast<std::int64_t>(i % 25);
    r.split = static_cast<Split>(i % 3);
    r.ground_truth = random_words(rng, 10);
    std::string pred = r.ground_truth;
    switch (op(rng)) {
      case 0: pred += "tem"; break;
      case 1: pred = pred.substr(4); break;
      case 2: pred[pred.size() / 2] = '#'; break;
      default: break;
    }
    r.predictions["m"] = pred;
    records.push_back(std::move(r));
  }
  return cache.emplace(lines, Corpus(records)).first->second;
}

void BM_EvaluateSerial(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate(c, "m", Subset::all()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(c, "m", Subset::all()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DetectSerial(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::detect_candidates(c, "m"));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DetectParallel(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(detect_candidates(c, "m"));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DeviationsSerial(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::line_deviations(c, "m", Subset::all()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DeviationsParallel(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(line_deviations(c, "m", Subset::all()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateParallel)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DetectSerial)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DetectParallel)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DeviationsSerial)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DeviationsParallel)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

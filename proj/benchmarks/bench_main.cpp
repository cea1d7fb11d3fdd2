#include <benchmark/benchmark.h>

#include <random>

#include "mog/evaluation.hpp"
#include "mog/kmeans.hpp"
#include "mog/memory_store.hpp"
#include "mog/organization.hpp"
#include "mog/segmenter.hpp"

namespace {

std::vector<mog::Embedding> random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<mog::Embedding> pts(n, mog::Embedding(dim));
  for (auto& p : pts)
    for (auto& x : p) x = d(rng);
  return pts;
}

std::string random_prose(std::size_t words, std::uint64_t seed) {
  static const std::vector<std::string> vocab{"the", "lake", "Dr.", "Varn", "basin", "1998.", "river", "mill",
                                              "U.S.", "opened", "in", "3.5", "million", "people.", "It", "grew!"};
  std::mt19937_64 rng(seed);
  std::string s;
  for (std::size_t i = 0; i < words; ++i) s += vocab[rng() % vocab.size()] + " ";
  return s;
}

void BM_KMeans(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 256, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mog::kmeans(pts, 5, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeans)->Arg(50)->Arg(200)->Arg(1000);

void BM_AssignUnit(benchmark::State& state) {
  const auto headings = random_points(static_cast<std::size_t>(state.range(0)), 256, 2);
  const auto units = random_points(64, 256, 3);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mog::assign_unit(units[i++ % units.size()], headings));
}
BENCHMARK(BM_AssignUnit)->Arg(4)->Arg(16);

void BM_RougeRecall(benchmark::State& state) {
  const auto words = static_cast<std::size_t>(state.range(0));
  const std::string cand = random_prose(words, 4), ref = random_prose(words, 5);
  for (auto _ : state) benchmark::DoNotOptimize(mog::rouge_recall(cand, ref));
}
BENCHMARK(BM_RougeRecall)->Arg(100)->Arg(1000);

void BM_Segment(benchmark::State& state) {
  const std::string text = random_prose(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(mog::segment_sentences(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Segment)->Arg(1000)->Arg(10000);

void BM_StoreSaveRecall(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = random_points(n, 64, 8);
  for (auto _ : state) {
    mog::MemoryStore store("Topic", 64);
    for (std::size_t i = 0; i < n; ++i)
      store.save("fact " + std::to_string(i), i % 2 ? "Topic/A" : "Topic/B", pts[i], "d");
    benchmark::DoNotOptimize(store.recall("Topic/A"));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StoreSaveRecall)->Arg(100)->Arg(2000);

}  // namespace
BENCHMARK_MAIN();

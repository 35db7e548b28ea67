#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "gct/config.hpp"
#include "gct/kernels.hpp"
#include "gct/synth.hpp"

namespace {

using namespace gct;

// 40 synthetic identities: the first 20 train the store, the rest are tested.
struct Workload {
  Config config;
  Dataset data;
  std::vector<TrainingPair> pairs;
  TemplateStore store;
  std::vector<TestImage> probes, galleries;

  Workload() {
    SynthParams sp;
    sp.n_identities = 40;
    data = synthetic_dataset(sp, config);
    for (int i = 0; i < 20; ++i)
      pairs.push_back({std::to_string(i), &data.images[2 * i].graph, &data.images[2 * i + 1].graph,
                       *data.images[2 * i].pose, *data.images[2 * i + 1].pose, i});
    store = build_template_store(pairs, {config.matching(), config.metric, 0});
    for (int i = 20; i < 40; ++i) {
      probes.push_back({&data.images[2 * i].graph, &*data.images[2 * i].pose});
      galleries.push_back({&data.images[2 * i + 1].graph, &*data.images[2 * i + 1].pose});
    }
  }
};

const Workload& workload() {
  static const Workload w;
  return w;
}

template <auto Kernel>
void BM_MatchPairs(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.pairs, w.config.matching()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.pairs.size()));
}

template <auto Kernel>
void BM_TransferMatrix(benchmark::State& state) {
  const Workload& w = workload();
  const TransferParams tp{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.store, w.probes, w.galleries, tp, nullptr));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.probes.size() * w.galleries.size()));
}

template <auto Kernel>
void BM_AlignedMatrix(benchmark::State& state) {
  const Workload& w = workload();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(w.probes, w.galleries, w.store.metric, nullptr));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.probes.size() * w.galleries.size()));
}

}  // namespace

BENCHMARK(BM_MatchPairs<gct::serial::match_pairs>)->Name("match_pairs/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatchPairs<gct::parallel::match_pairs>)->Name("match_pairs/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK(BM_TransferMatrix<gct::serial::transfer_distance_matrix>)
    ->Name("transfer_matrix/serial")
    ->Args({100, 3})
    ->Args({3, 1})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransferMatrix<gct::parallel::transfer_distance_matrix>)
    ->Name("transfer_matrix/parallel")
    ->Args({100, 3})
    ->Args({3, 1})
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_AlignedMatrix<gct::serial::aligned_distance_matrix>)->Name("aligned_matrix/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlignedMatrix<gct::parallel::aligned_distance_matrix>)->Name("aligned_matrix/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

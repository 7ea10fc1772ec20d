#include <benchmark/benchmark.h>

#include "tudof/af.hpp"
#include "tudof/classifier.hpp"
#include "tudof/network_io.hpp"
#include "tudof/simulator.hpp"

using namespace tudof;

namespace {

std::vector<LayeredNetwork> networks(int layers, int width, std::size_t count) {
  RandomNetworkConfig cfg;
  cfg.min_layers = cfg.max_layers = layers;
  cfg.max_width = width;
  cfg.edge_probability = 0.6;
  std::vector<LayeredNetwork> out;
  for (std::uint64_t s = 0; out.size() < count; ++s) out.push_back(random_network(cfg, s));
  return out;
}

const LayeredNetwork& bench_fixture(const char* text) {
  static const LayeredNetwork net = network_from_text(text);
  return net;
}

constexpr const char* kTwoMode = R"(layers 5
node s1 1
node s2 1
node u1 2
node u2 2
node v1 3
node v2 3
node w1 4
node w2 4
node d1 5
node d2 5
pairs s1 d1 s2 d2
seed 3
edge s1 u1 rand
edge s2 u1 rand
edge s2 u2 rand
edge u1 v1 rand
edge u2 v2 rand
edge u1 v2 rand
edge v1 w1 rand
edge v2 w2 rand
edge v1 w2 rand
edge w1 d1 rand
edge w2 d2 rand
)";

void BM_ClassifySumDof(benchmark::State& state) {
  const auto nets = networks(static_cast<int>(state.range(0)), 4, 64);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(classify_sum_dof(nets[k++ % nets.size()]));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_ClassifySumDof)->DenseRange(3, 12, 3);

void BM_BruteForceClassify(benchmark::State& state) {
  auto nets = networks(static_cast<int>(state.range(0)), 3, 256);
  std::erase_if(nets, [](const LayeredNetwork& n) { return n.size() > kBruteForceMaxNodes; });
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_classify(nets[k++ % nets.size()]));
}
BENCHMARK(BM_BruteForceClassify)->DenseRange(3, 5, 1);

void BM_ClassifyRegion(benchmark::State& state) {
  const auto nets = networks(6, 4, 64);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(classify_region(nets[k++ % nets.size()]));
}
BENCHMARK(BM_ClassifyRegion);

void BM_SynthesizeAndVerify(benchmark::State& state) {
  std::vector<std::pair<LayeredNetwork, Classification>> work;
  for (auto& net : networks(static_cast<int>(state.range(0)), 4, 200)) {
    auto c = classify_sum_dof(net);
    if (c.kind == DofCase::B || c.kind == DofCase::B_prime) work.emplace_back(std::move(net), std::move(c));
  }
  if (work.empty()) {
    state.SkipWithError("no B networks drawn");
    return;
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [net, c] = work[k++ % work.size()];
    const Synthesis s = synthesize(net, c);
    if (s.scheme) benchmark::DoNotOptimize(verify_scheme(net, *s.scheme));
  }
}
BENCHMARK(BM_SynthesizeAndVerify)->Arg(4)->Arg(6)->Arg(8);

void BM_SimulateRates(benchmark::State& state) {
  const auto& net = bench_fixture(kTwoMode);
  const Synthesis syn = synthesize(net, classify_sum_dof(net));
  SimConfig cfg;
  cfg.n_symbols = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_rates(net, *syn.scheme, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SimulateRates)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "arffklms/config.hpp"
#include "arffklms/experiment.hpp"
#include "arffklms/filters.hpp"
#include "arffklms/rff.hpp"
#include "arffklms/systems.hpp"

using namespace arffklms;

namespace {

const SampleStream& stream() {
    static const SampleStream s = [] {
        ExperimentConfig cfg = preset("stationary-paper");
        cfg.horizon = 4096;
        return make_stream(cfg, 0);
    }();
    return s;
}

template <class Filter>
void drive(benchmark::State& state, Filter& f) {
    const auto& s = stream();
    std::size_t n = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.step(s.input(n), s.observed[n]));
        n = (n + 1) % s.size();
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_ArffStep(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    ArffGklms f(sample_feature_bank({0.95, d, 2, 1}), {0.005, 0.1, 0.1});
    drive(state, f);
}
BENCHMARK(BM_ArffStep)->RangeMultiplier(2)->Range(16, 512);

void BM_RffStep(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    RffGklms f(sample_feature_bank({0.95, d, 2, 1}), 0.01);
    drive(state, f);
}
BENCHMARK(BM_RffStep)->RangeMultiplier(2)->Range(16, 512);

void BM_CsStep(benchmark::State& state) {
    GklmsCs f(GaussianKernel(0.95), 2, 0.2, 0.7);
    const auto& s = stream();
    for (std::size_t n = 0; n < s.size(); ++n) f.step(s.input(n), s.observed[n]);
    state.counters["dictionary"] = static_cast<double>(f.dictionary().size());
    drive(state, f);
}
BENCHMARK(BM_CsStep);

void BM_FeatureMap(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto bank = sample_feature_bank({0.95, d, 2, 1});
    std::vector<double> z(d);
    const std::vector<double> x{0.3, -0.7};
    for (auto _ : state) {
        feature_map_into(bank, x, z);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d));
}
BENCHMARK(BM_FeatureMap)->RangeMultiplier(4)->Range(16, 4096);

}  // namespace

BENCHMARK_MAIN();

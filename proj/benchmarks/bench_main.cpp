#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "hetq/bounds.hpp"
#include "hetq/config.hpp"
#include "hetq/mcsim.hpp"
#include "hetq/solver.hpp"

namespace {

hetq::ModelSpec example(int k) {
    return hetq::load_model_config(std::string(HETQ_CONFIG_DIR) + "/example" + std::to_string(k) + ".json").spec;
}

void BM_ApplyGenerator(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const hetq::Rates r{8.0, 6.0, 5.0, 11.0};
    std::vector<double> p(n, 1.0 / static_cast<double>(n)), out(n);
    for (auto _ : state) {
        hetq::apply_generator(r, p, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplyGenerator)->Arg(16)->Arg(128)->Arg(1024);

void BM_IntegrateUnitTime(benchmark::State& state) {
    const auto spec = example(3);
    hetq::SolveSettings s;
    s.n = static_cast<std::size_t>(state.range(0));
    s.horizon = 1.0;
    const auto p0 = hetq::unit_vector(s.n, 0);
    for (auto _ : state) {
        auto stats = hetq::integrate(spec, s, p0, nullptr);
        benchmark::DoNotOptimize(stats);
    }
}
BENCHMARK(BM_IntegrateUnitTime)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_TuneWeights(benchmark::State& state) {
    const auto spec = example(3);
    for (auto _ : state) benchmark::DoNotOptimize(hetq::tune_weights(spec));
}
BENCHMARK(BM_TuneWeights)->Unit(benchmark::kMillisecond);

void BM_BetaStarFrozen(benchmark::State& state) {
    const auto spec = example(1);
    for (auto _ : state) benchmark::DoNotOptimize(hetq::beta_star_frozen(spec, 1e-3));
}
BENCHMARK(BM_BetaStarFrozen)->Unit(benchmark::kMicrosecond);

void BM_SimulatePath(benchmark::State& state) {
    const auto spec = example(3);
    hetq::SimSettings s;
    s.sample_times = {1.0, 5.0, 50.0};
    s.rate_bound = hetq::dominating_rate(spec);
    std::uint64_t path = 0;
    for (auto _ : state) benchmark::DoNotOptimize(hetq::simulate_path(spec, s, path++));
}
BENCHMARK(BM_SimulatePath)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

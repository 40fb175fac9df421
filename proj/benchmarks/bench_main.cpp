#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "bodymass/allocator.hpp"
#include "bodymass/presets.hpp"
#include "bodymass/scenario.hpp"

namespace {

void BM_RunPreset(benchmark::State& state, std::string name) {
    const bodymass::ScenarioConfig cfg = bodymass::make_preset(name);
    for (auto _ : state) {
        auto log = bodymass::run_scenario(cfg);
        benchmark::DoNotOptimize(log.final_state);
    }
    state.SetItemsProcessed(state.iterations() * cfg.days);
}

void BM_SolveQp(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<bodymass::QpProblem> qps(256);
    for (auto& qp : qps) {
        qp.w_mat = bodymass::Mat2(Eigen::Vector2d(1 + u(rng) * 0.5, 2 + u(rng)).asDiagonal());
        qp.u_bar = {u(rng), u(rng)};
        qp.a_row << u(rng), u(rng);
        qp.b_scalar = 0.5 * u(rng);
        qp.lb = {-1, -1};
        qp.ub = {1, 1};
    }
    std::size_t i = 0;
    for (auto _ : state) {
        auto r = bodymass::solve_qp(qps[i++ & 255]);
        benchmark::DoNotOptimize(r.u);
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_RunPreset, bm_tdc, std::string("bm-tdc"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunPreset, bm_switch, std::string("bm-switch"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunPreset, fat_tdc, std::string("fat-tdc"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunPreset, fat_switch, std::string("fat-switch"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunPreset, alloc_fl, std::string("alloc-fl"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunPreset, alloc_smc, std::string("alloc-smc"))->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveQp);

BENCHMARK_MAIN();

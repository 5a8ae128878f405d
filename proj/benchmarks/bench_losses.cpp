#include <benchmark/benchmark.h>

#include "graspbench/gradcheck.hpp"
#include "graspbench/losses.hpp"
#include "graspbench/rng.hpp"

using namespace graspbench;

static void LossGpn(benchmark::State& state) {
    const ProposalBatch batch =
        random_proposal_batch(7, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const GpnLoss loss = loss_gpn(batch);
        benchmark::DoNotOptimize(loss.value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(LossGpn)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void LossGr(benchmark::State& state) {
    const GraspConfigBatch batch =
        random_config_batch(7, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const GrLoss loss = loss_gr(batch);
        benchmark::DoNotOptimize(loss.value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(LossGr)->RangeMultiplier(4)->Range(8, 512)->Complexity();

static void GradCheckBatch(benchmark::State& state) {
    const ProposalBatch batch = random_proposal_batch(11);
    for (auto _ : state) {
        const double err = max_rel_err_gpn(batch, 1e-5);
        benchmark::DoNotOptimize(err);
    }
}
BENCHMARK(GradCheckBatch);

static void FitToyHeadStep(benchmark::State& state) {
    ToyBatch batch;
    SplitMix64 rng(5);
    for (int i = 0; i < 32; ++i) {
        std::vector<double> row(16);
        for (double& v : row) v = rng.uniform(-1.0, 1.0);
        batch.features.push_back(row);
        batch.proposal_target.push_back(i % 2);
        batch.proposal_deltas.push_back({});
        batch.config_target.push_back(static_cast<int>(rng.next_below(kNumClasses)));
        batch.config_offsets.push_back({});
    }
    for (auto _ : state) {
        const FitResult fit = fit_toy_head(batch, 1, 0.01);
        benchmark::DoNotOptimize(fit.trajectory.back().total);
    }
}
BENCHMARK(FitToyHeadStep);

BENCHMARK_MAIN();

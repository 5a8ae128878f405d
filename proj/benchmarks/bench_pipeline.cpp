#include <benchmark/benchmark.h>

#include "graspbench/augment.hpp"
#include "graspbench/evaluation.hpp"
#include "graspbench/mask_pipeline.hpp"
#include "graspbench/synthetic.hpp"

using namespace graspbench;

static void Composite640(benchmark::State& state) {
    const BarScene scene = make_bar_scene(1, 640, 480);
    for (auto _ : state) {
        const MaskedImage out = composite(scene.rgb, scene.mask);
        benchmark::DoNotOptimize(out.rgb.data.data());
    }
}
BENCHMARK(Composite640);

static void ToRgd640(benchmark::State& state) {
    const BarScene scene = make_bar_scene(2, 640, 480);
    DepthMap depth = DepthMap::make(640, 480, 0.5f);
    for (auto _ : state) {
        const MaskedImage out = to_rgd(scene.rgb, depth, 0.0, 1.0);
        benchmark::DoNotOptimize(out.rgb.data.data());
    }
}
BENCHMARK(ToRgd640);

static void WarpRgb(benchmark::State& state) {
    const BarScene scene = make_bar_scene(3);
    const Transform transform{10.0, 20.0, -20.0, 1.1};
    for (auto _ : state) {
        const Image8 out = warp_rgb(scene.rgb, transform, Provenance::original);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(WarpRgb);

static void PcaBaseline(benchmark::State& state) {
    const BarScene scene = make_bar_scene(4);
    for (auto _ : state) {
        const BaselineResult result = pca_baseline(scene.mask);
        benchmark::DoNotOptimize(result.pose.theta);
    }
}
BENCHMARK(PcaBaseline);

BENCHMARK_MAIN();

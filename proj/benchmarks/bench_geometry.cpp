#include <benchmark/benchmark.h>

#include <vector>

#include "graspbench/geometry.hpp"
#include "graspbench/rng.hpp"

using namespace graspbench;

namespace {

std::vector<GraspPose5D> pose_set(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<GraspPose5D> poses;
    poses.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        poses.push_back({rng.uniform(20.0, 80.0), rng.uniform(20.0, 80.0),
                         rng.uniform(-90.0, 89.99), rng.uniform(5.0, 40.0),
                         rng.uniform(5.0, 40.0)});
    }
    return poses;
}

}  // namespace

static void JaccardRotated(benchmark::State& state) {
    const auto poses = pose_set(256, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        const double j = jaccard(poses[i % 256], poses[(i + 1) % 256]);
        benchmark::DoNotOptimize(j);
        ++i;
    }
}
BENCHMARK(JaccardRotated);

static void JaccardAxisAligned(benchmark::State& state) {
    const auto poses = pose_set(256, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        const double j =
            jaccard(poses[i % 256], poses[(i + 1) % 256], JaccardMode::axis_aligned);
        benchmark::DoNotOptimize(j);
        ++i;
    }
}
BENCHMARK(JaccardAxisAligned);

static void PoseQuadRoundTrip(benchmark::State& state) {
    const auto poses = pose_set(256, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        const GraspPose5D p = quad_to_pose(pose_to_quad(poses[i % 256]));
        benchmark::DoNotOptimize(p);
        ++i;
    }
}
BENCHMARK(PoseQuadRoundTrip);

static void ConvexClip(benchmark::State& state) {
    const auto poses = pose_set(256, 3);
    std::vector<GraspQuad> quads;
    for (const auto& p : poses) quads.push_back(pose_to_quad(p));
    std::size_t i = 0;
    for (auto _ : state) {
        const double a = convex_intersection_area(quads[i % 256], quads[(i + 1) % 256]);
        benchmark::DoNotOptimize(a);
        ++i;
    }
}
BENCHMARK(ConvexClip);

BENCHMARK_MAIN();

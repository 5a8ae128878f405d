#pragma once

#include <cstdint>

#include "graspbench/dataset.hpp"
#include "graspbench/image.hpp"

namespace graspbench {

// Synthetic single-bar scene for end-to-end pipeline exercise: a dark
// rotated bar on a light textured background, its mask, and one ground-truth
// grasp closing across the bar's short side.
struct BarScene {
    Sample sample;  // image paths empty; pixel data lives below
    Image8 rgb;
    Mask mask;
    GraspPose5D gt;
};

BarScene make_bar_scene(std::uint64_t seed, int width = 200, int height = 200);

}  // namespace graspbench

#pragma once

#include <utility>

#include "graspbench/dataset.hpp"
#include "graspbench/image.hpp"

namespace graspbench {

struct MaskedImage {
    Image8 rgb;
    Provenance provenance = Provenance::original;
};

// Keeps object pixels, replaces every background pixel with pure white:
// out[p] = rgb[p] where mask[p] = 1, else (255, 255, 255).
MaskedImage composite(const Image8& rgb, const Mask& mask);

// RGD image: the blue channel is replaced with depth quantized to a byte,
// blue = round_half_up(255 * clamp((d - d_min) / (d_max - d_min), 0, 1));
// non-finite depth maps to 0. R and G pass through byte-exact.
MaskedImage to_rgd(const Image8& rgb, const DepthMap& depth, double d_min,
                   double d_max);

// Per-image (min, max) over finite depth values; bad_range when no finite
// value exists or the range is degenerate.
std::pair<double, double> finite_depth_range(const DepthMap& depth);

}  // namespace graspbench

#pragma once

#include <array>

#include "graspbench/geometry.hpp"
#include "graspbench/image.hpp"

namespace graspbench {

using Color = std::array<std::uint8_t, 3>;

inline constexpr Color kGroundTruthColor{40, 90, 230};
inline constexpr Color kCorrectColor{30, 190, 60};
inline constexpr Color kIncorrectColor{220, 40, 40};

void draw_line(Image8& image, Vec2 a, Vec2 b, Color color, int thickness = 1);
void draw_quad(Image8& image, const GraspQuad& quad, Color color, int thickness = 1);

// Static overlay: ground truth in thin strokes, the prediction in thick
// strokes colored by correctness.
Image8 overlay_grasps(const Image8& rgb, const std::vector<GraspQuad>& ground_truth,
                      const GraspQuad& prediction, bool correct);

}  // namespace graspbench

#include "graspbench/draw.hpp"

#include <algorithm>
#include <cmath>

namespace graspbench {

namespace {

void stamp(Image8& image, int x, int y, Color color, int radius) {
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const int px = x + dx, py = y + dy;
            if (px < 0 || px >= image.width || py < 0 || py >= image.height) continue;
            for (int c = 0; c < image.channels; ++c) {
                image.at(px, py, c) = color[static_cast<std::size_t>(c % 3)];
            }
        }
    }
}

}  // namespace

void draw_line(Image8& image, Vec2 a, Vec2 b, Color color, int thickness) {
    const double length = norm(b - a);
    const int steps = std::max(1, static_cast<int>(std::ceil(length * 2.0)));
    const int radius = std::max(0, thickness / 2);
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const Vec2 p = a + (b - a) * t;
        stamp(image, static_cast<int>(std::lround(p.x)),
              static_cast<int>(std::lround(p.y)), color, radius);
    }
}

void draw_quad(Image8& image, const GraspQuad& quad, Color color, int thickness) {
    for (int i = 0; i < 4; ++i) {
        draw_line(image, quad.v[static_cast<std::size_t>(i)],
                  quad.v[static_cast<std::size_t>((i + 1) % 4)], color, thickness);
    }
}

Image8 overlay_grasps(const Image8& rgb, const std::vector<GraspQuad>& ground_truth,
                      const GraspQuad& prediction, bool correct) {
    Image8 out = rgb;
    for (const GraspQuad& gt : ground_truth) {
        draw_quad(out, gt, kGroundTruthColor, 1);
    }
    draw_quad(out, prediction, correct ? kCorrectColor : kIncorrectColor, 3);
    return out;
}

}  // namespace graspbench

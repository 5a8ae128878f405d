#include "graspbench/synthetic.hpp"

#include <cmath>
#include <string>

#include "graspbench/rng.hpp"

namespace graspbench {

BarScene make_bar_scene(std::uint64_t seed, int width, int height) {
    SplitMix64 rng(seed);
    const double length = rng.uniform(90.0, 110.0);
    const double thickness = rng.uniform(18.0, 24.0);
    const double axis_deg = rng.uniform(-90.0, 90.0);
    const double cx = rng.uniform(width * 0.35, width * 0.65);
    const double cy = rng.uniform(height * 0.35, height * 0.65);
    const auto bar_gray = static_cast<std::uint8_t>(40 + rng.next_below(50));

    const double rad = axis_deg * 3.14159265358979323846 / 180.0;
    const double ux = std::cos(rad), uy = std::sin(rad);

    BarScene scene;
    scene.rgb = Image8::make(width, height, 3);
    scene.mask = Mask::make(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double along = dx * ux + dy * uy;
            const double across = -dx * uy + dy * ux;
            const bool inside =
                std::fabs(along) <= length * 0.5 && std::fabs(across) <= thickness * 0.5;
            if (inside) {
                scene.mask.at(x, y) = 1;
                for (int c = 0; c < 3; ++c) scene.rgb.at(x, y, c) = bar_gray;
            } else {
                const auto noise = static_cast<std::uint8_t>(180 + rng.next_below(51));
                for (int c = 0; c < 3; ++c) scene.rgb.at(x, y, c) = noise;
            }
        }
    }

    scene.gt.x = cx;
    scene.gt.y = cy;
    scene.gt.theta = normalize_angle_deg(axis_deg + 90.0);  // closing across the bar
    scene.gt.w = thickness;
    scene.gt.h = 0.5 * length;

    scene.sample.id = "bar_" + std::to_string(seed);
    scene.sample.category = "bar";
    scene.sample.width = width;
    scene.sample.height = height;
    scene.sample.grasps_pos.push_back(pose_to_quad(scene.gt));
    return scene;
}

}  // namespace graspbench

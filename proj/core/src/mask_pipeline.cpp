#include "graspbench/mask_pipeline.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace graspbench {

MaskedImage composite(const Image8& rgb, const Mask& mask) {
    if (rgb.channels != 3) {
        raise(Errc::shape_mismatch, "composite expects an RGB image");
    }
    if (rgb.width != mask.width || rgb.height != mask.height) {
        raise(Errc::shape_mismatch, "image and mask dimensions differ");
    }
    MaskedImage out{rgb, Provenance::mask_composited};
    for (int y = 0; y < rgb.height; ++y) {
        for (int x = 0; x < rgb.width; ++x) {
            if (!mask.at(x, y)) {
                out.rgb.at(x, y, 0) = 255;
                out.rgb.at(x, y, 1) = 255;
                out.rgb.at(x, y, 2) = 255;
            }
        }
    }
    return out;
}

MaskedImage to_rgd(const Image8& rgb, const DepthMap& depth, double d_min,
                   double d_max) {
    if (rgb.channels != 3) {
        raise(Errc::shape_mismatch, "to_rgd expects an RGB image");
    }
    if (rgb.width != depth.width || rgb.height != depth.height) {
        raise(Errc::shape_mismatch, "image and depth dimensions differ");
    }
    if (!(d_min < d_max)) {
        raise(Errc::bad_range, "depth range requires d_min < d_max");
    }
    MaskedImage out{rgb, Provenance::rgd};
    const double span = d_max - d_min;
    for (int y = 0; y < rgb.height; ++y) {
        for (int x = 0; x < rgb.width; ++x) {
            const double d = depth.at(x, y);
            std::uint8_t blue = 0;
            if (std::isfinite(d)) {
                double t = (d - d_min) / span;
                t = std::min(1.0, std::max(0.0, t));
                blue = static_cast<std::uint8_t>(std::floor(255.0 * t + 0.5));
            }
            out.rgb.at(x, y, 2) = blue;
        }
    }
    return out;
}

std::pair<double, double> finite_depth_range(const DepthMap& depth) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (float d : depth.data) {
        if (!std::isfinite(d)) continue;
        lo = std::min(lo, static_cast<double>(d));
        hi = std::max(hi, static_cast<double>(d));
    }
    if (!(lo < hi)) {
        raise(Errc::bad_range, "depth map has no usable finite range");
    }
    return {lo, hi};
}

}  // namespace graspbench

#include "graspbench/augment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "graspbench/rng.hpp"

namespace graspbench {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

std::string compact_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

AugmentSpec default_augment_spec() {
    AugmentSpec spec;
    for (double dy : {-40.0, -20.0, 0.0, 20.0, 40.0}) {
        for (double dx : {-40.0, -20.0, 0.0, 20.0, 40.0}) {
            spec.translations.emplace_back(dx, dy);
        }
    }
    return spec;
}

AugmentSpec augment_spec_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad augment spec JSON: ") + e.what());
    }
    AugmentSpec spec = default_augment_spec();
    try {
        if (doc.contains("rotations")) {
            spec.rotations_deg = doc["rotations"].get<std::vector<double>>();
        }
        if (doc.contains("translations")) {
            spec.translations.clear();
            for (const json& t : doc["translations"]) {
                spec.translations.emplace_back(t.at(0).get<double>(),
                                               t.at(1).get<double>());
            }
        }
        if (doc.contains("brightness")) {
            spec.brightness = doc["brightness"].get<std::vector<double>>();
        }
        if (doc.contains("target_multiplier")) {
            spec.target_multiplier = doc["target_multiplier"].get<int>();
        }
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad augment spec JSON: ") + e.what());
    }
    for (double b : spec.brightness) {
        if (!(b > 0.0)) {
            raise(Errc::bad_range, "brightness factors must be > 0");
        }
    }
    if (spec.target_multiplier < 1) {
        raise(Errc::bad_range, "target_multiplier must be >= 1");
    }
    return spec;
}

std::string augment_spec_to_json(const AugmentSpec& spec) {
    json doc;
    doc["rotations"] = spec.rotations_deg;
    doc["translations"] = json::array();
    for (const auto& [dx, dy] : spec.translations) {
        doc["translations"].push_back({dx, dy});
    }
    doc["brightness"] = spec.brightness;
    doc["target_multiplier"] = spec.target_multiplier;
    return doc.dump();
}

std::string transform_suffix(const Transform& t) {
    return "_r" + compact_number(t.rotation_deg) + "_tx" + compact_number(t.dx) +
           "_ty" + compact_number(t.dy) + "_b" + compact_number(t.brightness);
}

std::vector<Transform> select_transforms(const AugmentSpec& spec, std::uint64_t seed,
                                         std::uint64_t sample_ordinal) {
    const std::size_t total = spec.combinations();
    const auto multiplier = static_cast<std::size_t>(spec.target_multiplier);
    if (total < multiplier) {
        raise(Errc::insufficient_spec,
              "augment cross product (" + std::to_string(total) +
                  ") smaller than target multiplier (" + std::to_string(multiplier) + ")");
    }
    std::vector<Transform> all;
    all.reserve(total);
    for (double rot : spec.rotations_deg) {
        for (const auto& [dx, dy] : spec.translations) {
            for (double b : spec.brightness) {
                all.push_back({rot, dx, dy, b});
            }
        }
    }
    if (total == multiplier) return all;

    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) order[i] = i;
    // Pin the identity combination to the front so multiplier 1 means
    // "identity augmentation only"; the rest is a seeded draw.
    const auto identity =
        std::find_if(all.begin(), all.end(), [](const Transform& t) { return t.is_identity(); });
    if (identity != all.end()) {
        const auto idx = static_cast<std::size_t>(identity - all.begin());
        std::swap(order[0], order[idx]);
        SplitMix64 rng(mix_seed(seed, sample_ordinal));
        for (std::size_t i = total - 1; i > 1; --i) {
            const std::size_t j = 1 + static_cast<std::size_t>(rng.next_below(i));
            std::swap(order[i], order[j]);
        }
    } else {
        SplitMix64 rng(mix_seed(seed, sample_ordinal));
        shuffle(order, rng);
    }
    order.resize(multiplier);
    std::sort(order.begin(), order.end());
    std::vector<Transform> picked;
    picked.reserve(multiplier);
    for (std::size_t i : order) picked.push_back(all[i]);
    return picked;
}

namespace {

struct InverseMap {
    // dst -> src: p_src = R(-rot) * (p_dst - c - t) + c
    double cos_r, sin_r, cx, cy, dx, dy;

    static InverseMap of(const Transform& t, int width, int height) {
        const double rad = t.rotation_deg * kPi / 180.0;
        return {std::cos(rad), std::sin(rad), (width - 1) * 0.5, (height - 1) * 0.5,
                t.dx, t.dy};
    }

    Vec2 source_of(double x, double y) const {
        const double rx = x - cx - dx;
        const double ry = y - cy - dy;
        // R(-rot) = [cos, sin; -sin, cos]
        return {cx + cos_r * rx + sin_r * ry, cy - sin_r * rx + cos_r * ry};
    }
};

std::uint8_t brightness_byte(double v, double factor) {
    const double scaled = std::floor(v * factor + 0.5);
    return static_cast<std::uint8_t>(std::min(255.0, std::max(0.0, scaled)));
}

}  // namespace

Image8 warp_rgb(const Image8& image, const Transform& transform,
                Provenance provenance) {
    const bool white_fill = provenance == Provenance::mask_composited;
    Image8 out = Image8::make(image.width, image.height, image.channels);
    const InverseMap inv = InverseMap::of(transform, image.width, image.height);
    const int w = image.width, h = image.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Vec2 src = inv.source_of(x, y);
            const bool outside = src.x < -0.5 || src.x > w - 0.5 || src.y < -0.5 ||
                                 src.y > h - 0.5;
            if (outside && white_fill) {
                for (int c = 0; c < image.channels; ++c) out.at(x, y, c) = 255;
                continue;
            }
            const double fx = std::floor(src.x);
            const double fy = std::floor(src.y);
            const double ax = src.x - fx;
            const double ay = src.y - fy;
            const int x0 = std::clamp(static_cast<int>(fx), 0, w - 1);
            const int x1 = std::clamp(static_cast<int>(fx) + 1, 0, w - 1);
            const int y0 = std::clamp(static_cast<int>(fy), 0, h - 1);
            const int y1 = std::clamp(static_cast<int>(fy) + 1, 0, h - 1);
            for (int c = 0; c < image.channels; ++c) {
                const double v =
                    (1.0 - ax) * (1.0 - ay) * image.at(x0, y0, c) +
                    ax * (1.0 - ay) * image.at(x1, y0, c) +
                    (1.0 - ax) * ay * image.at(x0, y1, c) +
                    ax * ay * image.at(x1, y1, c);
                out.at(x, y, c) = brightness_byte(v, transform.brightness);
            }
        }
    }
    return out;
}

Mask warp_mask(const Mask& mask, const Transform& transform) {
    Mask out = Mask::make(mask.width, mask.height);
    const InverseMap inv = InverseMap::of(transform, mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const Vec2 src = inv.source_of(x, y);
            const int sx = static_cast<int>(std::floor(src.x + 0.5));
            const int sy = static_cast<int>(std::floor(src.y + 0.5));
            if (sx < 0 || sx >= mask.width || sy < 0 || sy >= mask.height) continue;
            out.at(x, y) = mask.at(sx, sy);
        }
    }
    return out;
}

Sample apply_annotations(const Sample& sample, const Transform& transform) {
    Sample out = sample;
    out.id = sample.id + transform_suffix(transform);
    out.rgb_path.clear();
    out.mask_path.clear();
    out.depth_path.clear();  // depth is not warped; augmented samples drop it
    const double cx = (sample.width - 1) * 0.5;
    const double cy = (sample.height - 1) * 0.5;
    int out_of_frame = 0;
    const auto transform_quads = [&](std::vector<GraspQuad>& quads) {
        for (GraspQuad& quad : quads) {
            const GraspPose5D pose = quad_to_pose(quad, kLoaderRectTolerance);
            const GraspPose5D moved = transform_pose(pose, transform.rotation_deg,
                                                     transform.dx, transform.dy, cx, cy);
            if (!(moved.x >= 0.0 && moved.x < sample.width && moved.y >= 0.0 &&
                  moved.y < sample.height)) {
                ++out_of_frame;
            }
            quad = pose_to_quad(moved);
        }
    };
    transform_quads(out.grasps_pos);
    transform_quads(out.grasps_neg);
    if (out_of_frame > 0) {
        out.flags.push_back("grasp_out_of_frame:" + std::to_string(out_of_frame));
    }
    return out;
}

Applied apply(const Sample& sample, const Image8& rgb, const Mask* mask,
              const Transform& transform) {
    if (rgb.width != sample.width || rgb.height != sample.height) {
        raise(Errc::shape_mismatch, "sample dimensions disagree with the image");
    }
    Applied out;
    out.sample = apply_annotations(sample, transform);
    out.rgb = warp_rgb(rgb, transform, sample.provenance);
    if (mask) {
        if (mask->width != rgb.width || mask->height != rgb.height) {
            raise(Errc::shape_mismatch, "mask dimensions disagree with the image");
        }
        out.mask = warp_mask(*mask, transform);
    }
    return out;
}

namespace {

void materialize(const Sample& source, Sample& augmented, const Transform& transform,
                 const std::filesystem::path& image_dir) {
    const Image8 rgb = read_png(source.rgb_path);
    const Mask* mask_ptr = nullptr;
    Mask mask;
    if (!source.mask_path.empty()) {
        mask = read_mask_png(source.mask_path);
        mask_ptr = &mask;
    }
    const Image8 warped = warp_rgb(rgb, transform, source.provenance);
    const std::filesystem::path rgb_out = image_dir / (augmented.id + ".png");
    write_png(rgb_out, warped);
    augmented.rgb_path = rgb_out.string();
    if (mask_ptr) {
        const Mask warped_mask = warp_mask(*mask_ptr, transform);
        const std::filesystem::path mask_out = image_dir / (augmented.id + "_mask.png");
        write_mask_png(mask_out, warped_mask);
        augmented.mask_path = mask_out.string();
    }
}

}  // namespace

std::vector<Sample> expand(const std::vector<Sample>& train, const AugmentSpec& spec,
                           std::uint64_t seed, const ExpandOptions& options) {
    if (options.materialize_images) {
        std::filesystem::create_directories(options.image_dir);
    }
    const auto multiplier = static_cast<std::size_t>(spec.target_multiplier);
    std::vector<Sample> out(train.size() * multiplier);

    const auto expand_one = [&](std::size_t i) {
        const std::vector<Transform> transforms =
            select_transforms(spec, seed, static_cast<std::uint64_t>(i));
        for (std::size_t t = 0; t < transforms.size(); ++t) {
            Sample augmented = apply_annotations(train[i], transforms[t]);
            if (options.materialize_images) {
                materialize(train[i], augmented, transforms[t], options.image_dir);
            }
            out[i * multiplier + t] = std::move(augmented);
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1 || train.size() < 2) {
        for (std::size_t i = 0; i < train.size(); ++i) expand_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < train.size();
                     i = next.fetch_add(1)) {
                    expand_one(i);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }
    return out;
}

}  // namespace graspbench

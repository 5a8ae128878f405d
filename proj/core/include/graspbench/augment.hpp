#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graspbench/dataset.hpp"
#include "graspbench/image.hpp"

namespace graspbench {

// Defaults give 5 rotations x 25 translations x 1 brightness = 125
// combinations, the dataset expansion multiplier.
struct AugmentSpec {
    std::vector<double> rotations_deg{-20.0, -10.0, 0.0, 10.0, 20.0};
    std::vector<std::pair<double, double>> translations;  // (dx, dy) pixels
    std::vector<double> brightness{1.0};                  // multipliers > 0
    int target_multiplier = 125;

    std::size_t combinations() const {
        return rotations_deg.size() * translations.size() * brightness.size();
    }
};

AugmentSpec default_augment_spec();
AugmentSpec augment_spec_from_json(const std::string& json_text);
std::string augment_spec_to_json(const AugmentSpec& spec);

struct Transform {
    double rotation_deg = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double brightness = 1.0;

    bool is_identity() const {
        return rotation_deg == 0.0 && dx == 0.0 && dy == 0.0 && brightness == 1.0;
    }
};

std::string transform_suffix(const Transform& transform);

// The target_multiplier transforms used for one sample: the identity
// combination (when present) always makes the cut, the rest is a seeded
// draw from the remaining cross product, emitted in cross-product order.
// The per-sample stream depends only on (seed, sample ordinal).
// Throws insufficient_spec when the cross product is too small.
std::vector<Transform> select_transforms(const AugmentSpec& spec, std::uint64_t seed,
                                         std::uint64_t sample_ordinal);

// Rotates about the image center then translates; mask-composited images
// fill uncovered pixels with white, everything else edge-replicates.
// Brightness multiplies each channel, clamped to [0, 255].
Image8 warp_rgb(const Image8& image, const Transform& transform,
                Provenance provenance);
// Nearest-neighbor warp; pixels from outside the frame become background.
Mask warp_mask(const Mask& mask, const Transform& transform);

// Annotation-side counterpart of the warp: grasp centers move rigidly,
// theta advances by the rotation, h and w are untouched (brightness never
// moves geometry). Grasps whose center leaves the frame stay in the sample
// and are counted in a "grasp_out_of_frame:N" flag.
Sample apply_annotations(const Sample& sample, const Transform& transform);

struct Applied {
    Sample sample;
    Image8 rgb;
    std::optional<Mask> mask;
};

// Full per-sample augmentation of pixels plus annotations.
Applied apply(const Sample& sample, const Image8& rgb, const Mask* mask,
              const Transform& transform);

struct ExpandOptions {
    // When set, warped images (and masks) are written under image_dir and the
    // emitted samples reference them; otherwise expansion is annotation-only
    // and image paths are left empty.
    bool materialize_images = false;
    std::filesystem::path image_dir;
    int workers = 1;
};

// Emits exactly spec.target_multiplier variants per input sample,
// deterministically in (input order, transform index) order.
std::vector<Sample> expand(const std::vector<Sample>& train, const AugmentSpec& spec,
                           std::uint64_t seed, const ExpandOptions& options = {});

}  // namespace graspbench

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graspbench/geometry.hpp"

namespace graspbench {

enum class Provenance { original, mask_composited, rgd };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

// One scene. Pixel data is referenced by path and loaded on demand; width
// and height are read from the image header at load time so annotation
// bounds can be checked without decoding pixels.
struct Sample {
    std::string id;
    std::string rgb_path;
    std::string depth_path;  // empty = no depth
    std::string mask_path;   // empty = no mask
    std::string category;    // object label, may be empty
    Provenance provenance = Provenance::original;
    int width = 0;
    int height = 0;
    std::vector<GraspQuad> grasps_pos;
    std::vector<GraspQuad> grasps_neg;
    std::vector<std::string> flags;  // e.g. "no_grasps", "grasp_out_of_frame:2"
};

// Annotations may slightly exceed the frame; vertices beyond a quarter-frame
// margin invalidate the rectangle.
bool grasp_in_bounds(const GraspQuad& quad, int width, int height);

// Hand-digitized rectangles carry more noise than synthetic ones; loaders
// accept quads up to this relative tolerance and drop the rest.
inline constexpr double kLoaderRectTolerance = 1e-2;

struct LoadReport {
    int n_samples = 0;
    int n_grasps = 0;
    int n_dropped_rects = 0;   // non-finite coordinates or out of bounds
    int n_empty_samples = 0;   // samples with zero positive grasps
    std::vector<std::string> warnings;
};

// Cornell layout: per scene pcdNNNNr.png, pcdNNNNcpos.txt and optional
// pcdNNNNcneg.txt (one "x y" pair per line, 4 consecutive lines per
// rectangle), optional pcdNNNNmask.png / pcdNNNNd.png / pcdNNNNd.f32.
// Subdirectories are scanned recursively; an optional z.txt maps image ids
// to object categories. Result is ordered by id.
std::vector<Sample> load_cornell(const std::filesystem::path& dir,
                                 LoadReport* report = nullptr);

// Jacquard layout: per scene <id>_grasps.txt with one grasp per line in the
// form "x;y;theta;opening;jaw_size" (theta in degrees, any range), plus
// <id>_RGB.png and optional <id>_depth.png / <id>_depth.f32 / <id>_mask.png.
// Missing depth is tolerated. Result is ordered by id.
std::vector<Sample> load_jacquard(const std::filesystem::path& dir,
                                  LoadReport* report = nullptr);

enum class SplitMode { image_wise, object_wise };

const char* split_mode_name(SplitMode mode);
SplitMode split_mode_from_name(const std::string& name);

struct SplitSpec {
    SplitMode mode = SplitMode::image_wise;
    double ratio_train = 0.8;  // the 4:1 train:test split
    std::uint64_t seed = 0;
};

struct SplitResult {
    std::vector<Sample> train;
    std::vector<Sample> test;
};

// image_wise: samples shuffled by seed, first 80% train. object_wise:
// categories shuffled by seed then packed greedily by descending size so the
// train fraction lands as close to 80% as whole categories allow; no
// category ever appears in both partitions.
SplitResult split(const std::vector<Sample>& samples, const SplitSpec& spec);

}  // namespace graspbench

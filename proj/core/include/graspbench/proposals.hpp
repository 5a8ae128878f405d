#pragma once

#include <array>
#include <span>
#include <vector>

#include "graspbench/geometry.hpp"

namespace graspbench {

// Axis-aligned box; the working currency of anchors and regression targets.
struct Box {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double cx() const { return 0.5 * (x_min + x_max); }
    double cy() const { return 0.5 * (y_min + y_max); }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

Box angled_to_box(const GraspAngled& angled);
double box_iou(const Box& a, const Box& b);

struct Anchor {
    double cx = 0.0;
    double cy = 0.0;
    double scale = 0.0;
    double aspect = 1.0;
    Box box;
};

struct AnchorGrid {
    int rows = 0;
    int cols = 0;
    double stride = 16.0;
};

inline constexpr std::array<double, 3> kDefaultAnchorScales{32.0, 64.0, 128.0};
inline constexpr std::array<double, 3> kDefaultAnchorAspects{0.5, 1.0, 2.0};

// rows*cols*9 anchors centered on grid cells, one per (scale, aspect):
// width = scale * sqrt(aspect), height = scale / sqrt(aspect), so every
// anchor has area scale^2.
std::vector<Anchor> generate_anchors(const AnchorGrid& grid,
                                     std::span<const double> scales = kDefaultAnchorScales,
                                     std::span<const double> aspects = kDefaultAnchorAspects);

struct MatchOptions {
    double positive_iou = 0.7;
    double negative_iou = 0.3;
};

inline constexpr int kIgnore = -1;

struct MatchResult {
    std::vector<int> label;        // per anchor: 1 / 0 / kIgnore
    std::vector<int> gt_index;     // matched ground truth, -1 when unmatched
    std::vector<std::array<double, 4>> target_deltas;  // valid where label = 1
};

// RPN-style assignment: positive at IoU >= 0.7 with some ground truth or as
// the best anchor of some ground truth, negative at max IoU <= 0.3, ignored
// in between. Throws no_ground_truth on an empty gt list.
MatchResult match_proposals(std::span<const Anchor> anchors, std::span<const Box> gt_boxes,
                            const MatchOptions& options = {});

// Center/log-size parameterization: tx = (x - x_a) / w_a, ty = (y - y_a) / h_a,
// tw = ln(w / w_a), th = ln(h / h_a).
std::array<double, 4> encode_deltas(const Box& anchor, const Box& box);
Box decode_deltas(const Box& anchor, const std::array<double, 4>& deltas);

}  // namespace graspbench

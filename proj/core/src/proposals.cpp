#include "graspbench/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace graspbench {

Box angled_to_box(const GraspAngled& angled) {
    return {angled.x_min, angled.y_min, angled.x_max, angled.y_max};
}

double box_iou(const Box& a, const Box& b) {
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double uni = a.width() * a.height() + b.width() * b.height() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Anchor> generate_anchors(const AnchorGrid& grid,
                                     std::span<const double> scales,
                                     std::span<const double> aspects) {
    if (grid.rows <= 0 || grid.cols <= 0 || !(grid.stride > 0.0)) {
        raise(Errc::bad_range, "anchor grid requires positive rows, cols, stride");
    }
    for (double s : scales) {
        if (!(s > 0.0)) raise(Errc::bad_range, "anchor scales must be > 0");
    }
    for (double a : aspects) {
        if (!(a > 0.0)) raise(Errc::bad_range, "anchor aspects must be > 0");
    }
    std::vector<Anchor> anchors;
    anchors.reserve(static_cast<std::size_t>(grid.rows) * grid.cols * scales.size() *
                    aspects.size());
    for (int row = 0; row < grid.rows; ++row) {
        for (int col = 0; col < grid.cols; ++col) {
            const double cx = (col + 0.5) * grid.stride;
            const double cy = (row + 0.5) * grid.stride;
            for (double scale : scales) {
                for (double aspect : aspects) {
                    const double half_w = 0.5 * scale * std::sqrt(aspect);
                    const double half_h = 0.5 * scale / std::sqrt(aspect);
                    Anchor anchor;
                    anchor.cx = cx;
                    anchor.cy = cy;
                    anchor.scale = scale;
                    anchor.aspect = aspect;
                    anchor.box = {cx - half_w, cy - half_h, cx + half_w, cy + half_h};
                    anchors.push_back(anchor);
                }
            }
        }
    }
    return anchors;
}

MatchResult match_proposals(std::span<const Anchor> anchors, std::span<const Box> gt_boxes,
                            const MatchOptions& options) {
    if (gt_boxes.empty()) {
        raise(Errc::no_ground_truth, "match_proposals requires at least one ground truth");
    }
    const std::size_t n = anchors.size();
    const std::size_t m = gt_boxes.size();

    MatchResult result;
    result.label.assign(n, kIgnore);
    result.gt_index.assign(n, -1);
    result.target_deltas.assign(n, {0.0, 0.0, 0.0, 0.0});

    std::vector<double> best_iou(n, 0.0);
    std::vector<double> gt_best(m, 0.0);
    std::vector<std::vector<double>> iou(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            iou[i][j] = box_iou(anchors[i].box, gt_boxes[j]);
            if (iou[i][j] > best_iou[i]) {
                best_iou[i] = iou[i][j];
                result.gt_index[i] = static_cast<int>(j);
            }
            gt_best[j] = std::max(gt_best[j], iou[i][j]);
        }
        if (result.gt_index[i] < 0) result.gt_index[i] = 0;
    }

    for (std::size_t i = 0; i < n; ++i) {
        bool positive = best_iou[i] >= options.positive_iou;
        // Best-match backstop: every ground truth keeps its top anchor(s)
        // positive even below the threshold. Ground truths disjoint from all
        // anchors force nothing.
        for (std::size_t j = 0; j < m && !positive; ++j) {
            if (iou[i][j] > 0.0 && iou[i][j] >= gt_best[j] - 1e-12) {
                positive = true;
                result.gt_index[i] = static_cast<int>(j);
            }
        }
        if (positive) {
            result.label[i] = 1;
            result.target_deltas[i] =
                encode_deltas(anchors[i].box, gt_boxes[result.gt_index[i]]);
        } else if (best_iou[i] <= options.negative_iou) {
            result.label[i] = 0;
            result.gt_index[i] = -1;
        }
    }
    return result;
}

std::array<double, 4> encode_deltas(const Box& anchor, const Box& box) {
    if (!(anchor.width() > 0.0) || !(anchor.height() > 0.0)) {
        raise(Errc::degenerate_anchor, "anchor has non-positive extent");
    }
    if (!(box.width() > 0.0) || !(box.height() > 0.0)) {
        raise(Errc::degenerate_box, "box has non-positive extent");
    }
    return {(box.cx() - anchor.cx()) / anchor.width(),
            (box.cy() - anchor.cy()) / anchor.height(),
            std::log(box.width() / anchor.width()),
            std::log(box.height() / anchor.height())};
}

Box decode_deltas(const Box& anchor, const std::array<double, 4>& deltas) {
    if (!(anchor.width() > 0.0) || !(anchor.height() > 0.0)) {
        raise(Errc::degenerate_anchor, "anchor has non-positive extent");
    }
    const double cx = anchor.cx() + deltas[0] * anchor.width();
    const double cy = anchor.cy() + deltas[1] * anchor.height();
    const double w = anchor.width() * std::exp(deltas[2]);
    const double h = anchor.height() * std::exp(deltas[3]);
    return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

}  // namespace graspbench

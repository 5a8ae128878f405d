#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "graspbench/dataset.hpp"
#include "graspbench/geometry.hpp"
#include "graspbench/image.hpp"

namespace graspbench {

// Rectangle metric: a prediction is correct iff, against some ground truth,
// the angle difference (mod 180) is within 30 degrees (inclusive by default)
// AND the Jaccard index is greater than 0.25 (strict).
struct MetricOptions {
    double max_angle_diff = 30.0;
    bool angle_inclusive = true;  // "within 30" read as <=; flag for strict <
    double min_jaccard = 0.25;
    JaccardMode jaccard_mode = JaccardMode::rotated;
};

struct MatchReport {
    bool correct = false;
    int gt_index = -1;       // reported gt: best jaccard among qualifying,
                             // or best jaccard overall when none qualify
    double angle_diff = 0.0;
    double jaccard = 0.0;
};

MatchReport is_correct(const GraspPose5D& pred, std::span<const GraspPose5D> gts,
                       const MetricOptions& options = {});

struct PerSampleResult {
    std::string id;
    GraspPose5D pred;
    int gt_index = -1;
    double angle_diff = 0.0;
    double jaccard = 0.0;
    bool correct = false;
};

struct EvalReport {
    SplitMode split_mode = SplitMode::image_wise;
    JaccardMode jaccard_mode = JaccardMode::rotated;
    std::vector<PerSampleResult> per_sample;  // ordered by id
    int n_correct = 0;
    int n_total = 0;
    double accuracy = 0.0;
};

// Scores one prediction per sample of the given (test) set against its
// positive grasps. The split spec is carried into the report as metadata.
// Throws missing_prediction listing every sample id without a prediction.
EvalReport evaluate(const std::map<std::string, GraspPose5D>& predictions,
                    const std::vector<Sample>& samples, const SplitSpec& split,
                    const MetricOptions& options = {});

// Top-k variant (off by default in the CLI): a sample counts as correct when
// any of its first top_k predictions passes the metric. The reported row is
// the first correct prediction, or the best-jaccard one when none pass.
EvalReport evaluate_topk(
    const std::map<std::string, std::vector<GraspPose5D>>& predictions,
    const std::vector<Sample>& samples, const SplitSpec& split, int top_k,
    const MetricOptions& options = {});

std::string eval_report_to_json(const EvalReport& report);
std::string eval_report_table(const EvalReport& report);

struct BaselineResult {
    GraspPose5D pose;
    bool degenerate = false;  // isotropic second moments, theta defaulted to 0
};

// Non-learned predictor: centroid of the mask, closing axis along the minor
// principal axis of the mask pixel coordinates, opening 1.2x the minor-axis
// extent, plate size 0.6x the major-axis extent. Throws empty_mask below 10
// object pixels.
BaselineResult pca_baseline(const Mask& mask);

}  // namespace graspbench

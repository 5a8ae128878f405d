#include "graspbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace graspbench {

MatchReport is_correct(const GraspPose5D& pred, std::span<const GraspPose5D> gts,
                       const MetricOptions& options) {
    if (gts.empty()) {
        raise(Errc::no_ground_truth, "is_correct requires at least one ground truth");
    }
    validate(pred);
    MatchReport best_overall;
    best_overall.jaccard = -1.0;
    MatchReport best_qualifying;
    best_qualifying.jaccard = -1.0;
    for (std::size_t i = 0; i < gts.size(); ++i) {
        const double diff = angle_diff_deg(pred.theta, gts[i].theta);
        const double overlap = jaccard(pred, gts[i], options.jaccard_mode);
        const bool angle_ok = options.angle_inclusive ? diff <= options.max_angle_diff
                                                      : diff < options.max_angle_diff;
        const bool qualifies = angle_ok && overlap > options.min_jaccard;
        MatchReport candidate{qualifies, static_cast<int>(i), diff, overlap};
        if (overlap > best_overall.jaccard) best_overall = candidate;
        if (qualifies && overlap > best_qualifying.jaccard) best_qualifying = candidate;
    }
    return best_qualifying.gt_index >= 0 ? best_qualifying : best_overall;
}

EvalReport evaluate(const std::map<std::string, GraspPose5D>& predictions,
                    const std::vector<Sample>& samples, const SplitSpec& split,
                    const MetricOptions& options) {
    std::map<std::string, std::vector<GraspPose5D>> wrapped;
    for (const auto& [id, pose] : predictions) {
        wrapped[id] = {pose};
    }
    return evaluate_topk(wrapped, samples, split, 1, options);
}

EvalReport evaluate_topk(
    const std::map<std::string, std::vector<GraspPose5D>>& predictions,
    const std::vector<Sample>& samples, const SplitSpec& split, int top_k,
    const MetricOptions& options) {
    if (samples.empty()) {
        raise(Errc::empty_dataset, "evaluate over an empty sample list");
    }
    if (top_k < 1) {
        raise(Errc::bad_range, "top_k must be >= 1");
    }
    std::vector<const Sample*> ordered;
    ordered.reserve(samples.size());
    for (const Sample& s : samples) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const Sample* a, const Sample* b) { return a->id < b->id; });

    std::string missing;
    for (const Sample* s : ordered) {
        const auto it = predictions.find(s->id);
        if (it == predictions.end() || it->second.empty()) {
            if (!missing.empty()) missing += ", ";
            missing += s->id;
        }
    }
    if (!missing.empty()) {
        raise(Errc::missing_prediction, "no prediction for: " + missing);
    }

    EvalReport report;
    report.split_mode = split.mode;
    report.jaccard_mode = options.jaccard_mode;
    for (const Sample* s : ordered) {
        std::vector<GraspPose5D> gts;
        gts.reserve(s->grasps_pos.size());
        for (const GraspQuad& q : s->grasps_pos) {
            gts.push_back(quad_to_pose(q, kLoaderRectTolerance));
        }
        const std::vector<GraspPose5D>& candidates = predictions.at(s->id);
        const auto count = std::min<std::size_t>(candidates.size(),
                                                 static_cast<std::size_t>(top_k));
        PerSampleResult row;
        row.id = s->id;
        bool have_row = false;
        for (std::size_t k = 0; k < count && !row.correct; ++k) {
            const MatchReport match = is_correct(candidates[k], gts, options);
            if (!have_row || match.correct || match.jaccard > row.jaccard) {
                row.pred = candidates[k];
                row.gt_index = match.gt_index;
                row.angle_diff = match.angle_diff;
                row.jaccard = match.jaccard;
                row.correct = match.correct;
                have_row = true;
            }
        }
        report.per_sample.push_back(row);
        if (row.correct) ++report.n_correct;
    }
    report.n_total = static_cast<int>(report.per_sample.size());
    report.accuracy =
        static_cast<double>(report.n_correct) / static_cast<double>(report.n_total);
    return report;
}

std::string eval_report_to_json(const EvalReport& report) {
    nlohmann::json doc;
    doc["split_mode"] = split_mode_name(report.split_mode);
    doc["jaccard_mode"] =
        report.jaccard_mode == JaccardMode::rotated ? "rotated" : "axis_aligned";
    doc["n_correct"] = report.n_correct;
    doc["n_total"] = report.n_total;
    doc["accuracy"] = report.accuracy;
    doc["per_sample"] = nlohmann::json::array();
    for (const PerSampleResult& row : report.per_sample) {
        doc["per_sample"].push_back({{"id", row.id},
                                     {"pred", {row.pred.x, row.pred.y, row.pred.theta,
                                               row.pred.h, row.pred.w}},
                                     {"gt_index", row.gt_index},
                                     {"angle_diff", row.angle_diff},
                                     {"jaccard", row.jaccard},
                                     {"correct", row.correct}});
    }
    return doc.dump(2);
}

std::string eval_report_table(const EvalReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-24s %8s %9s %8s\n", "id", "angle", "jaccard",
                  "correct");
    out += line;
    for (const PerSampleResult& row : report.per_sample) {
        std::snprintf(line, sizeof(line), "%-24s %8.2f %9.4f %8s\n", row.id.c_str(),
                      row.angle_diff, row.jaccard, row.correct ? "yes" : "no");
        out += line;
    }
    std::snprintf(line, sizeof(line), "accuracy = %.4f (%d/%d, %s split, %s jaccard)\n",
                  report.accuracy, report.n_correct, report.n_total,
                  split_mode_name(report.split_mode),
                  report.jaccard_mode == JaccardMode::rotated ? "rotated" : "axis_aligned");
    out += line;
    return out;
}

BaselineResult pca_baseline(const Mask& mask) {
    double sum_x = 0.0, sum_y = 0.0;
    long long count = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            sum_x += x;
            sum_y += y;
            ++count;
        }
    }
    if (count < 10) {
        raise(Errc::empty_mask, "mask has fewer than 10 object pixels");
    }
    const double mx = sum_x / static_cast<double>(count);
    const double my = sum_y / static_cast<double>(count);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const double dx = x - mx;
            const double dy = y - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    }
    sxx /= static_cast<double>(count);
    syy /= static_cast<double>(count);
    sxy /= static_cast<double>(count);

    const double trace = sxx + syy;
    const double radius = std::hypot(0.5 * (sxx - syy), sxy);

    BaselineResult result;
    Vec2 major{1.0, 0.0};
    if (trace <= 0.0 || radius <= 1e-3 * trace) {
        // Isotropic second moments: orientation undefined, default to 0.
        result.degenerate = true;
    } else {
        const double lambda_max = 0.5 * trace + radius;
        if (std::fabs(sxy) > 1e-12 * trace) {
            major = {lambda_max - syy, sxy};
        } else {
            major = sxx >= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        }
        const double len = norm(major);
        major = {major.x / len, major.y / len};
    }
    const Vec2 minor{-major.y, major.x};

    double min_major = std::numeric_limits<double>::infinity(), max_major = -min_major;
    double min_minor = min_major, max_minor = -min_major;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const Vec2 d{x - mx, y - my};
            const double along_major = dot(d, major);
            const double along_minor = dot(d, minor);
            min_major = std::min(min_major, along_major);
            max_major = std::max(max_major, along_major);
            min_minor = std::min(min_minor, along_minor);
            max_minor = std::max(max_minor, along_minor);
        }
    }
    const double extent_major = max_major - min_major + 1.0;  // pixel footprint
    const double extent_minor = max_minor - min_minor + 1.0;

    result.pose.x = mx;
    result.pose.y = my;
    result.pose.theta =
        result.degenerate ? 0.0
                          : normalize_angle_deg(std::atan2(minor.y, minor.x) * 180.0 /
                                                3.14159265358979323846);
    result.pose.w = 1.2 * extent_minor;
    result.pose.h = 0.6 * extent_major;
    return result;
}

}  // namespace graspbench

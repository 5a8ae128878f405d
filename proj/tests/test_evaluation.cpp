#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "graspbench/evaluation.hpp"
#include "graspbench/mask_pipeline.hpp"
#include "graspbench/rng.hpp"
#include "graspbench/synthetic.hpp"

using namespace graspbench;

TEST_CASE("is_correct trivial cases") {
    const GraspPose5D g{50.0, 50.0, 20.0, 30.0, 12.0};
    const std::vector<GraspPose5D> gts{g};

    const MatchReport same = is_correct(g, gts);
    CHECK(same.correct);
    CHECK(same.angle_diff == doctest::Approx(0.0));
    CHECK(same.jaccard == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(same.gt_index == 0);

    CHECK_THROWS_AS(is_correct(g, {}), Error);
}

TEST_CASE("angle condition: inclusive at 30 degrees") {
    const GraspPose5D gt{50.0, 50.0, 0.0, 20.0, 20.0};
    const std::vector<GraspPose5D> gts{gt};
    // square rotated about its own center keeps jaccard far above 0.25
    for (double diff : {29.9, 30.0}) {
        GraspPose5D pred = gt;
        pred.theta = diff;
        const MatchReport match = is_correct(pred, gts);
        CHECK(match.angle_diff == doctest::Approx(diff));
        CHECK(match.jaccard > 0.25);
        CHECK(match.correct);
    }
    GraspPose5D pred = gt;
    pred.theta = 30.1;
    const MatchReport match = is_correct(pred, gts);
    CHECK_FALSE(match.correct);
    CHECK(match.angle_diff == doctest::Approx(30.1));

    // the strict-comparison flag flips only the boundary case
    MetricOptions strict;
    strict.angle_inclusive = false;
    GraspPose5D boundary = gt;
    boundary.theta = 30.0;
    CHECK_FALSE(is_correct(boundary, gts, strict).correct);
    boundary.theta = 29.9;
    CHECK(is_correct(boundary, gts, strict).correct);
}

TEST_CASE("jaccard condition: strict at 0.25") {
    const GraspPose5D gt{5.0, 5.0, 0.0, 10.0, 10.0};
    const std::vector<GraspPose5D> gts{gt};
    // translate a 10x10 square by x: J = (10 - x) / (10 + x); x = 6 gives 0.25
    const auto shifted = [&](double j) {
        const double x = 10.0 * (1.0 - j) / (1.0 + j);
        GraspPose5D pred = gt;
        pred.x += x;
        return pred;
    };
    const MatchReport at_quarter = is_correct(shifted(0.25), gts);
    CHECK(at_quarter.jaccard == doctest::Approx(0.25));
    CHECK_FALSE(at_quarter.correct);

    CHECK_FALSE(is_correct(shifted(0.249), gts).correct);
    CHECK(is_correct(shifted(0.251), gts).correct);
}

TEST_CASE("is_correct scans all ground truths and reports the best") {
    const GraspPose5D pred{50.0, 50.0, 10.0, 20.0, 10.0};
    std::vector<GraspPose5D> gts;
    gts.push_back({200.0, 200.0, 10.0, 20.0, 10.0});  // disjoint
    gts.push_back({52.0, 50.0, 15.0, 20.0, 10.0});    // qualifies
    gts.push_back({50.0, 50.0, 80.0, 20.0, 10.0});    // angle too far
    const MatchReport match = is_correct(pred, gts);
    CHECK(match.correct);
    CHECK(match.gt_index == 1);

    // prediction is the same grasp rotated 180: angle diff is zero
    GraspPose5D flipped = pred;
    flipped.theta = normalize_angle_deg(pred.theta + 180.0);
    CHECK(is_correct(flipped, gts).correct);
    CHECK(angle_diff_deg(flipped.theta, pred.theta) == doctest::Approx(0.0));
}

namespace {

std::vector<Sample> fixture_samples() {
    // 4 samples; predictions below make exactly 3 of them correct
    std::vector<Sample> samples;
    for (int i = 0; i < 4; ++i) {
        Sample s;
        s.id = "fx" + std::to_string(i);
        s.width = 200;
        s.height = 200;
        s.grasps_pos.push_back(pose_to_quad({100.0, 100.0, 0.0, 40.0, 20.0}));
        samples.push_back(s);
    }
    return samples;
}

std::map<std::string, GraspPose5D> fixture_predictions() {
    std::map<std::string, GraspPose5D> predictions;
    predictions["fx0"] = {100.0, 100.0, 0.0, 40.0, 20.0};   // exact
    predictions["fx1"] = {104.0, 100.0, 10.0, 40.0, 20.0};  // close enough
    predictions["fx2"] = {100.0, 100.0, 25.0, 40.0, 20.0};  // within 30 degrees
    predictions["fx3"] = {100.0, 100.0, 45.0, 40.0, 20.0};  // angle fails
    return predictions;
}

}  // namespace

TEST_CASE("evaluate aggregates the 4-sample fixture to accuracy 0.75") {
    const std::vector<Sample> samples = fixture_samples();
    const EvalReport report = evaluate(fixture_predictions(), samples, SplitSpec{});
    CHECK(report.n_total == 4);
    CHECK(report.n_correct == 3);
    CHECK(report.accuracy == doctest::Approx(0.75));
    CHECK(report.per_sample.size() == 4);
    CHECK(report.per_sample[3].correct == false);

    const std::string table = eval_report_table(report);
    CHECK(table.find("accuracy = 0.7500") != std::string::npos);
    const std::string json = eval_report_to_json(report);
    CHECK(json.find("\"accuracy\": 0.75") != std::string::npos);
}

TEST_CASE("evaluate is invariant under dataset order") {
    std::vector<Sample> samples = fixture_samples();
    std::reverse(samples.begin(), samples.end());
    const EvalReport report = evaluate(fixture_predictions(), samples, SplitSpec{});
    CHECK(report.accuracy == doctest::Approx(0.75));
    // report order is by id regardless of input order
    CHECK(report.per_sample.front().id == "fx0");
}

TEST_CASE("evaluate trivial accuracies") {
    const std::vector<Sample> samples = fixture_samples();
    std::map<std::string, GraspPose5D> copies;
    for (const Sample& s : samples) copies[s.id] = quad_to_pose(s.grasps_pos[0]);
    CHECK(evaluate(copies, samples, SplitSpec{}).accuracy == doctest::Approx(1.0));

    std::map<std::string, GraspPose5D> disjoint;
    for (const Sample& s : samples) disjoint[s.id] = {500.0, 500.0, 0.0, 10.0, 10.0};
    CHECK(evaluate(disjoint, samples, SplitSpec{}).accuracy == doctest::Approx(0.0));
}

TEST_CASE("evaluate_topk scores the best of the first k predictions") {
    const std::vector<Sample> samples = fixture_samples();
    std::map<std::string, std::vector<GraspPose5D>> predictions;
    const GraspPose5D bad{100.0, 100.0, 45.0, 40.0, 20.0};
    const GraspPose5D good{100.0, 100.0, 0.0, 40.0, 20.0};
    for (const Sample& s : samples) predictions[s.id] = {bad, good};

    // top-1 sees only the bad prediction
    CHECK(evaluate_topk(predictions, samples, SplitSpec{}, 1).accuracy ==
          doctest::Approx(0.0));
    // top-2 reaches the good one
    const EvalReport top2 = evaluate_topk(predictions, samples, SplitSpec{}, 2);
    CHECK(top2.accuracy == doctest::Approx(1.0));
    CHECK(top2.per_sample[0].pred.theta == doctest::Approx(0.0));

    CHECK_THROWS_AS(evaluate_topk(predictions, samples, SplitSpec{}, 0), Error);
}

TEST_CASE("evaluate lists every missing prediction") {
    const std::vector<Sample> samples = fixture_samples();
    std::map<std::string, GraspPose5D> predictions = fixture_predictions();
    predictions.erase("fx1");
    predictions.erase("fx3");
    try {
        evaluate(predictions, samples, SplitSpec{});
        FAIL("expected missing_prediction");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::missing_prediction);
        const std::string what = e.what();
        CHECK(what.find("fx1") != std::string::npos);
        CHECK(what.find("fx3") != std::string::npos);
    }
}

TEST_CASE("pca_baseline on an axis-aligned bar") {
    Mask bar = Mask::make(200, 200);
    for (int y = 90; y < 110; ++y) {
        for (int x = 50; x < 150; ++x) bar.at(x, y) = 1;
    }
    const BaselineResult result = pca_baseline(bar);
    CHECK_FALSE(result.degenerate);
    CHECK(result.pose.theta == doctest::Approx(-90.0));  // closing across the 20 px side
    CHECK(result.pose.x == doctest::Approx(99.5));
    CHECK(result.pose.y == doctest::Approx(99.5));
    CHECK(result.pose.w == doctest::Approx(1.2 * 20.0));
    CHECK(result.pose.h == doctest::Approx(0.6 * 100.0));
}

TEST_CASE("pca_baseline follows a rotated bar within a degree") {
    const double axis = 30.0;
    Mask bar = Mask::make(200, 200);
    const double rad = axis * 3.14159265358979323846 / 180.0;
    const double ux = std::cos(rad), uy = std::sin(rad);
    for (int y = 0; y < 200; ++y) {
        for (int x = 0; x < 200; ++x) {
            const double dx = x - 100.0, dy = y - 100.0;
            const double along = dx * ux + dy * uy;
            const double across = -dx * uy + dy * ux;
            if (std::fabs(along) <= 50.0 && std::fabs(across) <= 10.0) bar.at(x, y) = 1;
        }
    }
    const BaselineResult result = pca_baseline(bar);
    CHECK(angle_diff_deg(result.pose.theta, normalize_angle_deg(axis + 90.0)) < 1.0);
}

TEST_CASE("pca_baseline flags a disk as degenerate") {
    Mask disk = Mask::make(160, 160);
    for (int y = 0; y < 160; ++y) {
        for (int x = 0; x < 160; ++x) {
            const double dx = x - 80.0, dy = y - 80.0;
            if (dx * dx + dy * dy <= 40.0 * 40.0) disk.at(x, y) = 1;
        }
    }
    const BaselineResult result = pca_baseline(disk);
    CHECK(result.degenerate);
    CHECK(result.pose.theta == doctest::Approx(0.0));
}

TEST_CASE("pca_baseline rejects nearly-empty masks") {
    Mask tiny = Mask::make(20, 20);
    for (int i = 0; i < 9; ++i) tiny.at(i, 0) = 1;
    try {
        pca_baseline(tiny);
        FAIL("expected empty_mask");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_mask);
    }
}

TEST_CASE("synthetic bar pipeline: composite -> pca -> metric at >= 0.95") {
    int correct = 0;
    const int scenes = 60;  // the acceptance suite runs the full 200
    for (int i = 0; i < scenes; ++i) {
        const BarScene scene = make_bar_scene(3000 + static_cast<std::uint64_t>(i));
        const MaskedImage composited = composite(scene.rgb, scene.mask);
        // recover the object mask from the composited image: non-white pixels
        Mask recovered = Mask::make(composited.rgb.width, composited.rgb.height);
        for (int y = 0; y < recovered.height; ++y) {
            for (int x = 0; x < recovered.width; ++x) {
                const bool white = composited.rgb.at(x, y, 0) == 255 &&
                                   composited.rgb.at(x, y, 1) == 255 &&
                                   composited.rgb.at(x, y, 2) == 255;
                recovered.at(x, y) = white ? 0 : 1;
            }
        }
        const BaselineResult pred = pca_baseline(recovered);
        const std::vector<GraspPose5D> gts{scene.gt};
        if (is_correct(pred.pose, gts).correct) ++correct;
    }
    CHECK(static_cast<double>(correct) / scenes >= 0.95);
}

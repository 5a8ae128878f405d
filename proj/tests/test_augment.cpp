#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "graspbench/augment.hpp"
#include "graspbench/evaluation.hpp"
#include "graspbench/rng.hpp"
#include "graspbench/synthetic.hpp"

using namespace graspbench;

namespace {

Sample basic_sample(int w = 100, int h = 80) {
    Sample s;
    s.id = "fixture";
    s.width = w;
    s.height = h;
    s.grasps_pos.push_back(pose_to_quad({0.4 * w, 0.4 * h, 15.0, 20.0, 10.0}));
    s.grasps_pos.push_back(pose_to_quad({0.6 * w, 0.6 * h, -60.0, 16.0, 8.0}));
    return s;
}

}  // namespace

TEST_CASE("default spec enumerates exactly 125 combinations") {
    const AugmentSpec spec = default_augment_spec();
    CHECK(spec.combinations() == 125);
    CHECK(spec.target_multiplier == 125);
}

TEST_CASE("identity transform is byte-exact on pixels and annotations") {
    SplitMix64 rng(17);
    Sample sample = basic_sample(32, 24);
    Image8 img = Image8::make(32, 24, 3);
    for (std::uint8_t& v : img.data) v = static_cast<std::uint8_t>(rng.next_below(256));
    Mask mask = Mask::make(32, 24);
    for (std::uint8_t& v : mask.data) v = static_cast<std::uint8_t>(rng.next() & 1);

    const Applied out = apply(sample, img, &mask, Transform{});
    CHECK(out.rgb.data == img.data);
    REQUIRE(out.mask.has_value());
    CHECK(out.mask->data == mask.data);
    for (std::size_t g = 0; g < sample.grasps_pos.size(); ++g) {
        for (int k = 0; k < 4; ++k) {
            CHECK(out.sample.grasps_pos[g].v[k].x ==
                  doctest::Approx(sample.grasps_pos[g].v[k].x).epsilon(1e-12));
            CHECK(out.sample.grasps_pos[g].v[k].y ==
                  doctest::Approx(sample.grasps_pos[g].v[k].y).epsilon(1e-12));
        }
    }
    CHECK(out.sample.flags.empty());
}

TEST_CASE("rotation by 90 degrees about the center moves poses as a rigid map") {
    // center the image coordinates on (0,0): 1x1 image centered at pixel 0
    Sample sample;
    sample.id = "rot";
    sample.width = 1;
    sample.height = 1;
    sample.grasps_pos.push_back(pose_to_quad({10.0, 0.0, 0.0, 4.0, 2.0}));

    const Sample rotated = apply_annotations(sample, {90.0, 0.0, 0.0, 1.0});
    const GraspPose5D pose = quad_to_pose(rotated.grasps_pos[0]);
    CHECK(pose.x == doctest::Approx(0.0));
    CHECK(pose.y == doctest::Approx(10.0));
    CHECK(pose.theta == doctest::Approx(-90.0));
    CHECK(pose.h == doctest::Approx(4.0));
    CHECK(pose.w == doctest::Approx(2.0));
    // the center left the 1x1 frame
    REQUIRE(rotated.flags.size() == 1);
    CHECK(rotated.flags[0].rfind("grasp_out_of_frame:", 0) == 0);
}

TEST_CASE("brightness changes no annotation and no geometry") {
    const Sample sample = basic_sample();
    const Sample bright = apply_annotations(sample, {0.0, 0.0, 0.0, 1.7});
    REQUIRE(bright.grasps_pos.size() == sample.grasps_pos.size());
    for (std::size_t g = 0; g < sample.grasps_pos.size(); ++g) {
        for (int k = 0; k < 4; ++k) {
            CHECK(bright.grasps_pos[g].v[k].x ==
                  doctest::Approx(sample.grasps_pos[g].v[k].x));
            CHECK(bright.grasps_pos[g].v[k].y ==
                  doctest::Approx(sample.grasps_pos[g].v[k].y));
        }
    }

    Image8 img = Image8::make(4, 4, 3, 100);
    const Image8 brighter = warp_rgb(img, {0.0, 0.0, 0.0, 1.5}, Provenance::original);
    for (std::uint8_t v : brighter.data) CHECK(v == 150);
    const Image8 clamped = warp_rgb(img, {0.0, 0.0, 0.0, 5.0}, Provenance::original);
    for (std::uint8_t v : clamped.data) CHECK(v == 255);
}

TEST_CASE("vertex-wise and pose-wise transforms agree") {
    SplitMix64 rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const GraspPose5D pose{rng.uniform(10.0, 90.0), rng.uniform(10.0, 70.0),
                               rng.uniform(-90.0, 89.999), rng.uniform(2.0, 30.0),
                               rng.uniform(2.0, 30.0)};
        const double rot = rng.uniform(-180.0, 180.0);
        const double dx = rng.uniform(-40.0, 40.0);
        const double dy = rng.uniform(-40.0, 40.0);
        const double cx = 49.5, cy = 39.5;

        const GraspPose5D direct = transform_pose(pose, rot, dx, dy, cx, cy);
        GraspQuad quad = pose_to_quad(pose);
        for (Vec2& v : quad.v) v = transform_point(v, rot, dx, dy, cx, cy);
        const GraspPose5D via_vertices = quad_to_pose(quad);
        CHECK(std::fabs(direct.x - via_vertices.x) < 1e-6);
        CHECK(std::fabs(direct.y - via_vertices.y) < 1e-6);
        CHECK(angle_diff_deg(direct.theta, via_vertices.theta) < 1e-6);
        CHECK(std::fabs(direct.h - via_vertices.h) < 1e-6);
        CHECK(std::fabs(direct.w - via_vertices.w) < 1e-6);
    }
}

TEST_CASE("transformed grasps still pass the rectangle metric against themselves") {
    const AugmentSpec spec = default_augment_spec();
    int checked = 0;
    for (int scene = 0; scene < 8 && checked < 200; ++scene) {
        const BarScene bar = make_bar_scene(600 + static_cast<std::uint64_t>(scene));
        const std::vector<Transform> transforms = select_transforms(spec, 42, scene);
        for (std::size_t t = 0; t < transforms.size() && checked < 200; t += 5) {
            const Sample augmented = apply_annotations(bar.sample, transforms[t]);
            for (const GraspQuad& quad : augmented.grasps_pos) {
                const GraspPose5D g = quad_to_pose(quad);
                const std::vector<GraspPose5D> self{g};
                const MatchReport match = is_correct(g, self);
                CHECK(match.correct);
                CHECK(match.angle_diff == doctest::Approx(0.0));
                CHECK(match.jaccard == doctest::Approx(1.0).epsilon(1e-9));
                ++checked;
            }
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("expand emits exactly multiplier variants per sample, deterministically") {
    std::vector<Sample> train{basic_sample(), basic_sample()};
    train[1].id = "fixture2";

    AugmentSpec spec = default_augment_spec();
    const std::vector<Sample> expanded = expand(train, spec, 11);
    CHECK(expanded.size() == 250);

    std::set<std::string> ids;
    for (const Sample& s : expanded) ids.insert(s.id);
    CHECK(ids.size() == expanded.size());

    const std::vector<Sample> again = expand(train, spec, 11);
    REQUIRE(again.size() == expanded.size());
    for (std::size_t i = 0; i < expanded.size(); ++i) {
        CHECK(again[i].id == expanded[i].id);
    }
}

TEST_CASE("expand with multiplier 1 picks the identity combination") {
    AugmentSpec spec = default_augment_spec();
    spec.target_multiplier = 1;
    const std::vector<Sample> one = expand({basic_sample()}, spec, 5);
    REQUIRE(one.size() == 1);
    CHECK(one[0].id == "fixture_r0_tx0_ty0_b1");
    const GraspPose5D pose = quad_to_pose(one[0].grasps_pos[0]);
    CHECK(pose.x == doctest::Approx(40.0));
    CHECK(pose.theta == doctest::Approx(15.0));
}

TEST_CASE("expand rejects an insufficient spec") {
    AugmentSpec spec;
    spec.rotations_deg = {0.0};
    spec.translations = {{0.0, 0.0}};
    spec.brightness = {1.0};
    spec.target_multiplier = 2;
    try {
        expand({basic_sample()}, spec, 1);
        FAIL("expected insufficient_spec");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_spec);
    }
}

TEST_CASE("augment spec JSON round trip") {
    AugmentSpec spec;
    spec.rotations_deg = {-5.0, 0.0, 5.0};
    spec.translations = {{0.0, 0.0}, {10.0, -10.0}};
    spec.brightness = {0.8, 1.0, 1.2};
    spec.target_multiplier = 9;
    const AugmentSpec back = augment_spec_from_json(augment_spec_to_json(spec));
    CHECK(back.rotations_deg == spec.rotations_deg);
    CHECK(back.translations == spec.translations);
    CHECK(back.brightness == spec.brightness);
    CHECK(back.target_multiplier == spec.target_multiplier);
    CHECK_THROWS_AS(augment_spec_from_json("{\"brightness\": [0.0]}"), Error);
}

TEST_CASE("white fill applies to mask-composited provenance only") {
    Image8 img = Image8::make(11, 11, 3, 10);
    // translate far: most destination pixels map outside the source
    const Transform shift{0.0, 8.0, 0.0, 1.0};

    const Image8 replicated = warp_rgb(img, shift, Provenance::original);
    CHECK(replicated.at(0, 5, 0) == 10);  // edge replication keeps source gray

    const Image8 whitened = warp_rgb(img, shift, Provenance::mask_composited);
    CHECK(whitened.at(0, 5, 0) == 255);
    CHECK(whitened.at(10, 5, 0) == 10);  // still covered by the source
}

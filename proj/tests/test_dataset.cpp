#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "graspbench/dataset.hpp"
#include "graspbench/image.hpp"
#include "graspbench/serialize.hpp"
#include "test_util.hpp"

using namespace graspbench;
using graspbench::testing::TempDir;
using graspbench::testing::write_text;

namespace {

void write_blank_png(const std::filesystem::path& path, int w = 64, int h = 48) {
    write_png(path, Image8::make(w, h, 3, 200));
}

// Two valid 4x10 rectangles, vertex order matching the loader convention.
const char* kTwoRects =
    "10.0 10.0\n10.0 20.0\n14.0 20.0\n14.0 10.0\n"
    "30.0 10.0\n40.0 10.0\n40.0 14.0\n30.0 14.0\n";

}  // namespace

TEST_CASE("cornell loader groups rectangle lines in fours") {
    TempDir dir("cornell");
    write_blank_png(dir / "pcd0001r.png");
    write_text(dir / "pcd0001cpos.txt", kTwoRects);

    LoadReport report;
    const std::vector<Sample> samples = load_cornell(dir.path(), &report);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].id == "pcd0001");
    CHECK(samples[0].width == 64);
    CHECK(samples[0].height == 48);
    REQUIRE(samples[0].grasps_pos.size() == 2);
    CHECK(report.n_grasps == 2);
    CHECK(report.n_dropped_rects == 0);

    const GraspPose5D pose = quad_to_pose(samples[0].grasps_pos[0]);
    CHECK(pose.x == doctest::Approx(12.0));
    CHECK(pose.y == doctest::Approx(15.0));
}

TEST_CASE("cornell loader drops NaN rectangles but keeps the rest") {
    TempDir dir("cornell_nan");
    write_blank_png(dir / "pcd0002r.png");
    write_text(dir / "pcd0002cpos.txt",
               "NaN NaN\n10.0 20.0\n14.0 20.0\n14.0 10.0\n" +
                   std::string("30.0 10.0\n40.0 10.0\n40.0 14.0\n30.0 14.0\n"));

    LoadReport report;
    const std::vector<Sample> samples = load_cornell(dir.path(), &report);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].grasps_pos.size() == 1);
    CHECK(report.n_dropped_rects == 1);
}

TEST_CASE("cornell loader errors") {
    SUBCASE("line count not divisible by 4") {
        TempDir dir("cornell_bad");
        write_blank_png(dir / "pcd0003r.png");
        write_text(dir / "pcd0003cpos.txt", "1 1\n2 2\n3 3\n");
        CHECK_THROWS_AS(load_cornell(dir.path()), Error);
    }
    SUBCASE("malformed line") {
        TempDir dir("cornell_junk");
        write_blank_png(dir / "pcd0004r.png");
        write_text(dir / "pcd0004cpos.txt", "1 1\n2 2\nfish\n4 4\n");
        try {
            load_cornell(dir.path());
            FAIL("expected parse_error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::parse_error);
        }
    }
    SUBCASE("missing image") {
        TempDir dir("cornell_noimg");
        write_text(dir / "pcd0005cpos.txt", kTwoRects);
        try {
            load_cornell(dir.path());
            FAIL("expected missing_image");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::missing_image);
        }
    }
    SUBCASE("empty directory") {
        TempDir dir("cornell_empty");
        CHECK_THROWS_AS(load_cornell(dir.path()), Error);
    }
}

TEST_CASE("cornell loader picks up categories, masks and subdirectories") {
    TempDir dir("cornell_full");
    std::filesystem::create_directories(dir / "01");
    write_blank_png(dir.path() / "01" / "pcd0101r.png");
    write_text(dir.path() / "01" / "pcd0101cpos.txt", kTwoRects);
    write_mask_png(dir.path() / "01" / "pcd0101mask.png", Mask::make(64, 48, 1));
    write_text(dir / "z.txt", "pcd0101 coffee mug\n");

    const std::vector<Sample> samples = load_cornell(dir.path());
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].category == "coffee mug");
    CHECK_FALSE(samples[0].mask_path.empty());
}

TEST_CASE("jacquard loader maps the grasp line schema") {
    TempDir dir("jacquard");
    write_blank_png(dir / "7_sceneA_RGB.png", 512, 512);
    write_text(dir / "7_sceneA_grasps.txt", "100;200;45;30;10\n150;150;135;20;8\n");

    LoadReport report;
    const std::vector<Sample> samples = load_jacquard(dir.path(), &report);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].id == "7_sceneA");
    CHECK(samples[0].category == "sceneA");
    REQUIRE(samples[0].grasps_pos.size() == 2);

    const GraspPose5D first = quad_to_pose(samples[0].grasps_pos[0]);
    CHECK(first.x == doctest::Approx(100.0));
    CHECK(first.y == doctest::Approx(200.0));
    CHECK(first.theta == doctest::Approx(45.0));
    CHECK(first.w == doctest::Approx(30.0));
    CHECK(first.h == doctest::Approx(10.0));

    // theta = 135 normalizes to -45
    const GraspPose5D second = quad_to_pose(samples[0].grasps_pos[1]);
    CHECK(second.theta == doctest::Approx(-45.0));
}

TEST_CASE("jacquard loader tolerates missing depth and empty grasp files") {
    TempDir dir("jacquard_empty");
    write_blank_png(dir / "3_obj_RGB.png");
    write_text(dir / "3_obj_grasps.txt", "");

    LoadReport report;
    const std::vector<Sample> samples = load_jacquard(dir.path(), &report);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].grasps_pos.empty());
    CHECK(samples[0].depth_path.empty());
    REQUIRE(samples[0].flags.size() == 1);
    CHECK(samples[0].flags[0] == "no_grasps");
    CHECK(report.n_empty_samples == 1);
}

namespace {

std::vector<Sample> synthetic_samples(int n, int categories) {
    std::vector<Sample> samples;
    for (int i = 0; i < n; ++i) {
        Sample s;
        s.id = "s" + std::to_string(1000 + i);
        s.width = 100;
        s.height = 100;
        s.category = "cat" + std::to_string(i % categories);
        s.grasps_pos.push_back(pose_to_quad({50.0, 50.0, 10.0, 20.0, 8.0}));
        samples.push_back(s);
    }
    return samples;
}

}  // namespace

TEST_CASE("image-wise split: 4:1 counts, determinism, partition") {
    const std::vector<Sample> samples = synthetic_samples(10, 3);
    SplitSpec spec;
    spec.mode = SplitMode::image_wise;
    spec.seed = 7;

    const SplitResult once = split(samples, spec);
    CHECK(once.train.size() == 8);
    CHECK(once.test.size() == 2);

    const SplitResult twice = split(samples, spec);
    REQUIRE(once.train.size() == twice.train.size());
    for (std::size_t i = 0; i < once.train.size(); ++i) {
        CHECK(once.train[i].id == twice.train[i].id);
    }

    std::set<std::string> seen;
    for (const Sample& s : once.train) seen.insert(s.id);
    for (const Sample& s : once.test) seen.insert(s.id);
    CHECK(seen.size() == samples.size());

    SplitSpec other = spec;
    other.seed = 8;
    const SplitResult different = split(samples, other);
    bool same = true;
    for (std::size_t i = 0; i < once.train.size(); ++i) {
        same = same && once.train[i].id == different.train[i].id;
    }
    CHECK_FALSE(same);
}

TEST_CASE("object-wise split keeps categories disjoint") {
    const std::vector<Sample> samples = synthetic_samples(50, 9);
    SplitSpec spec;
    spec.mode = SplitMode::object_wise;
    spec.seed = 3;

    const SplitResult result = split(samples, spec);
    CHECK(result.train.size() + result.test.size() == samples.size());
    std::set<std::string> train_categories, test_categories;
    for (const Sample& s : result.train) train_categories.insert(s.category);
    for (const Sample& s : result.test) test_categories.insert(s.category);
    for (const std::string& c : test_categories) {
        CHECK(train_categories.count(c) == 0);
    }
    // 4:1 within whole-category granularity
    CHECK(result.train.size() >= 35);
    CHECK(result.train.size() <= 45);
}

TEST_CASE("object-wise split requires categories") {
    std::vector<Sample> samples = synthetic_samples(10, 2);
    samples[4].category.clear();
    SplitSpec spec;
    spec.mode = SplitMode::object_wise;
    try {
        split(samples, spec);
        FAIL("expected missing_categories");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::missing_categories);
    }
}

TEST_CASE("split rejects an empty dataset") {
    CHECK_THROWS_AS(split({}, SplitSpec{}), Error);
}

TEST_CASE("canonical JSON round-trips byte-exact") {
    TempDir dir("serialize");
    std::vector<Sample> samples = synthetic_samples(4, 2);
    samples[1].depth_path = "depth/d1.png";
    samples[2].mask_path = "masks/m2.png";
    samples[3].flags.push_back("no_grasps");
    samples[3].grasps_pos.clear();
    samples[0].grasps_neg.push_back(pose_to_quad({25.0, 75.0, -37.5, 12.0, 6.0}));

    const std::filesystem::path first = dir / "a.jsonl";
    const std::filesystem::path second = dir / "b.jsonl";
    write_dataset_jsonl(first, samples);
    const std::vector<Sample> reloaded = read_dataset_jsonl(first);
    REQUIRE(reloaded.size() == samples.size());
    write_dataset_jsonl(second, reloaded);

    CHECK(graspbench::testing::read_text(first) ==
          graspbench::testing::read_text(second));
    CHECK(reloaded[1].depth_path == "depth/d1.png");
    CHECK(reloaded[2].mask_path == "masks/m2.png");
    CHECK(reloaded[3].flags == std::vector<std::string>{"no_grasps"});
    REQUIRE(reloaded[0].grasps_neg.size() == 1);
}

TEST_CASE("predictions JSON round-trip") {
    TempDir dir("preds");
    std::map<std::string, GraspPose5D> predictions;
    predictions["a"] = {10.0, 20.0, 30.0, 4.0, 5.0};
    predictions["b"] = {1.5, 2.5, -45.0, 3.0, 6.0};
    const std::filesystem::path path = dir / "preds.json";
    write_predictions_json(path, predictions);
    const auto reloaded = read_predictions_json(path);
    REQUIRE(reloaded.size() == 2);
    CHECK(reloaded.at("a").theta == doctest::Approx(30.0));
    CHECK(reloaded.at("b").w == doctest::Approx(6.0));
}

TEST_CASE("grasp_in_bounds applies the quarter-frame margin") {
    const GraspQuad inside = pose_to_quad({50.0, 50.0, 0.0, 10.0, 10.0});
    CHECK(grasp_in_bounds(inside, 100, 100));
    const GraspQuad slightly_out = pose_to_quad({-10.0, 50.0, 0.0, 10.0, 10.0});
    CHECK(grasp_in_bounds(slightly_out, 100, 100));
    const GraspQuad far_out = pose_to_quad({-50.0, 50.0, 0.0, 10.0, 10.0});
    CHECK_FALSE(grasp_in_bounds(far_out, 100, 100));
}

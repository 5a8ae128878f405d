#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>

#include <json.hpp>

#include "graspbench/dataset.hpp"
#include "graspbench/image.hpp"
#include "graspbench/serialize.hpp"
#include "graspbench/synthetic.hpp"
#include "test_util.hpp"

using namespace graspbench;
using namespace graspbench::testing;
namespace fs = std::filesystem;

namespace {

// A miniature Cornell-layout directory with real PNGs.
void make_cornell_fixture(const fs::path& dir) {
    const char* rects =
        "20.0 20.0\n20.0 40.0\n30.0 40.0\n30.0 20.0\n"
        "40.0 12.0\n56.0 12.0\n56.0 20.0\n40.0 20.0\n";
    for (int i = 1; i <= 3; ++i) {
        const std::string base = "pcd000" + std::to_string(i);
        write_png(dir / (base + "r.png"), Image8::make(64, 64, 3, 180));
        write_text(dir / (base + "cpos.txt"), rects);
    }
    write_text(dir / "pcd0001cneg.txt",
               "2.0 2.0\n2.0 6.0\n10.0 6.0\n10.0 2.0\n");
}

// Dataset of bar scenes written to disk: images, masks, canonical JSONL.
fs::path make_bar_dataset(const TempDir& dir, int n, const std::string& name) {
    std::vector<Sample> samples;
    for (int i = 0; i < n; ++i) {
        BarScene scene = make_bar_scene(9000 + static_cast<std::uint64_t>(i));
        scene.sample.id = "bar" + std::to_string(i);
        const fs::path rgb = dir / (scene.sample.id + ".png");
        const fs::path mask = dir / (scene.sample.id + "_mask.png");
        write_png(rgb, scene.rgb);
        write_mask_png(mask, scene.mask);
        scene.sample.rgb_path = rgb.string();
        scene.sample.mask_path = mask.string();
        samples.push_back(scene.sample);
    }
    const fs::path jsonl = dir / name;
    write_dataset_jsonl(jsonl, samples);
    return jsonl;
}

}  // namespace

TEST_CASE("convert parses a cornell fixture and is idempotent") {
    TempDir data("cli_cornell");
    make_cornell_fixture(data.path());
    TempDir out1("cli_convert1");
    TempDir out2("cli_convert2");

    const CliResult first = run_cli("convert --format cornell --input " +
                                    data.path().string() + " --outdir " +
                                    out1.path().string());
    CHECK(first.exit_code == 0);
    CHECK(first.out.find("converted 3 samples") != std::string::npos);
    CHECK(fs::exists(out1 / "dataset.jsonl"));
    CHECK(fs::exists(out1 / "config.json"));

    // converting the canonical output again is byte-identical
    const CliResult second = run_cli("convert --format canonical --input " +
                                     (out1 / "dataset.jsonl").string() + " --outdir " +
                                     out2.path().string());
    CHECK(second.exit_code == 0);
    CHECK(read_text(out1 / "dataset.jsonl") == read_text(out2 / "dataset.jsonl"));
}

TEST_CASE("convert fails on an empty directory, naming it in error JSON") {
    TempDir data("cli_empty");
    TempDir out("cli_empty_out");
    const CliResult result = run_cli("convert --format cornell --input " +
                                     data.path().string() + " --outdir " +
                                     out.path().string());
    CHECK(result.exit_code != 0);
    const nlohmann::json error = nlohmann::json::parse(result.err);
    CHECK(error.at("error").at("code") == "empty_dataset");
    CHECK(error.at("error").at("message").get<std::string>().find(
              data.path().string()) != std::string::npos);
}

TEST_CASE("split is deterministic under a fixed seed") {
    TempDir data("cli_split_data");
    const fs::path jsonl = make_bar_dataset(data, 10, "dataset.jsonl");
    TempDir out1("cli_split1");
    TempDir out2("cli_split2");

    const std::string args = "split --input " + jsonl.string() + " --seed 7 --outdir ";
    CHECK(run_cli(args + out1.path().string()).exit_code == 0);
    CHECK(run_cli(args + out2.path().string()).exit_code == 0);
    CHECK(read_text(out1 / "train.jsonl") == read_text(out2 / "train.jsonl"));
    CHECK(read_text(out1 / "test.jsonl") == read_text(out2 / "test.jsonl"));
    CHECK(read_dataset_jsonl(out1 / "train.jsonl").size() == 8);
    CHECK(read_dataset_jsonl(out1 / "test.jsonl").size() == 2);
}

TEST_CASE("augment expands annotations deterministically") {
    TempDir data("cli_augment_data");
    const fs::path jsonl = make_bar_dataset(data, 2, "train.jsonl");
    TempDir out("cli_augment");

    const CliResult result =
        run_cli("augment --input " + jsonl.string() +
                " --multiplier 10 --seed 3 --no-images --outdir " + out.path().string());
    CHECK(result.exit_code == 0);
    const std::vector<Sample> expanded = read_dataset_jsonl(out / "augmented.jsonl");
    CHECK(expanded.size() == 20);
}

TEST_CASE("maskify composites and rewrites image references") {
    TempDir data("cli_maskify_data");
    const fs::path jsonl = make_bar_dataset(data, 2, "dataset.jsonl");
    TempDir out("cli_maskify");

    const CliResult result = run_cli("maskify --input " + jsonl.string() +
                                     " --outdir " + out.path().string());
    CHECK(result.exit_code == 0);
    const std::vector<Sample> maskified = read_dataset_jsonl(out / "maskified.jsonl");
    REQUIRE(maskified.size() == 2);
    for (const Sample& s : maskified) {
        CHECK(s.provenance == Provenance::mask_composited);
        const Image8 img = read_png(s.rgb_path);
        const Mask mask = read_mask_png(s.mask_path);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (!mask.at(x, y)) {
                    CHECK(img.at(x, y, 0) == 255);
                    CHECK(img.at(x, y, 1) == 255);
                    CHECK(img.at(x, y, 2) == 255);
                }
            }
        }
    }
}

TEST_CASE("rgd rewrites the blue channel from depth") {
    TempDir data("cli_rgd_data");
    std::vector<Sample> samples;
    BarScene scene = make_bar_scene(77);
    scene.sample.id = "withdepth";
    const fs::path rgb = data / "withdepth.png";
    write_png(rgb, scene.rgb);
    DepthMap depth = DepthMap::make(scene.rgb.width, scene.rgb.height, 0.5f);
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            depth.at(x, y) = scene.mask.at(x, y) ? 0.25f : 0.75f;
        }
    }
    const fs::path depth_path = data / "withdepth.f32";
    write_depth_f32(depth_path, depth);
    scene.sample.rgb_path = rgb.string();
    scene.sample.depth_path = depth_path.string();
    samples.push_back(scene.sample);
    const fs::path jsonl = data / "dataset.jsonl";
    write_dataset_jsonl(jsonl, samples);

    TempDir out("cli_rgd");
    const CliResult result =
        run_cli("rgd --input " + jsonl.string() + " --outdir " + out.path().string());
    CHECK(result.exit_code == 0);
    const std::vector<Sample> converted = read_dataset_jsonl(out / "rgd.jsonl");
    REQUIRE(converted.size() == 1);
    CHECK(converted[0].provenance == Provenance::rgd);
    const Image8 img = read_png(converted[0].rgb_path);
    // per-image range [0.25, 0.75]: object -> 0, background -> 255
    bool saw_zero = false, saw_full = false;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (img.at(x, y, 2) == 0) saw_zero = true;
            if (img.at(x, y, 2) == 255) saw_full = true;
        }
    }
    CHECK(saw_zero);
    CHECK(saw_full);
}

TEST_CASE("baseline + evaluate: end-to-end through the binary") {
    TempDir data("cli_e2e_data");
    const fs::path jsonl = make_bar_dataset(data, 6, "test.jsonl");
    TempDir preds("cli_e2e_preds");
    TempDir evaldir("cli_e2e_eval");

    const CliResult baseline = run_cli("baseline --input " + jsonl.string() +
                                       " --outdir " + preds.path().string());
    CHECK(baseline.exit_code == 0);
    REQUIRE(fs::exists(preds / "predictions.json"));

    const CliResult evaluated =
        run_cli("evaluate --input " + jsonl.string() + " --predictions " +
                (preds / "predictions.json").string() + " --outdir " +
                evaldir.path().string());
    CHECK(evaluated.exit_code == 0);
    CHECK(evaluated.out.find("accuracy = 1.0000") != std::string::npos);
    CHECK(fs::exists(evaldir / "report.json"));
    CHECK(fs::exists(evaldir / "report.txt"));
}

TEST_CASE("evaluate prints accuracy 0.75 on the 4-sample fixture") {
    TempDir data("cli_eval_fixture");
    std::vector<Sample> samples;
    std::map<std::string, GraspPose5D> predictions;
    for (int i = 0; i < 4; ++i) {
        Sample s;
        s.id = "fx" + std::to_string(i);
        s.width = 200;
        s.height = 200;
        s.grasps_pos.push_back(pose_to_quad({100.0, 100.0, 0.0, 40.0, 20.0}));
        samples.push_back(s);
    }
    predictions["fx0"] = {100.0, 100.0, 0.0, 40.0, 20.0};
    predictions["fx1"] = {104.0, 100.0, 10.0, 40.0, 20.0};
    predictions["fx2"] = {100.0, 100.0, 25.0, 40.0, 20.0};
    predictions["fx3"] = {100.0, 100.0, 45.0, 40.0, 20.0};
    const fs::path jsonl = data / "test.jsonl";
    const fs::path preds = data / "preds.json";
    write_dataset_jsonl(jsonl, samples);
    write_predictions_json(preds, predictions);

    TempDir out("cli_eval_fixture_out");
    const CliResult result =
        run_cli("evaluate --input " + jsonl.string() + " --predictions " +
                preds.string() + " --outdir " + out.path().string());
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("accuracy = 0.7500") != std::string::npos);
}

TEST_CASE("gradcheck exits zero and prints the max relative error") {
    const CliResult result = run_cli("gradcheck --batches 20 --seed 11");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("max rel error L_gpn") != std::string::npos);
    CHECK(result.out.find("PASS") != std::string::npos);
}

TEST_CASE("visualize writes one overlay per sample") {
    TempDir data("cli_vis_data");
    const fs::path jsonl = make_bar_dataset(data, 3, "test.jsonl");
    TempDir preds("cli_vis_preds");
    run_cli("baseline --input " + jsonl.string() + " --outdir " + preds.path().string());

    TempDir out("cli_vis");
    const CliResult result =
        run_cli("visualize --input " + jsonl.string() + " --predictions " +
                (preds / "predictions.json").string() + " --outdir " +
                out.path().string());
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(out / "bar0.png"));
    CHECK(fs::exists(out / "bar1.png"));
    CHECK(fs::exists(out / "bar2.png"));
    // overlays differ from the raw render
    const Image8 overlay = read_png(out / "bar0.png");
    CHECK(overlay.width == 200);
}

TEST_CASE("config file overrides flags") {
    TempDir data("cli_cfg_data");
    const fs::path jsonl = make_bar_dataset(data, 10, "dataset.jsonl");
    TempDir out_flag("cli_cfg_flag");
    TempDir out_cfg("cli_cfg_file");
    write_text(data / "override.json", "{\"seed\": 7}");

    // seed 99 on the command line, 7 in the config file: the file wins
    CHECK(run_cli("split --input " + jsonl.string() + " --seed 99 --config " +
                  (data / "override.json").string() + " --outdir " +
                  out_cfg.path().string())
              .exit_code == 0);
    CHECK(run_cli("split --input " + jsonl.string() + " --seed 7 --outdir " +
                  out_flag.path().string())
              .exit_code == 0);
    CHECK(read_text(out_cfg / "train.jsonl") == read_text(out_flag / "train.jsonl"));
}

// graspbench: grasp-detection geometry, losses, dataset pipeline and
// evaluation toolkit. One binary, subcommand style; all machine-readable
// I/O is JSON (see docs/formats.md).

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graspbench/augment.hpp"
#include "graspbench/dataset.hpp"
#include "graspbench/draw.hpp"
#include "graspbench/evaluation.hpp"
#include "graspbench/gradcheck.hpp"
#include "graspbench/image.hpp"
#include "graspbench/mask_pipeline.hpp"
#include "graspbench/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace graspbench;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Resolved-config recording: one config.json per run in the output
// directory. Timestamps live only in the metadata block so every other
// artifact stays bit-reproducible.
void record_config(const fs::path& outdir, const std::string& command,
                   const json& config) {
    fs::create_directories(outdir);
    json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["metadata"] = {{"timestamp_utc", utc_timestamp()}, {"version", kVersion}};
    std::ofstream out(outdir / "config.json");
    out << doc.dump(2) << '\n';
}

// The config file overrides flags: values present in the JSON replace
// whatever was parsed from the command line.
class ConfigOverride {
public:
    void bind(const std::string& key, double* slot) {
        doubles_[key] = slot;
    }
    void bind(const std::string& key, std::uint64_t* slot) { uints_[key] = slot; }
    void bind(const std::string& key, int* slot) { ints_[key] = slot; }
    void bind(const std::string& key, bool* slot) { bools_[key] = slot; }
    void bind(const std::string& key, std::string* slot) { strings_[key] = slot; }

    void apply(const fs::path& config_path) const {
        std::ifstream in(config_path);
        if (!in) {
            raise(Errc::io_error, "cannot open config file " + config_path.string());
        }
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            raise(Errc::parse_error, std::string("bad config JSON: ") + e.what());
        }
        for (const auto& [key, value] : doc.items()) {
            if (const auto it = doubles_.find(key); it != doubles_.end()) {
                *it->second = value.get<double>();
            } else if (const auto it2 = uints_.find(key); it2 != uints_.end()) {
                *it2->second = value.get<std::uint64_t>();
            } else if (const auto it3 = ints_.find(key); it3 != ints_.end()) {
                *it3->second = value.get<int>();
            } else if (const auto it4 = bools_.find(key); it4 != bools_.end()) {
                *it4->second = value.get<bool>();
            } else if (const auto it5 = strings_.find(key); it5 != strings_.end()) {
                *it5->second = value.get<std::string>();
            } else {
                raise(Errc::parse_error, "unknown config key: " + key);
            }
        }
    }

private:
    std::map<std::string, double*> doubles_;
    std::map<std::string, std::uint64_t*> uints_;
    std::map<std::string, int*> ints_;
    std::map<std::string, bool*> bools_;
    std::map<std::string, std::string*> strings_;
};

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

struct CommonArgs {
    std::string config_file;
};

void add_config_flag(CLI::App* cmd, CommonArgs& common) {
    cmd->add_option("--config", common.config_file,
                    "JSON config file; its values override flags");
}

// ---------------------------------------------------------------- convert
struct ConvertArgs {
    std::string format;
    std::string input;
    std::string outdir;
};

int cmd_convert(ConvertArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("format", &args.format);
    overrides.bind("input", &args.input);
    overrides.bind("outdir", &args.outdir);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    if (args.input.empty()) {
        if (const char* root = std::getenv("GRASPBENCH_DATA_ROOT")) {
            args.input = (fs::path(root) / args.format).string();
        } else {
            raise(Errc::io_error,
                  "no --input given and GRASPBENCH_DATA_ROOT is not set");
        }
    }

    LoadReport report;
    std::vector<Sample> samples;
    if (args.format == "cornell") {
        samples = load_cornell(args.input, &report);
    } else if (args.format == "jacquard") {
        samples = load_jacquard(args.input, &report);
    } else if (args.format == "canonical") {
        samples = read_dataset_jsonl(args.input);
        report.n_samples = static_cast<int>(samples.size());
        for (const Sample& s : samples) {
            report.n_grasps += static_cast<int>(s.grasps_pos.size());
            if (s.grasps_pos.empty()) ++report.n_empty_samples;
        }
    } else {
        raise(Errc::parse_error, "unknown format: " + args.format);
    }

    record_config(args.outdir, "convert",
                  {{"format", args.format}, {"input", args.input},
                   {"outdir", args.outdir}});
    write_dataset_jsonl(fs::path(args.outdir) / "dataset.jsonl", samples);

    std::printf("converted %d samples (%d grasps, %d rectangles dropped, %d empty)\n",
                report.n_samples, report.n_grasps, report.n_dropped_rects,
                report.n_empty_samples);
    for (const std::string& warning : report.warnings) {
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    }
    return 0;
}

// ------------------------------------------------------------------ split
struct SplitArgs {
    std::string input;
    std::string outdir;
    std::string mode = "image_wise";
    std::uint64_t seed = 0;
    double ratio = 0.8;
};

int cmd_split(SplitArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("input", &args.input);
    overrides.bind("outdir", &args.outdir);
    overrides.bind("mode", &args.mode);
    overrides.bind("seed", &args.seed);
    overrides.bind("ratio", &args.ratio);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    const std::vector<Sample> samples = read_dataset_jsonl(args.input);
    SplitSpec spec;
    spec.mode = split_mode_from_name(args.mode);
    spec.seed = args.seed;
    spec.ratio_train = args.ratio;
    const SplitResult result = split(samples, spec);

    record_config(args.outdir, "split",
                  {{"input", args.input}, {"outdir", args.outdir}, {"mode", args.mode},
                   {"seed", args.seed}, {"ratio", args.ratio}});
    write_dataset_jsonl(fs::path(args.outdir) / "train.jsonl", result.train);
    write_dataset_jsonl(fs::path(args.outdir) / "test.jsonl", result.test);
    std::printf("split %zu samples into %zu train / %zu test (%s, seed %llu)\n",
                samples.size(), result.train.size(), result.test.size(),
                args.mode.c_str(), static_cast<unsigned long long>(args.seed));
    return 0;
}

// ---------------------------------------------------------------- augment
struct AugmentArgs {
    std::string input;
    std::string outdir;
    std::string spec_file;
    std::vector<double> rotations;
    std::vector<std::string> translations;  // "dx:dy"
    std::vector<double> brightness;
    std::uint64_t seed = 0;
    int multiplier = -1;  // override the spec when >= 1
    bool no_images = false;
    int workers = 1;
};

std::pair<double, double> parse_translation(const std::string& text) {
    const auto sep = text.find(':');
    if (sep == std::string::npos) {
        raise(Errc::parse_error, "translation must look like dx:dy, got " + text);
    }
    try {
        return {std::stod(text.substr(0, sep)), std::stod(text.substr(sep + 1))};
    } catch (const std::exception&) {
        raise(Errc::parse_error, "translation must look like dx:dy, got " + text);
    }
}

int cmd_augment(AugmentArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("input", &args.input);
    overrides.bind("outdir", &args.outdir);
    overrides.bind("spec_file", &args.spec_file);
    overrides.bind("seed", &args.seed);
    overrides.bind("multiplier", &args.multiplier);
    overrides.bind("no_images", &args.no_images);
    overrides.bind("workers", &args.workers);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    AugmentSpec spec = default_augment_spec();
    if (!args.spec_file.empty()) {
        std::ifstream in(args.spec_file);
        if (!in) {
            raise(Errc::io_error, "cannot open augment spec " + args.spec_file);
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        spec = augment_spec_from_json(text);
    }
    if (!args.rotations.empty()) spec.rotations_deg = args.rotations;
    if (!args.translations.empty()) {
        spec.translations.clear();
        for (const std::string& t : args.translations) {
            spec.translations.push_back(parse_translation(t));
        }
    }
    if (!args.brightness.empty()) spec.brightness = args.brightness;
    if (args.multiplier >= 1) spec.target_multiplier = args.multiplier;

    const std::vector<Sample> train = read_dataset_jsonl(args.input);
    ExpandOptions options;
    options.materialize_images = !args.no_images;
    options.image_dir = fs::path(args.outdir) / "images";
    options.workers = args.workers;
    const std::vector<Sample> expanded = expand(train, spec, args.seed, options);

    record_config(args.outdir, "augment",
                  {{"input", args.input}, {"outdir", args.outdir},
                   {"spec", json::parse(augment_spec_to_json(spec))},
                   {"seed", args.seed}, {"no_images", args.no_images},
                   {"workers", args.workers}});
    write_dataset_jsonl(fs::path(args.outdir) / "augmented.jsonl", expanded);
    std::printf("expanded %zu samples x %d -> %zu\n", train.size(),
                spec.target_multiplier, expanded.size());
    return 0;
}

// ---------------------------------------------------------------- maskify
struct PipelineArgs {
    std::string input;
    std::string outdir;
    int workers = 1;
    bool skip_missing = false;
    // rgd only:
    double dmin = 0.0;
    double dmax = 0.0;
    bool explicit_range = false;
};

int cmd_maskify(PipelineArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("input", &args.input);
    overrides.bind("outdir", &args.outdir);
    overrides.bind("workers", &args.workers);
    overrides.bind("skip_missing", &args.skip_missing);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    std::vector<Sample> samples = read_dataset_jsonl(args.input);
    std::string missing;
    for (const Sample& s : samples) {
        if (s.mask_path.empty() && !args.skip_missing) {
            if (!missing.empty()) missing += ", ";
            missing += s.id;
        }
    }
    if (!missing.empty()) {
        raise(Errc::empty_mask, "samples without masks: " + missing);
    }

    record_config(args.outdir, "maskify",
                  {{"input", args.input}, {"outdir", args.outdir},
                   {"workers", args.workers}, {"skip_missing", args.skip_missing}});
    const fs::path image_dir = fs::path(args.outdir) / "images";
    fs::create_directories(image_dir);

    std::atomic<int> skipped{0};
    parallel_for(samples.size(), args.workers, [&](std::size_t i) {
        Sample& s = samples[i];
        if (s.mask_path.empty()) {
            s.flags.push_back("maskify_skipped");
            ++skipped;
            return;
        }
        const Image8 rgb = read_png(s.rgb_path);
        const Mask mask = read_mask_png(s.mask_path);
        const MaskedImage composited = composite(rgb, mask);
        const fs::path out_path = image_dir / (s.id + ".png");
        write_png(out_path, composited.rgb);
        s.rgb_path = out_path.string();
        s.provenance = composited.provenance;
    });

    write_dataset_jsonl(fs::path(args.outdir) / "maskified.jsonl", samples);
    std::printf("maskified %zu samples (%d skipped)\n", samples.size() - skipped.load(),
                skipped.load());
    return 0;
}

// -------------------------------------------------------------------- rgd
int cmd_rgd(PipelineArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("input", &args.input);
    overrides.bind("outdir", &args.outdir);
    overrides.bind("workers", &args.workers);
    overrides.bind("skip_missing", &args.skip_missing);
    overrides.bind("dmin", &args.dmin);
    overrides.bind("dmax", &args.dmax);
    if (!common.config_file.empty()) overrides.apply(common.config_file);
    if (args.dmin != 0.0 || args.dmax != 0.0) args.explicit_range = true;

    std::vector<Sample> samples = read_dataset_jsonl(args.input);
    std::string missing;
    for (const Sample& s : samples) {
        if (s.depth_path.empty() && !args.skip_missing) {
            if (!missing.empty()) missing += ", ";
            missing += s.id;
        }
    }
    if (!missing.empty()) {
        raise(Errc::bad_range, "samples without depth: " + missing);
    }

    record_config(args.outdir, "rgd",
                  {{"input", args.input}, {"outdir", args.outdir},
                   {"workers", args.workers}, {"skip_missing", args.skip_missing},
                   {"dmin", args.dmin}, {"dmax", args.dmax},
                   {"per_image_range", !args.explicit_range}});
    const fs::path image_dir = fs::path(args.outdir) / "images";
    fs::create_directories(image_dir);

    std::atomic<int> skipped{0};
    parallel_for(samples.size(), args.workers, [&](std::size_t i) {
        Sample& s = samples[i];
        if (s.depth_path.empty()) {
            s.flags.push_back("rgd_skipped");
            ++skipped;
            return;
        }
        const Image8 rgb = read_png(s.rgb_path);
        const DepthMap depth = read_depth(s.depth_path);
        double lo = args.dmin, hi = args.dmax;
        if (!args.explicit_range) {
            std::tie(lo, hi) = finite_depth_range(depth);
        }
        const MaskedImage rgd = to_rgd(rgb, depth, lo, hi);
        const fs::path out_path = image_dir / (s.id + ".png");
        write_png(out_path, rgd.rgb);
        s.rgb_path = out_path.string();
        s.provenance = rgd.provenance;
    });

    write_dataset_jsonl(fs::path(args.outdir) / "rgd.jsonl", samples);
    std::printf("rgd-converted %zu samples (%d skipped)\n",
                samples.size() - skipped.load(), skipped.load());
    return 0;
}

// --------------------------------------------------------------- evaluate
struct EvaluateArgs {
    std::string input;
    std::string predictions;
    std::string outdir;
    std::string mode = "image_wise";
    std::string jaccard_mode = "rotated";
    double angle_max = 30.0;
    bool angle_strict = false;
    double jaccard_min = 0.25;
    int top_k = 1;
};

MetricOptions metric_options(const EvaluateArgs& args) {
    MetricOptions options;
    options.max_angle_diff = args.angle_max;
    options.angle_inclusive = !args.angle_strict;
    options.min_jaccard = args.jaccard_min;
    if (args.jaccard_mode == "rotated") {
        options.jaccard_mode = JaccardMode::rotated;
    } else if (args.jaccard_mode == "aabb" || args.jaccard_mode == "axis_aligned") {
        options.jaccard_mode = JaccardMode::axis_aligned;
    } else {
        raise(Errc::parse_error, "unknown jaccard mode: " + args.jaccard_mode);
    }
    return options;
}

int cmd_evaluate(EvaluateArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("input", &args.input);
    overrides.bind("predictions", &args.predictions);
    overrides.bind("outdir", &args.outdir);
    overrides.bind("mode", &args.mode);
    overrides.bind("jaccard_mode", &args.jaccard_mode);
    overrides.bind("angle_max", &args.angle_max);
    overrides.bind("angle_strict", &args.angle_strict);
    overrides.bind("jaccard_min", &args.jaccard_min);
    overrides.bind("top_k", &args.top_k);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    const std::vector<Sample> samples = read_dataset_jsonl(args.input);
    const auto predictions = read_multi_predictions_json(args.predictions);
    SplitSpec spec;
    spec.mode = split_mode_from_name(args.mode);
    const EvalReport report =
        evaluate_topk(predictions, samples, spec, args.top_k, metric_options(args));

    record_config(args.outdir, "evaluate",
                  {{"input", args.input}, {"predictions", args.predictions},
                   {"outdir", args.outdir}, {"mode", args.mode},
                   {"jaccard_mode", args.jaccard_mode}, {"angle_max", args.angle_max},
                   {"angle_strict", args.angle_strict},
                   {"jaccard_min", args.jaccard_min}, {"top_k", args.top_k}});
    {
        std::ofstream out(fs::path(args.outdir) / "report.json");
        out << eval_report_to_json(report) << '\n';
    }
    const std::string table = eval_report_table(report);
    {
        std::ofstream out(fs::path(args.outdir) / "report.txt");
        out << table;
    }
    std::fputs(table.c_str(), stdout);
    return 0;
}

// -------------------------------------------------------------- gradcheck
struct GradcheckArgs {
    int batches = 100;
    std::uint64_t seed = 20240101;
    double step = 1e-5;
    double tolerance = 1e-4;
    double lambda = 1.0;
    double lambda2 = 1.0;
    std::string l1 = "absolute";
    std::string outdir;
};

int cmd_gradcheck(GradcheckArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("batches", &args.batches);
    overrides.bind("seed", &args.seed);
    overrides.bind("step", &args.step);
    overrides.bind("tolerance", &args.tolerance);
    overrides.bind("lambda", &args.lambda);
    overrides.bind("lambda2", &args.lambda2);
    overrides.bind("l1", &args.l1);
    overrides.bind("outdir", &args.outdir);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    LossOptions gpn_options;
    gpn_options.lambda = args.lambda;
    if (args.l1 == "smooth") {
        gpn_options.l1 = L1Kind::smooth;
    } else if (args.l1 != "absolute") {
        raise(Errc::parse_error, "unknown l1 kind: " + args.l1);
    }
    LossOptions gr_options = gpn_options;
    gr_options.lambda = args.lambda2;
    const GradCheckReport report = run_gradient_checks(
        args.batches, args.seed, args.step, args.tolerance, gpn_options, gr_options);

    std::printf("gradcheck over %d batches (fd step %.1e, tolerance %.1e)\n",
                report.batches, report.fd_step, report.tolerance);
    std::printf("  max rel error L_gpn: %.6e\n", report.max_rel_err_gpn);
    std::printf("  max rel error L_gr:  %.6e\n", report.max_rel_err_gr);
    std::printf("  %s\n", report.pass ? "PASS" : "FAIL");

    if (!args.outdir.empty()) {
        record_config(args.outdir, "gradcheck",
                      {{"batches", args.batches}, {"seed", args.seed},
                       {"step", args.step}, {"tolerance", args.tolerance},
                       {"lambda", args.lambda}, {"lambda2", args.lambda2},
                       {"l1", args.l1}});
        json doc = {{"batches", report.batches},
                    {"fd_step", report.fd_step},
                    {"tolerance", report.tolerance},
                    {"max_rel_err_gpn", report.max_rel_err_gpn},
                    {"max_rel_err_gr", report.max_rel_err_gr},
                    {"pass", report.pass}};
        std::ofstream out(fs::path(args.outdir) / "gradcheck.json");
        out << doc.dump(2) << '\n';
    }
    return report.pass ? 0 : 1;
}

// -------------------------------------------------------------- visualize
struct VisualizeArgs {
    std::string input;
    std::string predictions;
    std::string outdir;
    std::string jaccard_mode = "rotated";
    int limit = 0;  // 0 = all
};

int cmd_visualize(VisualizeArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("input", &args.input);
    overrides.bind("predictions", &args.predictions);
    overrides.bind("outdir", &args.outdir);
    overrides.bind("jaccard_mode", &args.jaccard_mode);
    overrides.bind("limit", &args.limit);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    const std::vector<Sample> samples = read_dataset_jsonl(args.input);
    const auto predictions = read_predictions_json(args.predictions);
    EvaluateArgs metric;
    metric.jaccard_mode = args.jaccard_mode;
    const MetricOptions options = metric_options(metric);

    record_config(args.outdir, "visualize",
                  {{"input", args.input}, {"predictions", args.predictions},
                   {"outdir", args.outdir}, {"jaccard_mode", args.jaccard_mode},
                   {"limit", args.limit}});

    int written = 0;
    for (const Sample& s : samples) {
        if (args.limit > 0 && written >= args.limit) break;
        const auto it = predictions.find(s.id);
        if (it == predictions.end()) {
            raise(Errc::missing_prediction, "no prediction for: " + s.id);
        }
        std::vector<GraspPose5D> gts;
        for (const GraspQuad& q : s.grasps_pos) {
            gts.push_back(quad_to_pose(q, kLoaderRectTolerance));
        }
        const MatchReport match = is_correct(it->second, gts, options);
        const Image8 rgb = read_png(s.rgb_path);
        const Image8 overlay =
            overlay_grasps(rgb, s.grasps_pos, pose_to_quad(it->second), match.correct);
        write_png(fs::path(args.outdir) / (s.id + ".png"), overlay);
        ++written;
    }
    std::printf("wrote %d overlay images to %s\n", written, args.outdir.c_str());
    return 0;
}

// --------------------------------------------------------------- baseline
struct BaselineArgs {
    std::string input;
    std::string outdir;
    bool skip_missing = false;
};

int cmd_baseline(BaselineArgs& args, const CommonArgs& common) {
    ConfigOverride overrides;
    overrides.bind("input", &args.input);
    overrides.bind("outdir", &args.outdir);
    overrides.bind("skip_missing", &args.skip_missing);
    if (!common.config_file.empty()) overrides.apply(common.config_file);

    const std::vector<Sample> samples = read_dataset_jsonl(args.input);
    std::map<std::string, GraspPose5D> predictions;
    int degenerate = 0, skipped = 0;
    for (const Sample& s : samples) {
        if (s.mask_path.empty()) {
            if (args.skip_missing) {
                ++skipped;
                continue;
            }
            raise(Errc::empty_mask, "sample without mask: " + s.id);
        }
        const Mask mask = read_mask_png(s.mask_path);
        const BaselineResult result = pca_baseline(mask);
        predictions[s.id] = result.pose;
        if (result.degenerate) ++degenerate;
    }

    record_config(args.outdir, "baseline",
                  {{"input", args.input}, {"outdir", args.outdir},
                   {"skip_missing", args.skip_missing}});
    write_predictions_json(fs::path(args.outdir) / "predictions.json", predictions);
    std::printf("baseline predicted %zu poses (%d degenerate, %d skipped)\n",
                predictions.size(), degenerate, skipped);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graspbench: grasp-detection geometry, losses and evaluation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("graspbench ") + kVersion);

    CommonArgs common;

    ConvertArgs convert_args;
    CLI::App* convert = app.add_subcommand(
        "convert", "Parse a dataset directory into canonical JSONL");
    convert->add_option("--format", convert_args.format,
                        "cornell | jacquard | canonical")->required();
    convert->add_option("--input", convert_args.input,
                        "dataset directory (or JSONL for canonical); defaults to "
                        "$GRASPBENCH_DATA_ROOT/<format>");
    convert->add_option("--outdir", convert_args.outdir, "output directory")->required();
    add_config_flag(convert, common);

    SplitArgs split_args;
    CLI::App* split_cmd =
        app.add_subcommand("split", "Deterministic 4:1 train/test split");
    split_cmd->add_option("--input", split_args.input, "canonical JSONL")->required();
    split_cmd->add_option("--outdir", split_args.outdir, "output directory")->required();
    split_cmd->add_option("--mode", split_args.mode, "image_wise | object_wise");
    split_cmd->add_option("--seed", split_args.seed, "shuffle seed");
    split_cmd->add_option("--ratio", split_args.ratio, "train fraction (default 0.8)");
    add_config_flag(split_cmd, common);

    AugmentArgs augment_args;
    CLI::App* augment_cmd = app.add_subcommand(
        "augment", "Expand a training set by rotation/translation/brightness");
    augment_cmd->add_option("--input", augment_args.input, "canonical JSONL")->required();
    augment_cmd->add_option("--outdir", augment_args.outdir, "output directory")->required();
    augment_cmd->add_option("--spec", augment_args.spec_file, "augment spec JSON");
    augment_cmd->add_option("--rotations", augment_args.rotations,
                            "rotation angles in degrees");
    augment_cmd->add_option("--translations", augment_args.translations,
                            "translations as dx:dy pairs");
    augment_cmd->add_option("--brightness", augment_args.brightness,
                            "brightness multipliers");
    augment_cmd->add_option("--seed", augment_args.seed, "selection seed");
    augment_cmd->add_option("--multiplier", augment_args.multiplier,
                            "override the spec's target multiplier");
    augment_cmd->add_flag("--no-images", augment_args.no_images,
                          "annotation-only expansion, skip image warping");
    augment_cmd->add_option("--workers", augment_args.workers, "worker threads");
    add_config_flag(augment_cmd, common);

    PipelineArgs maskify_args;
    CLI::App* maskify_cmd = app.add_subcommand(
        "maskify", "Composite masks: background pixels become pure white");
    maskify_cmd->add_option("--input", maskify_args.input, "canonical JSONL")->required();
    maskify_cmd->add_option("--outdir", maskify_args.outdir, "output directory")->required();
    maskify_cmd->add_option("--workers", maskify_args.workers, "worker threads");
    maskify_cmd->add_flag("--skip-missing", maskify_args.skip_missing,
                          "pass through samples without masks");
    add_config_flag(maskify_cmd, common);

    PipelineArgs rgd_args;
    CLI::App* rgd_cmd = app.add_subcommand(
        "rgd", "Replace the blue channel with normalized depth");
    rgd_cmd->add_option("--input", rgd_args.input, "canonical JSONL")->required();
    rgd_cmd->add_option("--outdir", rgd_args.outdir, "output directory")->required();
    rgd_cmd->add_option("--dmin", rgd_args.dmin, "depth range minimum");
    rgd_cmd->add_option("--dmax", rgd_args.dmax, "depth range maximum");
    rgd_cmd->add_option("--workers", rgd_args.workers, "worker threads");
    rgd_cmd->add_flag("--skip-missing", rgd_args.skip_missing,
                      "pass through samples without depth");
    add_config_flag(rgd_cmd, common);

    EvaluateArgs evaluate_args;
    CLI::App* evaluate_cmd = app.add_subcommand(
        "evaluate", "Rectangle-metric accuracy of predictions against a test set");
    evaluate_cmd->add_option("--input", evaluate_args.input, "test set JSONL")->required();
    evaluate_cmd->add_option("--predictions", evaluate_args.predictions,
                             "predictions JSON")->required();
    evaluate_cmd->add_option("--outdir", evaluate_args.outdir, "output directory")->required();
    evaluate_cmd->add_option("--mode", evaluate_args.mode,
                             "split mode recorded in the report");
    evaluate_cmd->add_option("--jaccard-mode", evaluate_args.jaccard_mode,
                             "rotated | aabb");
    evaluate_cmd->add_option("--angle-max", evaluate_args.angle_max,
                             "angle threshold in degrees (inclusive)");
    evaluate_cmd->add_flag("--angle-strict", evaluate_args.angle_strict,
                           "compare the angle threshold strictly instead");
    evaluate_cmd->add_option("--jaccard-min", evaluate_args.jaccard_min,
                             "jaccard threshold (strict)");
    evaluate_cmd->add_option("--top-k", evaluate_args.top_k,
                             "score the best of the first k predictions per sample");
    add_config_flag(evaluate_cmd, common);

    GradcheckArgs gradcheck_args;
    CLI::App* gradcheck_cmd = app.add_subcommand(
        "gradcheck", "Verify analytic loss gradients against finite differences");
    gradcheck_cmd->add_option("--batches", gradcheck_args.batches, "seeded batches");
    gradcheck_cmd->add_option("--seed", gradcheck_args.seed, "base seed");
    gradcheck_cmd->add_option("--step", gradcheck_args.step, "central difference step");
    gradcheck_cmd->add_option("--tolerance", gradcheck_args.tolerance,
                              "max relative error");
    gradcheck_cmd->add_option("--lambda", gradcheck_args.lambda,
                              "regression weight in L_gpn");
    gradcheck_cmd->add_option("--lambda2", gradcheck_args.lambda2,
                              "regression weight in L_gr");
    gradcheck_cmd->add_option("--l1", gradcheck_args.l1, "absolute | smooth");
    gradcheck_cmd->add_option("--outdir", gradcheck_args.outdir,
                              "optional output directory for gradcheck.json");
    add_config_flag(gradcheck_cmd, common);

    VisualizeArgs visualize_args;
    CLI::App* visualize_cmd = app.add_subcommand(
        "visualize", "Write static grasp overlays (gt thin, prediction thick)");
    visualize_cmd->add_option("--input", visualize_args.input, "canonical JSONL")->required();
    visualize_cmd->add_option("--predictions", visualize_args.predictions,
                              "predictions JSON")->required();
    visualize_cmd->add_option("--outdir", visualize_args.outdir, "output directory")->required();
    visualize_cmd->add_option("--jaccard-mode", visualize_args.jaccard_mode,
                              "rotated | aabb");
    visualize_cmd->add_option("--limit", visualize_args.limit, "max images (0 = all)");
    add_config_flag(visualize_cmd, common);

    BaselineArgs baseline_args;
    CLI::App* baseline_cmd = app.add_subcommand(
        "baseline", "PCA-on-mask baseline predictor over a dataset");
    baseline_cmd->add_option("--input", baseline_args.input, "canonical JSONL")->required();
    baseline_cmd->add_option("--outdir", baseline_args.outdir, "output directory")->required();
    baseline_cmd->add_flag("--skip-missing", baseline_args.skip_missing,
                           "skip samples without masks");
    add_config_flag(baseline_cmd, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (convert->parsed()) return cmd_convert(convert_args, common);
        if (split_cmd->parsed()) return cmd_split(split_args, common);
        if (augment_cmd->parsed()) return cmd_augment(augment_args, common);
        if (maskify_cmd->parsed()) return cmd_maskify(maskify_args, common);
        if (rgd_cmd->parsed()) return cmd_rgd(rgd_args, common);
        if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate_args, common);
        if (gradcheck_cmd->parsed()) return cmd_gradcheck(gradcheck_args, common);
        if (visualize_cmd->parsed()) return cmd_visualize(visualize_args, common);
        if (baseline_cmd->parsed()) return cmd_baseline(baseline_args, common);
    } catch (const Error& e) {
        const json error = {{"error", {{"code", errc_name(e.code())},
                                       {"message", e.what()}}}};
        std::cerr << error.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        const json error = {{"error", {{"code", "internal"}, {"message", e.what()}}}};
        std::cerr << error.dump() << '\n';
        return 1;
    }
    return 1;
}

#include "graspbench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "graspbench/image.hpp"
#include "graspbench/rng.hpp"

namespace graspbench {

namespace fs = std::filesystem;

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::original: return "original";
        case Provenance::mask_composited: return "mask_composited";
        case Provenance::rgd: return "rgd";
    }
    return "original";
}

Provenance provenance_from_name(const std::string& name) {
    if (name == "mask_composited") return Provenance::mask_composited;
    if (name == "rgd") return Provenance::rgd;
    if (name == "original") return Provenance::original;
    raise(Errc::parse_error, "unknown provenance: " + name);
}

const char* split_mode_name(SplitMode mode) {
    return mode == SplitMode::image_wise ? "image_wise" : "object_wise";
}

SplitMode split_mode_from_name(const std::string& name) {
    if (name == "image_wise" || name == "image") return SplitMode::image_wise;
    if (name == "object_wise" || name == "object") return SplitMode::object_wise;
    raise(Errc::parse_error, "unknown split mode: " + name);
}

bool grasp_in_bounds(const GraspQuad& quad, int width, int height) {
    const double x_lo = -0.25 * width, x_hi = 1.25 * width;
    const double y_lo = -0.25 * height, y_hi = 1.25 * height;
    for (const Vec2& v : quad.v) {
        if (!(v.x >= x_lo && v.x <= x_hi && v.y >= y_lo && v.y <= y_hi)) return false;
    }
    return true;
}

namespace {

std::string trimmed(const std::string& line) {
    const auto begin = line.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = line.find_last_not_of(" \t\r\n");
    return line.substr(begin, end - begin + 1);
}

std::vector<std::string> read_nonempty_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::io_error, "cannot open " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trimmed(line);
        if (!t.empty()) lines.push_back(std::move(t));
    }
    return lines;
}

// Parses "x y"; NaN tokens are legal (Cornell files contain them).
Vec2 parse_point_line(const std::string& line, const fs::path& file, int line_no) {
    const char* s = line.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s) {
        raise(Errc::parse_error,
              file.string() + ":" + std::to_string(line_no) + ": malformed point line");
    }
    const char* s2 = end;
    const double y = std::strtod(s2, &end);
    if (end == s2) {
        raise(Errc::parse_error,
              file.string() + ":" + std::to_string(line_no) + ": malformed point line");
    }
    while (*end == ' ' || *end == '\t') ++end;
    if (*end != '\0') {
        raise(Errc::parse_error, file.string() + ":" + std::to_string(line_no) +
                                     ": trailing junk after point");
    }
    return {x, y};
}

struct RectParse {
    std::vector<GraspQuad> quads;
    int dropped = 0;
};

RectParse parse_rect_file(const fs::path& path, int width, int height,
                          LoadReport* report) {
    const std::vector<std::string> lines = read_nonempty_lines(path);
    if (lines.size() % 4 != 0) {
        raise(Errc::parse_error, path.string() + ": line count " +
                                     std::to_string(lines.size()) +
                                     " not divisible by 4");
    }
    RectParse out;
    for (std::size_t r = 0; r < lines.size() / 4; ++r) {
        GraspQuad quad;
        bool finite = true;
        for (int k = 0; k < 4; ++k) {
            const int line_no = static_cast<int>(r * 4 + k);
            quad.v[k] = parse_point_line(lines[line_no], path, line_no + 1);
            finite = finite && std::isfinite(quad.v[k].x) && std::isfinite(quad.v[k].y);
        }
        if (!finite) {
            ++out.dropped;
            continue;
        }
        if (!grasp_in_bounds(quad, width, height)) {
            ++out.dropped;
            if (report) {
                report->warnings.push_back(path.string() + ": rectangle " +
                                           std::to_string(r) + " outside frame margin");
            }
            continue;
        }
        if (!is_rectangle(quad, kLoaderRectTolerance)) {
            ++out.dropped;
            if (report) {
                report->warnings.push_back(path.string() + ": rectangle " +
                                           std::to_string(r) + " is not rectangular");
            }
            continue;
        }
        out.quads.push_back(quad);
    }
    return out;
}

// Optional id -> category map ("z.txt"): first token the image id (pcdNNNN
// or NNNN), remainder the category label.
std::map<std::string, std::string> load_category_map(const fs::path& dir) {
    std::map<std::string, std::string> categories;
    const fs::path file = dir / "z.txt";
    if (!fs::exists(file)) return categories;
    for (const std::string& line : read_nonempty_lines(file)) {
        std::istringstream ss(line);
        std::string id, rest, word;
        ss >> id;
        while (ss >> word) {
            if (!rest.empty()) rest += ' ';
            rest += word;
        }
        if (id.empty() || rest.empty()) continue;
        if (id.rfind("pcd", 0) != 0) id = "pcd" + id;
        categories[id] = rest;
    }
    return categories;
}

void finish_report(LoadReport* report, const std::vector<Sample>& samples) {
    if (!report) return;
    report->n_samples = static_cast<int>(samples.size());
    for (const Sample& s : samples) {
        report->n_grasps += static_cast<int>(s.grasps_pos.size());
        if (s.grasps_pos.empty()) ++report->n_empty_samples;
    }
}

}  // namespace

std::vector<Sample> load_cornell(const fs::path& dir, LoadReport* report) {
    if (!fs::is_directory(dir)) {
        raise(Errc::io_error, "not a directory: " + dir.string());
    }
    std::vector<fs::path> pos_files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("pcd", 0) == 0 && name.size() > 11 &&
            name.substr(name.size() - 8) == "cpos.txt") {
            pos_files.push_back(entry.path());
        }
    }
    if (pos_files.empty()) {
        raise(Errc::empty_dataset, "no pcd*cpos.txt files under " + dir.string());
    }
    std::sort(pos_files.begin(), pos_files.end());

    const auto categories = load_category_map(dir);
    std::vector<Sample> samples;
    samples.reserve(pos_files.size());
    for (const fs::path& pos_file : pos_files) {
        const std::string name = pos_file.filename().string();
        const std::string base = name.substr(0, name.size() - 8);  // pcdNNNN
        const fs::path scene_dir = pos_file.parent_path();
        const fs::path image = scene_dir / (base + "r.png");
        if (!fs::exists(image)) {
            raise(Errc::missing_image, "missing image " + image.string());
        }

        Sample sample;
        sample.id = base;
        sample.rgb_path = image.string();
        const auto [w, h] = read_png_dims(image);
        sample.width = w;
        sample.height = h;

        const RectParse pos = parse_rect_file(pos_file, w, h, report);
        sample.grasps_pos = pos.quads;
        if (report) report->n_dropped_rects += pos.dropped;

        const fs::path neg_file = scene_dir / (base + "cneg.txt");
        if (fs::exists(neg_file)) {
            const RectParse neg = parse_rect_file(neg_file, w, h, report);
            sample.grasps_neg = neg.quads;
            if (report) report->n_dropped_rects += neg.dropped;
        }
        const fs::path mask = scene_dir / (base + "mask.png");
        if (fs::exists(mask)) sample.mask_path = mask.string();
        for (const char* ext : {"d.png", "d.f32"}) {
            const fs::path depth = scene_dir / (base + ext);
            if (fs::exists(depth)) {
                sample.depth_path = depth.string();
                break;
            }
        }
        if (const auto it = categories.find(base); it != categories.end()) {
            sample.category = it->second;
        }
        if (sample.grasps_pos.empty()) sample.flags.push_back("no_grasps");
        samples.push_back(std::move(sample));
    }
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.id < b.id; });
    finish_report(report, samples);
    return samples;
}

std::vector<Sample> load_jacquard(const fs::path& dir, LoadReport* report) {
    if (!fs::is_directory(dir)) {
        raise(Errc::io_error, "not a directory: " + dir.string());
    }
    std::vector<fs::path> grasp_files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() > 11 && name.substr(name.size() - 11) == "_grasps.txt") {
            grasp_files.push_back(entry.path());
        }
    }
    if (grasp_files.empty()) {
        raise(Errc::empty_dataset, "no *_grasps.txt files under " + dir.string());
    }
    std::sort(grasp_files.begin(), grasp_files.end());

    std::vector<Sample> samples;
    samples.reserve(grasp_files.size());
    for (const fs::path& grasp_file : grasp_files) {
        const std::string name = grasp_file.filename().string();
        const std::string base = name.substr(0, name.size() - 11);
        const fs::path scene_dir = grasp_file.parent_path();
        const fs::path image = scene_dir / (base + "_RGB.png");
        if (!fs::exists(image)) {
            raise(Errc::missing_image, "missing image " + image.string());
        }

        Sample sample;
        sample.id = base;
        sample.rgb_path = image.string();
        const auto [w, h] = read_png_dims(image);
        sample.width = w;
        sample.height = h;
        if (!fs::equivalent(scene_dir, dir)) {
            sample.category = scene_dir.filename().string();
        } else if (const auto sep = base.find('_'); sep != std::string::npos) {
            sample.category = base.substr(sep + 1);
        }

        for (const std::string& line : read_nonempty_lines(grasp_file)) {
            // x;y;theta;opening;jaw_size
            double field[5];
            const char* s = line.c_str();
            char* end = nullptr;
            bool ok = true;
            for (int k = 0; k < 5; ++k) {
                field[k] = std::strtod(s, &end);
                if (end == s) {
                    ok = false;
                    break;
                }
                s = end;
                if (k < 4) {
                    if (*s != ';') {
                        ok = false;
                        break;
                    }
                    ++s;
                }
            }
            if (!ok) {
                raise(Errc::parse_error,
                      grasp_file.string() + ": malformed grasp line '" + line + "'");
            }
            GraspPose5D pose;
            pose.x = field[0];
            pose.y = field[1];
            pose.theta = normalize_angle_deg(field[2]);
            pose.w = field[3];
            pose.h = field[4];
            if (!std::isfinite(pose.x) || !std::isfinite(pose.y) ||
                !(pose.w > 0.0) || !(pose.h > 0.0)) {
                if (report) ++report->n_dropped_rects;
                continue;
            }
            const GraspQuad quad = pose_to_quad(pose);
            if (!grasp_in_bounds(quad, w, h)) {
                if (report) ++report->n_dropped_rects;
                continue;
            }
            sample.grasps_pos.push_back(quad);
        }

        const fs::path mask = scene_dir / (base + "_mask.png");
        if (fs::exists(mask)) sample.mask_path = mask.string();
        for (const char* ext : {"_depth.png", "_depth.f32"}) {
            const fs::path depth = scene_dir / (base + ext);
            if (fs::exists(depth)) {
                sample.depth_path = depth.string();
                break;
            }
        }
        if (sample.grasps_pos.empty()) sample.flags.push_back("no_grasps");
        samples.push_back(std::move(sample));
    }
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.id < b.id; });
    finish_report(report, samples);
    return samples;
}

SplitResult split(const std::vector<Sample>& samples, const SplitSpec& spec) {
    if (samples.empty()) {
        raise(Errc::empty_dataset, "cannot split an empty dataset");
    }
    if (!(spec.ratio_train > 0.0 && spec.ratio_train < 1.0)) {
        raise(Errc::bad_range, "ratio_train must lie in (0, 1)");
    }

    SplitResult result;
    if (spec.mode == SplitMode::image_wise) {
        std::vector<std::size_t> order(samples.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        SplitMix64 rng(spec.seed);
        shuffle(order, rng);
        const auto n_train = static_cast<std::size_t>(
            std::llround(spec.ratio_train * static_cast<double>(samples.size())));
        for (std::size_t i = 0; i < order.size(); ++i) {
            (i < n_train ? result.train : result.test).push_back(samples[order[i]]);
        }
        return result;
    }

    // object_wise
    std::map<std::string, std::vector<std::size_t>> by_category;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].category.empty()) {
            raise(Errc::missing_categories,
                  "sample " + samples[i].id + " has no object category");
        }
        by_category[samples[i].category].push_back(i);
    }
    std::vector<std::string> categories;
    categories.reserve(by_category.size());
    for (const auto& [category, members] : by_category) categories.push_back(category);
    SplitMix64 rng(spec.seed);
    shuffle(categories, rng);
    // Greedy packing by descending size; the shuffle breaks ties among
    // equal-sized categories.
    std::stable_sort(categories.begin(), categories.end(),
                     [&](const std::string& a, const std::string& b) {
                         return by_category[a].size() > by_category[b].size();
                     });
    const double target = spec.ratio_train * static_cast<double>(samples.size());
    double in_train = 0.0;
    std::vector<bool> sample_in_train(samples.size(), false);
    for (const std::string& category : categories) {
        const auto& members = by_category[category];
        const double size = static_cast<double>(members.size());
        if (std::fabs(in_train + size - target) <= std::fabs(in_train - target)) {
            in_train += size;
            for (std::size_t i : members) sample_in_train[i] = true;
        }
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (sample_in_train[i] ? result.train : result.test).push_back(samples[i]);
    }
    return result;
}

}  // namespace graspbench

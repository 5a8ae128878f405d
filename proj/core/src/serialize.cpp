#include "graspbench/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace graspbench {

namespace {

using nlohmann::json;

std::string escaped(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void append_pose_array(std::string& out, const GraspPose5D& pose) {
    out += '[';
    out += fixed6(pose.x);
    out += ',';
    out += fixed6(pose.y);
    out += ',';
    out += fixed6(pose.theta);
    out += ',';
    out += fixed6(pose.h);
    out += ',';
    out += fixed6(pose.w);
    out += ']';
}

void append_grasp_list(std::string& out, const std::vector<GraspQuad>& quads) {
    out += '[';
    for (std::size_t i = 0; i < quads.size(); ++i) {
        if (i) out += ',';
        append_pose_array(out, quad_to_pose(quads[i], kLoaderRectTolerance));
    }
    out += ']';
}

GraspPose5D pose_from_array(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.size() != 5) {
        raise(Errc::parse_error, where + ": pose must be a 5-element array");
    }
    GraspPose5D pose;
    pose.x = arr[0].get<double>();
    pose.y = arr[1].get<double>();
    pose.theta = arr[2].get<double>();
    pose.h = arr[3].get<double>();
    pose.w = arr[4].get<double>();
    validate(pose);
    return pose;
}

}  // namespace

std::string sample_to_json(const Sample& sample) {
    std::string out = "{\"id\":\"" + escaped(sample.id) + "\"";
    out += ",\"rgb\":\"" + escaped(sample.rgb_path) + "\"";
    out += ",\"depth\":";
    out += sample.depth_path.empty() ? "null" : "\"" + escaped(sample.depth_path) + "\"";
    out += ",\"mask\":";
    out += sample.mask_path.empty() ? "null" : "\"" + escaped(sample.mask_path) + "\"";
    out += ",\"category\":\"" + escaped(sample.category) + "\"";
    out += ",\"provenance\":\"";
    out += provenance_name(sample.provenance);
    out += "\",\"width\":" + std::to_string(sample.width);
    out += ",\"height\":" + std::to_string(sample.height);
    out += ",\"grasps_pos\":";
    append_grasp_list(out, sample.grasps_pos);
    out += ",\"grasps_neg\":";
    append_grasp_list(out, sample.grasps_neg);
    out += ",\"flags\":[";
    for (std::size_t i = 0; i < sample.flags.size(); ++i) {
        if (i) out += ',';
        out += "\"" + escaped(sample.flags[i]) + "\"";
    }
    out += "]}";
    return out;
}

Sample sample_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad sample JSON: ") + e.what());
    }
    Sample sample;
    try {
        sample.id = doc.at("id").get<std::string>();
        sample.rgb_path = doc.at("rgb").is_null() ? "" : doc.at("rgb").get<std::string>();
        sample.depth_path =
            doc.at("depth").is_null() ? "" : doc.at("depth").get<std::string>();
        sample.mask_path =
            doc.at("mask").is_null() ? "" : doc.at("mask").get<std::string>();
        sample.category = doc.at("category").get<std::string>();
        sample.provenance = provenance_from_name(doc.at("provenance").get<std::string>());
        sample.width = doc.at("width").get<int>();
        sample.height = doc.at("height").get<int>();
        for (const json& arr : doc.at("grasps_pos")) {
            sample.grasps_pos.push_back(
                pose_to_quad(pose_from_array(arr, sample.id + ".grasps_pos")));
        }
        for (const json& arr : doc.at("grasps_neg")) {
            sample.grasps_neg.push_back(
                pose_to_quad(pose_from_array(arr, sample.id + ".grasps_neg")));
        }
        if (doc.contains("flags")) {
            for (const json& f : doc.at("flags")) {
                sample.flags.push_back(f.get<std::string>());
            }
        }
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad sample JSON: ") + e.what());
    }
    return sample;
}

void write_dataset_jsonl(const std::filesystem::path& path,
                         const std::vector<Sample>& samples) {
    std::ofstream out(path);
    if (!out) {
        raise(Errc::io_error, "cannot write " + path.string());
    }
    for (const Sample& sample : samples) {
        out << sample_to_json(sample) << '\n';
    }
    if (!out) {
        raise(Errc::io_error, "write failed: " + path.string());
    }
}

std::vector<Sample> read_dataset_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::io_error, "cannot open " + path.string());
    }
    std::vector<Sample> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        samples.push_back(sample_from_json(line));
    }
    return samples;
}

std::string predictions_to_json(const std::map<std::string, GraspPose5D>& predictions) {
    std::string out = "{";
    bool first = true;
    for (const auto& [id, pose] : predictions) {
        if (!first) out += ',';
        first = false;
        out += "\"" + escaped(id) + "\":";
        append_pose_array(out, pose);
    }
    out += "}";
    return out;
}

std::map<std::string, GraspPose5D> predictions_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad predictions JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        raise(Errc::parse_error, "predictions must be a JSON object keyed by sample id");
    }
    std::map<std::string, GraspPose5D> predictions;
    for (const auto& [id, arr] : doc.items()) {
        predictions[id] = pose_from_array(arr, id);
    }
    return predictions;
}

void write_predictions_json(const std::filesystem::path& path,
                            const std::map<std::string, GraspPose5D>& predictions) {
    std::ofstream out(path);
    if (!out) {
        raise(Errc::io_error, "cannot write " + path.string());
    }
    out << predictions_to_json(predictions) << '\n';
    if (!out) {
        raise(Errc::io_error, "write failed: " + path.string());
    }
}

std::map<std::string, GraspPose5D> read_predictions_json(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::io_error, "cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return predictions_from_json(buffer.str());
}

std::map<std::string, std::vector<GraspPose5D>> multi_predictions_from_json(
    const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad predictions JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        raise(Errc::parse_error, "predictions must be a JSON object keyed by sample id");
    }
    std::map<std::string, std::vector<GraspPose5D>> predictions;
    for (const auto& [id, value] : doc.items()) {
        if (!value.is_array() || value.empty()) {
            raise(Errc::parse_error, id + ": prediction must be a non-empty array");
        }
        if (value[0].is_number()) {  // single pose form
            predictions[id] = {pose_from_array(value, id)};
        } else {
            for (const json& arr : value) {
                predictions[id].push_back(pose_from_array(arr, id));
            }
        }
    }
    return predictions;
}

std::map<std::string, std::vector<GraspPose5D>> read_multi_predictions_json(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        raise(Errc::io_error, "cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return multi_predictions_from_json(buffer.str());
}

}  // namespace graspbench

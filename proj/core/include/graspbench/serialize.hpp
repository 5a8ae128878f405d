#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "graspbench/dataset.hpp"

namespace graspbench {

// Canonical interchange format: one JSON document per sample, one document
// per line in a .jsonl file. Grasps are stored as pose arrays
// [x, y, theta, h, w] rendered with exactly 6 fractional digits, which makes
// serialize -> load -> serialize byte-identical. Field-by-field schema in
// docs/formats.md.

std::string sample_to_json(const Sample& sample);
Sample sample_from_json(const std::string& json_text);

void write_dataset_jsonl(const std::filesystem::path& path,
                         const std::vector<Sample>& samples);
std::vector<Sample> read_dataset_jsonl(const std::filesystem::path& path);

// Predictions: a JSON object mapping sample id to a pose array, or (for
// top-k scoring) to an array of pose arrays.
std::string predictions_to_json(const std::map<std::string, GraspPose5D>& predictions);
std::map<std::string, GraspPose5D> predictions_from_json(const std::string& json_text);
void write_predictions_json(const std::filesystem::path& path,
                            const std::map<std::string, GraspPose5D>& predictions);
std::map<std::string, GraspPose5D> read_predictions_json(const std::filesystem::path& path);

std::map<std::string, std::vector<GraspPose5D>> multi_predictions_from_json(
    const std::string& json_text);
std::map<std::string, std::vector<GraspPose5D>> read_multi_predictions_json(
    const std::filesystem::path& path);

}  // namespace graspbench

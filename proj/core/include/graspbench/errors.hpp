#pragma once

#include <stdexcept>
#include <string>

namespace graspbench {

// Failure modes of the library contracts. The CLI maps these onto a
// machine-readable error JSON; tests match on them directly.
enum class Errc {
    non_rectangle,
    degenerate_box,
    degenerate_anchor,
    out_of_range,
    background_has_no_angle,
    not_a_distribution,
    parse_error,
    missing_image,
    missing_prediction,
    missing_categories,
    empty_dataset,
    empty_batch,
    empty_mask,
    shape_mismatch,
    bad_range,
    insufficient_spec,
    no_ground_truth,
    non_finite,
    io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace graspbench

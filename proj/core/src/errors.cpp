#include "graspbench/errors.hpp"

namespace graspbench {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::non_rectangle: return "non_rectangle";
        case Errc::degenerate_box: return "degenerate_box";
        case Errc::degenerate_anchor: return "degenerate_anchor";
        case Errc::out_of_range: return "out_of_range";
        case Errc::background_has_no_angle: return "background_has_no_angle";
        case Errc::not_a_distribution: return "not_a_distribution";
        case Errc::parse_error: return "parse_error";
        case Errc::missing_image: return "missing_image";
        case Errc::missing_prediction: return "missing_prediction";
        case Errc::missing_categories: return "missing_categories";
        case Errc::empty_dataset: return "empty_dataset";
        case Errc::empty_batch: return "empty_batch";
        case Errc::empty_mask: return "empty_mask";
        case Errc::shape_mismatch: return "shape_mismatch";
        case Errc::bad_range: return "bad_range";
        case Errc::insufficient_spec: return "insufficient_spec";
        case Errc::no_ground_truth: return "no_ground_truth";
        case Errc::non_finite: return "non_finite";
        case Errc::io_error: return "io_error";
    }
    return "unknown";
}

}  // namespace graspbench

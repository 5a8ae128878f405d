#pragma once

#include <span>

#include "graspbench/errors.hpp"

namespace graspbench {

// Grasp angles are quantized into R = 19 uniform bins over [-90, 90);
// class 0 is the background class, so C = R + 1 = 20 classes total.
inline constexpr int kAngleBins = 19;
inline constexpr int kNumClasses = kAngleBins + 1;
inline constexpr int kBackgroundClass = 0;
inline constexpr double kBinWidthDeg = 180.0 / kAngleBins;

// Maps theta in [-90, 90) to a class in [1, 19]: 1 + floor((theta+90)/W),
// clamped so float edge cases at the top bin stay in range.
// Throws out_of_range for theta outside [-90, 90).
int angle_to_class(double theta_deg);

// Bin-center representative of class c in [1, 19].
// Throws background_has_no_angle for c = 0, out_of_range otherwise.
double class_to_angle(int cls);

struct Credibility {
    bool credible = false;  // some angle class strictly outscores background
    int best_class = 0;     // argmax over classes 1..19 (lowest index on ties)
    double best_prob = 0.0;
};

// Credibility rule: a grasp suggestion counts only when the best angle
// class strictly exceeds the background probability; ties resolve to
// "not credible". probs must be a distribution over all 20 classes
// (each >= 0, summing to 1 within 1e-6), else not_a_distribution.
Credibility is_credible(std::span<const double> class_probs);

}  // namespace graspbench

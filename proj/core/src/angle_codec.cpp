#include "graspbench/angle_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace graspbench {

int angle_to_class(double theta_deg) {
    if (!(theta_deg >= -90.0 && theta_deg < 90.0)) {
        raise(Errc::out_of_range,
              "angle " + std::to_string(theta_deg) + " outside [-90, 90)");
    }
    const int cls = 1 + static_cast<int>(std::floor((theta_deg + 90.0) / kBinWidthDeg));
    return std::clamp(cls, 1, kAngleBins);
}

double class_to_angle(int cls) {
    if (cls == kBackgroundClass) {
        raise(Errc::background_has_no_angle, "class 0 is background");
    }
    if (cls < 1 || cls > kAngleBins) {
        raise(Errc::out_of_range, "angle class " + std::to_string(cls) +
                                      " outside [1, " + std::to_string(kAngleBins) + "]");
    }
    return -90.0 + (static_cast<double>(cls - 1) + 0.5) * kBinWidthDeg;
}

Credibility is_credible(std::span<const double> class_probs) {
    if (class_probs.size() != static_cast<std::size_t>(kNumClasses)) {
        raise(Errc::not_a_distribution,
              "expected " + std::to_string(kNumClasses) + " class probabilities, got " +
                  std::to_string(class_probs.size()));
    }
    double sum = 0.0;
    for (double p : class_probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            raise(Errc::not_a_distribution, "probabilities must be finite and >= 0");
        }
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-6) {
        raise(Errc::not_a_distribution,
              "probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
    Credibility result;
    result.best_class = 1;
    result.best_prob = class_probs[1];
    for (int c = 2; c < kNumClasses; ++c) {
        if (class_probs[c] > result.best_prob) {
            result.best_prob = class_probs[c];
            result.best_class = c;
        }
    }
    result.credible = result.best_prob > class_probs[kBackgroundClass];
    return result;
}

}  // namespace graspbench

#pragma once

#include <array>
#include <string>
#include <vector>

#include "graspbench/angle_codec.hpp"
#include "graspbench/errors.hpp"
#include "graspbench/proposals.hpp"  // kIgnore

namespace graspbench {

// Loss kernels for the grasp proposal stage and the grasp configuration
// stage, plus their sum. Both losses are plain sums over the batch (no
// normalization) unless normalize_cls is set, and both come with analytic
// gradients that the finite-difference harness in gradcheck.hpp verifies.

enum class L1Kind {
    absolute,  // elementwise |d|, subgradient 0 at the kink
    smooth,    // 0.5 d^2 below 1, |d| - 0.5 above
};

struct LossOptions {
    double lambda = 1.0;   // regression weight (lambda for gpn, lambda2 for gr)
    L1Kind l1 = L1Kind::absolute;
    bool normalize_cls = false;  // divide the classification sum by its count
};

// One grasp proposal: graspable/not-graspable logits, box deltas, and the
// matched targets. target = 1 (graspable), 0 (not), kIgnore (excluded).
struct Proposal {
    std::array<double, 2> logits{};
    std::array<double, 4> deltas{};
    int target = 0;
    std::array<double, 4> target_deltas{};
};

using ProposalBatch = std::vector<Proposal>;

struct GpnGradients {
    std::vector<std::array<double, 2>> dlogits;
    std::vector<std::array<double, 4>> ddeltas;
};

struct GpnLoss {
    double value = 0.0;
    double cls = 0.0;  // cross-entropy part
    double reg = 0.0;  // weighted L1 part (only proposals with target = 1)
    GpnGradients grad;
};

// Sum of classification cross-entropy over non-ignored proposals plus
// lambda * target-masked L1 over the deltas.
GpnLoss loss_gpn(const ProposalBatch& batch, const LossOptions& options = {});

// One ROI in the grasp configuration stage: logits over the 20 angle
// classes and a 4-vector anchor offset per class. Regression is active only
// for the target's class, and never for background (class 0).
struct RoiConfig {
    std::array<double, kNumClasses> angle_logits{};
    std::array<std::array<double, 4>, kNumClasses> offsets{};
    int target_class = 0;
    std::array<double, 4> target_offsets{};
};

using GraspConfigBatch = std::vector<RoiConfig>;

struct GrGradients {
    std::vector<std::array<double, kNumClasses>> dlogits;
    std::vector<std::array<std::array<double, 4>, kNumClasses>> doffsets;
};

struct GrLoss {
    double value = 0.0;
    double cls = 0.0;
    double reg = 0.0;
    GrGradients grad;
};

GrLoss loss_gr(const GraspConfigBatch& batch, const LossOptions& options = {});

// Exact sum of the two stage losses; throws non_finite on bad inputs.
double loss_total(double gpn_value, double gr_value);

// JSON fixture round-trip for test data exchange.
std::string proposal_batch_to_json(const ProposalBatch& batch);
ProposalBatch proposal_batch_from_json(const std::string& json_text);
std::string config_batch_to_json(const GraspConfigBatch& batch);
GraspConfigBatch config_batch_from_json(const std::string& json_text);

// Toy head: linear maps from feature rows to every prediction the two
// losses consume, trained by full-batch gradient descent on their sum.
// Stands in for the network heads so the loss kernels can be exercised
// end to end at desk scale.
struct ToyBatch {
    std::vector<std::vector<double>> features;            // N x D
    std::vector<int> proposal_target;                     // {0, 1, ignore}
    std::vector<std::array<double, 4>> proposal_deltas;   // targets where 1
    std::vector<int> config_target;                       // [0, 20)
    std::vector<std::array<double, 4>> config_offsets;    // targets where != 0
};

struct ToyStepLoss {
    double total = 0.0;
    double cls = 0.0;  // both classification terms
    double reg = 0.0;
};

struct FitResult {
    std::vector<ToyStepLoss> trajectory;  // steps + 1 entries unless divergence stops it
    bool diverged = false;
    bool monotone = false;  // non-increasing total within 1e-12 slack
    double learning_rate = 0.0;
};

FitResult fit_toy_head(const ToyBatch& batch, int steps, double learning_rate,
                       const LossOptions& gpn_options = {},
                       const LossOptions& gr_options = {});

// Halves the learning rate (up to max_halvings) until the trajectory is
// non-increasing; returns the first monotone run.
FitResult fit_toy_head_auto(const ToyBatch& batch, int steps, double initial_rate = 1.0,
                            int max_halvings = 60,
                            const LossOptions& gpn_options = {},
                            const LossOptions& gr_options = {});

}  // namespace graspbench

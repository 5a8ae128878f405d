#pragma once

#include <cstdint>

#include "graspbench/losses.hpp"

namespace graspbench {

// Seeded random batches for gradient verification. Delta gaps are kept away
// from the L1 kink (|pred - target| >= 1e-3 per component) so central
// differences stay meaningful.
ProposalBatch random_proposal_batch(std::uint64_t seed, int size = 16);
GraspConfigBatch random_config_batch(std::uint64_t seed, int size = 8);

struct GradCheckReport {
    int batches = 0;
    double fd_step = 0.0;
    double tolerance = 0.0;
    double max_rel_err_gpn = 0.0;
    double max_rel_err_gr = 0.0;
    bool pass = false;
};

// Central finite differences over every logit/delta coordinate, comparing
// against the analytic gradients. The differencing side touches only loss
// values, never the gradient code it is checking.
double max_rel_err_gpn(const ProposalBatch& batch, double fd_step,
                       const LossOptions& options = {});
double max_rel_err_gr(const GraspConfigBatch& batch, double fd_step,
                      const LossOptions& options = {});

GradCheckReport run_gradient_checks(int n_batches, std::uint64_t seed,
                                    double fd_step = 1e-5, double tolerance = 1e-4,
                                    const LossOptions& gpn_options = {},
                                    const LossOptions& gr_options = {});

}  // namespace graspbench

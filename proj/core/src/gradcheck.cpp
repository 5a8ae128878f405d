#include "graspbench/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "graspbench/rng.hpp"

namespace graspbench {

namespace {

double rel_err(double analytic, double numeric) {
    const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
    return std::fabs(analytic - numeric) / denom;
}

// Draws pred and target so |pred - target| per component stays >= gap.
double offset_from(SplitMix64& rng, double target, double gap) {
    const double magnitude = gap + rng.uniform(0.0, 1.5);
    return target + (rng.next() & 1 ? magnitude : -magnitude);
}

}  // namespace

ProposalBatch random_proposal_batch(std::uint64_t seed, int size) {
    SplitMix64 rng(seed);
    ProposalBatch batch(static_cast<std::size_t>(size));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        Proposal& p = batch[i];
        for (double& v : p.logits) v = rng.uniform(-2.0, 2.0);
        const std::uint64_t which = rng.next_below(4);
        p.target = which == 0 ? kIgnore : (which == 1 ? 0 : 1);
        if (i == 0) p.target = 1;  // at least one positive
        for (int k = 0; k < 4; ++k) {
            p.target_deltas[k] = rng.uniform(-1.0, 1.0);
            p.deltas[k] = offset_from(rng, p.target_deltas[k], 1e-3);
        }
    }
    return batch;
}

GraspConfigBatch random_config_batch(std::uint64_t seed, int size) {
    SplitMix64 rng(seed);
    GraspConfigBatch batch(static_cast<std::size_t>(size));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        RoiConfig& roi = batch[i];
        for (double& v : roi.angle_logits) v = rng.uniform(-2.0, 2.0);
        roi.target_class = i == 0
            ? 1 + static_cast<int>(rng.next_below(kAngleBins))
            : static_cast<int>(rng.next_below(kNumClasses));
        for (int k = 0; k < 4; ++k) {
            roi.target_offsets[k] = rng.uniform(-1.0, 1.0);
        }
        for (int c = 0; c < kNumClasses; ++c) {
            for (int k = 0; k < 4; ++k) {
                roi.offsets[c][k] = offset_from(rng, roi.target_offsets[k], 1e-3);
            }
        }
    }
    return batch;
}

double max_rel_err_gpn(const ProposalBatch& batch, double fd_step,
                       const LossOptions& options) {
    const GpnLoss analytic = loss_gpn(batch, options);
    double worst = 0.0;
    ProposalBatch probe = batch;
    const auto fd = [&](double& slot, double analytic_grad) {
        const double saved = slot;
        slot = saved + fd_step;
        const double above = loss_gpn(probe, options).value;
        slot = saved - fd_step;
        const double below = loss_gpn(probe, options).value;
        slot = saved;
        const double numeric = (above - below) / (2.0 * fd_step);
        worst = std::max(worst, rel_err(analytic_grad, numeric));
    };
    for (std::size_t i = 0; i < probe.size(); ++i) {
        for (int k = 0; k < 2; ++k) fd(probe[i].logits[k], analytic.grad.dlogits[i][k]);
        for (int k = 0; k < 4; ++k) fd(probe[i].deltas[k], analytic.grad.ddeltas[i][k]);
    }
    return worst;
}

double max_rel_err_gr(const GraspConfigBatch& batch, double fd_step,
                      const LossOptions& options) {
    const GrLoss analytic = loss_gr(batch, options);
    double worst = 0.0;
    GraspConfigBatch probe = batch;
    const auto fd = [&](double& slot, double analytic_grad) {
        const double saved = slot;
        slot = saved + fd_step;
        const double above = loss_gr(probe, options).value;
        slot = saved - fd_step;
        const double below = loss_gr(probe, options).value;
        slot = saved;
        const double numeric = (above - below) / (2.0 * fd_step);
        worst = std::max(worst, rel_err(analytic_grad, numeric));
    };
    for (std::size_t i = 0; i < probe.size(); ++i) {
        for (int k = 0; k < kNumClasses; ++k) {
            fd(probe[i].angle_logits[k], analytic.grad.dlogits[i][k]);
        }
        for (int c = 0; c < kNumClasses; ++c) {
            for (int k = 0; k < 4; ++k) {
                fd(probe[i].offsets[c][k], analytic.grad.doffsets[i][c][k]);
            }
        }
    }
    return worst;
}

GradCheckReport run_gradient_checks(int n_batches, std::uint64_t seed, double fd_step,
                                    double tolerance, const LossOptions& gpn_options,
                                    const LossOptions& gr_options) {
    GradCheckReport report;
    report.batches = n_batches;
    report.fd_step = fd_step;
    report.tolerance = tolerance;
    for (int b = 0; b < n_batches; ++b) {
        const std::uint64_t batch_seed = mix_seed(seed, static_cast<std::uint64_t>(b));
        const ProposalBatch proposals = random_proposal_batch(batch_seed);
        const GraspConfigBatch rois = random_config_batch(mix_seed(batch_seed, 1));
        report.max_rel_err_gpn =
            std::max(report.max_rel_err_gpn, max_rel_err_gpn(proposals, fd_step, gpn_options));
        report.max_rel_err_gr =
            std::max(report.max_rel_err_gr, max_rel_err_gr(rois, fd_step, gr_options));
    }
    report.pass = report.max_rel_err_gpn < tolerance && report.max_rel_err_gr < tolerance;
    return report;
}

}  // namespace graspbench

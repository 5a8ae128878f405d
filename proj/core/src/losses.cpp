#include "graspbench/losses.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace graspbench {

namespace {

using nlohmann::json;

double sign(double d) {
    if (d > 0.0) return 1.0;
    if (d < 0.0) return -1.0;
    return 0.0;  // subgradient at the kink
}

double l1_value(double d, L1Kind kind) {
    if (kind == L1Kind::absolute) return std::fabs(d);
    const double a = std::fabs(d);
    return a < 1.0 ? 0.5 * d * d : a - 0.5;
}

double l1_grad(double d, L1Kind kind) {
    if (kind == L1Kind::absolute) return sign(d);
    return std::fabs(d) < 1.0 ? d : sign(d);
}

// Numerically stable log-sum-exp and softmax over a small span.
template <std::size_t N>
std::array<double, N> softmax(const std::array<double, N>& logits, double* lse_out) {
    double peak = logits[0];
    for (double v : logits) peak = std::max(peak, v);
    double sum = 0.0;
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = std::exp(logits[i] - peak);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    if (lse_out) *lse_out = peak + std::log(sum);
    return out;
}

template <std::size_t N>
double cross_entropy(const std::array<double, N>& logits, int target,
                     std::array<double, N>& dlogits) {
    double lse = 0.0;
    const std::array<double, N> probs = softmax(logits, &lse);
    for (std::size_t i = 0; i < N; ++i) dlogits[i] = probs[i];
    dlogits[static_cast<std::size_t>(target)] -= 1.0;
    return lse - logits[static_cast<std::size_t>(target)];
}

}  // namespace

GpnLoss loss_gpn(const ProposalBatch& batch, const LossOptions& options) {
    if (batch.empty()) {
        raise(Errc::empty_batch, "loss_gpn over an empty batch");
    }
    if (options.lambda < 0.0) {
        raise(Errc::bad_range, "lambda must be >= 0");
    }
    GpnLoss loss;
    loss.grad.dlogits.assign(batch.size(), {0.0, 0.0});
    loss.grad.ddeltas.assign(batch.size(), {0.0, 0.0, 0.0, 0.0});

    int counted = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Proposal& p = batch[i];
        if (p.target == kIgnore) continue;
        if (p.target != 0 && p.target != 1) {
            raise(Errc::out_of_range, "proposal target must be 0, 1 or ignore");
        }
        ++counted;
        loss.cls += cross_entropy(p.logits, p.target, loss.grad.dlogits[i]);
        if (p.target == 1) {
            for (int k = 0; k < 4; ++k) {
                const double d = p.deltas[k] - p.target_deltas[k];
                loss.reg += options.lambda * l1_value(d, options.l1);
                loss.grad.ddeltas[i][k] = options.lambda * l1_grad(d, options.l1);
            }
        }
    }
    if (options.normalize_cls && counted > 0) {
        const double inv = 1.0 / counted;
        loss.cls *= inv;
        for (auto& g : loss.grad.dlogits) {
            g[0] *= inv;
            g[1] *= inv;
        }
    }
    loss.value = loss.cls + loss.reg;
    return loss;
}

GrLoss loss_gr(const GraspConfigBatch& batch, const LossOptions& options) {
    if (batch.empty()) {
        raise(Errc::empty_batch, "loss_gr over an empty batch");
    }
    if (options.lambda < 0.0) {
        raise(Errc::bad_range, "lambda2 must be >= 0");
    }
    GrLoss loss;
    loss.grad.dlogits.assign(batch.size(), {});
    loss.grad.doffsets.assign(batch.size(), {});

    for (std::size_t i = 0; i < batch.size(); ++i) {
        const RoiConfig& roi = batch[i];
        if (roi.target_class < 0 || roi.target_class >= kNumClasses) {
            raise(Errc::out_of_range, "target class outside [0, 20)");
        }
        loss.cls += cross_entropy(roi.angle_logits, roi.target_class,
                                  loss.grad.dlogits[i]);
        // 1_{c != 0}: background targets contribute no regression at all.
        if (roi.target_class != kBackgroundClass) {
            const auto c = static_cast<std::size_t>(roi.target_class);
            for (int k = 0; k < 4; ++k) {
                const double d = roi.offsets[c][k] - roi.target_offsets[k];
                loss.reg += options.lambda * l1_value(d, options.l1);
                loss.grad.doffsets[i][c][k] = options.lambda * l1_grad(d, options.l1);
            }
        }
    }
    if (options.normalize_cls) {
        const double inv = 1.0 / static_cast<double>(batch.size());
        loss.cls *= inv;
        for (auto& g : loss.grad.dlogits) {
            for (double& v : g) v *= inv;
        }
    }
    loss.value = loss.cls + loss.reg;
    return loss;
}

double loss_total(double gpn_value, double gr_value) {
    if (!std::isfinite(gpn_value) || !std::isfinite(gr_value)) {
        raise(Errc::non_finite, "loss_total requires finite stage losses");
    }
    return gpn_value + gr_value;
}

std::string proposal_batch_to_json(const ProposalBatch& batch) {
    json arr = json::array();
    for (const Proposal& p : batch) {
        arr.push_back({{"logits", p.logits},
                       {"deltas", p.deltas},
                       {"target", p.target},
                       {"target_deltas", p.target_deltas}});
    }
    return json{{"proposals", arr}}.dump();
}

ProposalBatch proposal_batch_from_json(const std::string& json_text) {
    ProposalBatch batch;
    try {
        const json doc = json::parse(json_text);
        for (const json& item : doc.at("proposals")) {
            Proposal p;
            p.logits = item.at("logits").get<std::array<double, 2>>();
            p.deltas = item.at("deltas").get<std::array<double, 4>>();
            p.target = item.at("target").get<int>();
            p.target_deltas = item.at("target_deltas").get<std::array<double, 4>>();
            batch.push_back(p);
        }
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad proposal batch JSON: ") + e.what());
    }
    return batch;
}

std::string config_batch_to_json(const GraspConfigBatch& batch) {
    json arr = json::array();
    for (const RoiConfig& roi : batch) {
        json offsets = json::array();
        for (const auto& o : roi.offsets) offsets.push_back(o);
        arr.push_back({{"angle_logits", roi.angle_logits},
                       {"offsets", offsets},
                       {"target_class", roi.target_class},
                       {"target_offsets", roi.target_offsets}});
    }
    return json{{"rois", arr}}.dump();
}

GraspConfigBatch config_batch_from_json(const std::string& json_text) {
    GraspConfigBatch batch;
    try {
        const json doc = json::parse(json_text);
        for (const json& item : doc.at("rois")) {
            RoiConfig roi;
            roi.angle_logits = item.at("angle_logits").get<std::array<double, kNumClasses>>();
            const json& offsets = item.at("offsets");
            if (offsets.size() != static_cast<std::size_t>(kNumClasses)) {
                raise(Errc::parse_error, "roi offsets must cover all 20 classes");
            }
            for (int c = 0; c < kNumClasses; ++c) {
                roi.offsets[static_cast<std::size_t>(c)] =
                    offsets[static_cast<std::size_t>(c)].get<std::array<double, 4>>();
            }
            roi.target_class = item.at("target_class").get<int>();
            roi.target_offsets = item.at("target_offsets").get<std::array<double, 4>>();
            batch.push_back(roi);
        }
    } catch (const json::exception& e) {
        raise(Errc::parse_error, std::string("bad config batch JSON: ") + e.what());
    }
    return batch;
}

namespace {

// Linear head parameters; zero-initialized so runs are deterministic.
struct ToyHead {
    std::size_t dim;
    std::vector<std::array<double, 2>> w_logits;    // D x 2
    std::array<double, 2> b_logits{};
    std::vector<std::array<double, 4>> w_deltas;    // D x 4
    std::array<double, 4> b_deltas{};
    std::vector<std::array<double, kNumClasses>> w_angle;  // D x 20
    std::array<double, kNumClasses> b_angle{};
    std::vector<std::array<double, 4 * kNumClasses>> w_offsets;  // D x 80
    std::array<double, 4 * kNumClasses> b_offsets{};

    explicit ToyHead(std::size_t d)
        : dim(d), w_logits(d), w_deltas(d), w_angle(d), w_offsets(d) {}
};

void validate_toy_batch(const ToyBatch& batch) {
    const std::size_t n = batch.features.size();
    if (n == 0) {
        raise(Errc::empty_batch, "toy batch has no rows");
    }
    if (batch.proposal_target.size() != n || batch.proposal_deltas.size() != n ||
        batch.config_target.size() != n || batch.config_offsets.size() != n) {
        raise(Errc::shape_mismatch, "toy batch target arrays must match feature rows");
    }
    const std::size_t d = batch.features.front().size();
    for (const auto& row : batch.features) {
        if (row.size() != d) {
            raise(Errc::shape_mismatch, "ragged feature matrix");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                raise(Errc::non_finite, "toy batch features must be finite");
            }
        }
    }
}

struct ForwardState {
    ProposalBatch proposals;
    GraspConfigBatch rois;
};

ForwardState forward(const ToyHead& head, const ToyBatch& batch) {
    const std::size_t n = batch.features.size();
    ForwardState state;
    state.proposals.resize(n);
    state.rois.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double>& x = batch.features[i];
        Proposal& p = state.proposals[i];
        RoiConfig& roi = state.rois[i];
        p.logits = head.b_logits;
        p.deltas = head.b_deltas;
        roi.angle_logits = head.b_angle;
        std::array<double, 4 * kNumClasses> flat = head.b_offsets;
        for (std::size_t j = 0; j < head.dim; ++j) {
            const double xj = x[j];
            for (int k = 0; k < 2; ++k) p.logits[k] += xj * head.w_logits[j][k];
            for (int k = 0; k < 4; ++k) p.deltas[k] += xj * head.w_deltas[j][k];
            for (int k = 0; k < kNumClasses; ++k)
                roi.angle_logits[k] += xj * head.w_angle[j][k];
            for (int k = 0; k < 4 * kNumClasses; ++k)
                flat[k] += xj * head.w_offsets[j][k];
        }
        for (int c = 0; c < kNumClasses; ++c) {
            for (int k = 0; k < 4; ++k) roi.offsets[c][k] = flat[4 * c + k];
        }
        p.target = batch.proposal_target[i];
        p.target_deltas = batch.proposal_deltas[i];
        roi.target_class = batch.config_target[i];
        roi.target_offsets = batch.config_offsets[i];
    }
    return state;
}

}  // namespace

FitResult fit_toy_head(const ToyBatch& batch, int steps, double learning_rate,
                       const LossOptions& gpn_options, const LossOptions& gr_options) {
    validate_toy_batch(batch);
    if (learning_rate < 0.0) {
        raise(Errc::bad_range, "learning rate must be >= 0");
    }
    const std::size_t n = batch.features.size();
    const std::size_t d = batch.features.front().size();
    ToyHead head(d);

    FitResult result;
    result.learning_rate = learning_rate;
    result.trajectory.reserve(static_cast<std::size_t>(steps) + 1);

    for (int step = 0; step <= steps; ++step) {
        const ForwardState state = forward(head, batch);
        const GpnLoss gpn = loss_gpn(state.proposals, gpn_options);
        const GrLoss gr = loss_gr(state.rois, gr_options);
        ToyStepLoss entry;
        entry.total = loss_total(gpn.value, gr.value);
        entry.cls = gpn.cls + gr.cls;
        entry.reg = gpn.reg + gr.reg;
        result.trajectory.push_back(entry);
        if (entry.total > 10.0 * result.trajectory.front().total &&
            result.trajectory.front().total > 0.0) {
            result.diverged = true;
            break;
        }
        if (step == steps) break;

        // Backprop through the linear maps: dW = X^T dPred, db = sum dPred.
        ToyHead grad(d);
        for (std::size_t i = 0; i < n; ++i) {
            const std::vector<double>& x = batch.features[i];
            const auto& dlogits = gpn.grad.dlogits[i];
            const auto& ddeltas = gpn.grad.ddeltas[i];
            const auto& dangle = gr.grad.dlogits[i];
            const auto& doffsets = gr.grad.doffsets[i];
            for (int k = 0; k < 2; ++k) grad.b_logits[k] += dlogits[k];
            for (int k = 0; k < 4; ++k) grad.b_deltas[k] += ddeltas[k];
            for (int k = 0; k < kNumClasses; ++k) grad.b_angle[k] += dangle[k];
            for (int c = 0; c < kNumClasses; ++c) {
                for (int k = 0; k < 4; ++k) {
                    grad.b_offsets[4 * c + k] += doffsets[c][k];
                }
            }
            for (std::size_t j = 0; j < d; ++j) {
                const double xj = x[j];
                for (int k = 0; k < 2; ++k) grad.w_logits[j][k] += xj * dlogits[k];
                for (int k = 0; k < 4; ++k) grad.w_deltas[j][k] += xj * ddeltas[k];
                for (int k = 0; k < kNumClasses; ++k)
                    grad.w_angle[j][k] += xj * dangle[k];
                for (int c = 0; c < kNumClasses; ++c) {
                    for (int k = 0; k < 4; ++k) {
                        grad.w_offsets[j][4 * c + k] += xj * doffsets[c][k];
                    }
                }
            }
        }
        const double lr = learning_rate;
        for (int k = 0; k < 2; ++k) head.b_logits[k] -= lr * grad.b_logits[k];
        for (int k = 0; k < 4; ++k) head.b_deltas[k] -= lr * grad.b_deltas[k];
        for (int k = 0; k < kNumClasses; ++k) head.b_angle[k] -= lr * grad.b_angle[k];
        for (int k = 0; k < 4 * kNumClasses; ++k) head.b_offsets[k] -= lr * grad.b_offsets[k];
        for (std::size_t j = 0; j < d; ++j) {
            for (int k = 0; k < 2; ++k) head.w_logits[j][k] -= lr * grad.w_logits[j][k];
            for (int k = 0; k < 4; ++k) head.w_deltas[j][k] -= lr * grad.w_deltas[j][k];
            for (int k = 0; k < kNumClasses; ++k)
                head.w_angle[j][k] -= lr * grad.w_angle[j][k];
            for (int k = 0; k < 4 * kNumClasses; ++k)
                head.w_offsets[j][k] -= lr * grad.w_offsets[j][k];
        }
    }

    result.monotone = true;
    for (std::size_t i = 1; i < result.trajectory.size(); ++i) {
        if (result.trajectory[i].total > result.trajectory[i - 1].total + 1e-12) {
            result.monotone = false;
            break;
        }
    }
    return result;
}

FitResult fit_toy_head_auto(const ToyBatch& batch, int steps, double initial_rate,
                            int max_halvings, const LossOptions& gpn_options,
                            const LossOptions& gr_options) {
    double lr = initial_rate;
    FitResult result;
    for (int attempt = 0; attempt <= max_halvings; ++attempt) {
        result = fit_toy_head(batch, steps, lr, gpn_options, gr_options);
        if (result.monotone && !result.diverged) return result;
        lr *= 0.5;
    }
    return result;
}

}  // namespace graspbench

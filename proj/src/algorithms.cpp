#include "squint/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "squint/errors.hpp"
#include "squint/overloaded.hpp"

namespace squint {

namespace {

void check_finite(std::span<const double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite entry");
    }
}

std::vector<double> log_prior_of(const WeightVector& prior) {
    std::vector<double> out(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i) {
        if (!(prior[i] > 0.0)) throw DomainError("prior_scaled_predict: prior entries must be strictly positive");
        out[i] = std::log(prior[i]);
    }
    return out;
}

}  // namespace

std::string algorithm_name(const AlgorithmKind& kind) {
    return std::visit(overloaded{[](const SquintOriginal&) { return std::string("squint_original"); },
                                 [](const SquintVariant&) { return std::string("squint_variant"); },
                                 [](const SquintVariantWithPrior&) { return std::string("squint_variant_prior"); },
                                 [](const HedgeBaseline&) { return std::string("hedge"); }},
                      kind);
}

WeightVector normalize_log_weights(std::span<const double> log_weights, std::span<const double> log_prior) {
    const std::size_t n = log_weights.size();
    if (n == 0) throw DomainError("normalize_log_weights: empty input");
    if (!log_prior.empty() && log_prior.size() != n) throw LengthError("normalize_log_weights: prior length");
    auto prior_at = [&](std::size_t i) { return log_prior.empty() ? 0.0 : log_prior[i]; };

    std::size_t top = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (log_weights[i] + prior_at(i) > log_weights[top] + prior_at(top)) top = i;
    }
    // Differences are formed per component so a constant prior adds exactly zero.
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp((log_weights[i] - log_weights[top]) + (prior_at(i) - prior_at(top)));
    }
    return WeightVector::normalized(std::move(w));
}

WeightVector squint_predict(const PerExpertState& state, const KernelConfig& cfg) {
    std::vector<double> lw(state.size());
    for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = log_moment(state.R[i], state.V[i], 0, cfg);
    return normalize_log_weights(lw);
}

WeightVector variant_predict(const SharedVarState& state, const KernelConfig& cfg) {
    std::vector<double> lw(state.size());
    for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = log_moment(state.R[i], state.V, 0, cfg);
    return normalize_log_weights(lw);
}

WeightVector prior_scaled_predict(const SharedVarState& state, const WeightVector& prior, const KernelConfig& cfg) {
    if (prior.size() != state.size()) throw LengthError("prior_scaled_predict: prior length mismatch");
    const std::vector<double> lp = log_prior_of(prior);
    std::vector<double> lw(state.size());
    for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = log_moment(state.R[i], state.V, 0, cfg);
    return normalize_log_weights(lw, lp);
}

double variant_residual(std::span<const double> R, double V_prev, std::span<const double> r, double v,
                        const KernelConfig& cfg) {
    const std::size_t n = r.size();
    std::vector<double> lw(n);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        lw[i] = log_moment(R[i], V_prev + v, 1, cfg);
        top = std::max(top, lw[i]);
    }
    double f = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::exp(lw[i] - top);
        f += w * (v - r[i] * r[i]);
        mass += w;
    }
    return f / mass;
}

RootResult solve_vt(std::span<const double> R, double V_prev, std::span<const double> r, const Tolerances& tol) {
    if (R.size() != r.size()) throw LengthError("solve_vt: R and r lengths differ");
    if (r.empty()) throw DomainError("solve_vt: no experts");
    check_finite(R, "solve_vt R");
    check_finite(r, "solve_vt r");
    if (!std::isfinite(V_prev) || V_prev < 0.0) throw DomainError("solve_vt: V_prev must be finite and >= 0");
    for (double x : r) {
        if (std::abs(x) > 1.0) throw DomainError("solve_vt: regret entry outside [-1, 1]");
    }

    double lo = r[0] * r[0];
    double hi = lo;
    for (double x : r) {
        lo = std::min(lo, x * x);
        hi = std::max(hi, x * x);
    }
    if (lo == hi) return {lo, 0.0, 0};

    auto f = [&](double v) { return variant_residual(R, V_prev, r, v, tol.kernel); };
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo > 0.0 || f_hi < 0.0) {
        throw InvariantError("solve_vt: bracket violation, f(min r^2) = " + std::to_string(f_lo) +
                             ", f(max r^2) = " + std::to_string(f_hi));
    }
    if (f_lo == 0.0) return {lo, 0.0, 0};
    if (f_hi == 0.0) return {hi, 0.0, 0};

    RootResult best{lo, std::abs(f_lo), 0};
    if (std::abs(f_hi) < best.residual) best = {hi, std::abs(f_hi), 0};
    for (int it = 1; it <= tol.root.max_iter; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        const double fm = f(mid);
        if (std::abs(fm) < best.residual) best = {mid, std::abs(fm), it};
        best.iterations = it;
        if (std::abs(fm) <= tol.root.tol) break;
        if (fm < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

PerExpertState squint_update(PerExpertState state, const WeightVector& p, const LossVector& loss) {
    const std::vector<double> r = instantaneous_regret(p, loss);
    return accumulate(std::move(state), r);
}

VariantUpdate variant_update(SharedVarState state, const WeightVector& p, const LossVector& loss,
                             const Tolerances& tol) {
    const std::vector<double> r = instantaneous_regret(p, loss);
    // The root is taken at the post-update regrets R_t and the previous V_{t-1}.
    std::vector<double> R_next(state.R);
    for (std::size_t i = 0; i < r.size(); ++i) R_next[i] += r[i];
    const RootResult root = solve_vt(R_next, state.V, r, tol);
    return {accumulate(std::move(state), r, root.v), root};
}

WeightVector hedge_predict(const HedgeState& state, double learning_rate) {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw DomainError("hedge_predict: learning rate must be positive");
    }
    std::vector<double> lw(state.L.size());
    for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = -learning_rate * state.L[i];
    return normalize_log_weights(lw);
}

HedgeState hedge_update(HedgeState state, const LossVector& loss) {
    if (loss.size() != state.L.size()) throw LengthError("hedge_update: loss length mismatch");
    for (std::size_t i = 0; i < loss.size(); ++i) state.L[i] += loss[i];
    ++state.t;
    return state;
}

double default_hedge_rate(std::size_t n, std::int64_t horizon) {
    if (horizon < 1) throw DomainError("default_hedge_rate: horizon must be >= 1");
    const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
    return std::sqrt(8.0 * std::log(nn) / static_cast<double>(horizon));
}

namespace {

class OriginalLearner final : public Learner {
public:
    OriginalLearner(std::size_t n, const Tolerances& tol) : state_(n), tol_(tol) {}

    WeightVector predict() const override { return squint_predict(state_, tol_.kernel); }

    StepInfo update(const WeightVector& p, const LossVector& loss) override {
        StepInfo info{instantaneous_regret(p, loss), std::nullopt, std::nullopt};
        state_ = accumulate(std::move(state_), info.r);
        return info;
    }

    double potential_sum() const override {
        double s = 0.0;
        for (std::size_t i = 0; i < state_.size(); ++i) s += phi(state_.R[i], state_.V[i], tol_.kernel);
        return s;
    }

    const std::vector<double>& cumulative_regret() const override { return state_.R; }
    std::int64_t rounds() const override { return state_.t; }
    const std::vector<double>& per_expert_variance() const override { return state_.V; }

private:
    PerExpertState state_;
    Tolerances tol_;
};

class VariantLearner final : public Learner {
public:
    VariantLearner(std::size_t n, std::optional<WeightVector> prior, const Tolerances& tol)
        : state_(n), per_expert_(n, 0.0), prior_(std::move(prior)), tol_(tol) {
        if (prior_ && prior_->size() != n) throw LengthError("prior length does not match N");
        if (prior_) (void)log_prior_of(*prior_);
    }

    WeightVector predict() const override {
        return prior_ ? prior_scaled_predict(state_, *prior_, tol_.kernel) : variant_predict(state_, tol_.kernel);
    }

    StepInfo update(const WeightVector& p, const LossVector& loss) override {
        VariantUpdate up = variant_update(std::move(state_), p, loss, tol_);
        state_ = std::move(up.state);
        StepInfo info{instantaneous_regret(p, loss), up.root.v, up.root.residual};
        for (std::size_t i = 0; i < info.r.size(); ++i) per_expert_[i] += info.r[i] * info.r[i];
        return info;
    }

    double potential_sum() const override {
        double s = 0.0;
        for (double R : state_.R) s += phi(R, state_.V, tol_.kernel);
        return s;
    }

    const std::vector<double>& cumulative_regret() const override { return state_.R; }
    std::int64_t rounds() const override { return state_.t; }
    std::optional<double> shared_variance() const override { return state_.V; }
    const std::vector<double>& per_expert_variance() const override { return per_expert_; }

private:
    SharedVarState state_;
    std::vector<double> per_expert_;
    std::optional<WeightVector> prior_;
    Tolerances tol_;
};

// Hedge keeps the Squint-style regret state alongside its losses so traces
// carry a comparable (unguaranteed) potential column.
class HedgeLearner final : public Learner {
public:
    HedgeLearner(std::size_t n, double rate, const Tolerances& tol)
        : hedge_(n), regret_(n), rate_(rate), tol_(tol) {
        if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("hedge: learning rate must be positive");
    }

    WeightVector predict() const override { return hedge_predict(hedge_, rate_); }

    StepInfo update(const WeightVector& p, const LossVector& loss) override {
        StepInfo info{instantaneous_regret(p, loss), std::nullopt, std::nullopt};
        hedge_ = hedge_update(std::move(hedge_), loss);
        regret_ = accumulate(std::move(regret_), info.r);
        return info;
    }

    double potential_sum() const override {
        double s = 0.0;
        for (std::size_t i = 0; i < regret_.size(); ++i) s += phi(regret_.R[i], regret_.V[i], tol_.kernel);
        return s;
    }

    const std::vector<double>& cumulative_regret() const override { return regret_.R; }
    std::int64_t rounds() const override { return regret_.t; }
    const std::vector<double>& per_expert_variance() const override { return regret_.V; }

private:
    HedgeState hedge_;
    PerExpertState regret_;
    double rate_;
    Tolerances tol_;
};

}  // namespace

std::unique_ptr<Learner> make_learner(const AlgorithmKind& kind, std::size_t n, const Tolerances& tol) {
    if (n == 0) throw DomainError("make_learner: need at least one expert");
    return std::visit(
        overloaded{
            [&](const SquintOriginal&) -> std::unique_ptr<Learner> { return std::make_unique<OriginalLearner>(n, tol); },
            [&](const SquintVariant&) -> std::unique_ptr<Learner> {
                return std::make_unique<VariantLearner>(n, std::nullopt, tol);
            },
            [&](const SquintVariantWithPrior& k) -> std::unique_ptr<Learner> {
                return std::make_unique<VariantLearner>(n, k.prior, tol);
            },
            [&](const HedgeBaseline& k) -> std::unique_ptr<Learner> {
                return std::make_unique<HedgeLearner>(n, k.learning_rate, tol);
            }},
        kind);
}

}  // namespace squint

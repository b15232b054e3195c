#pragma once

// Expert-problem bookkeeping: loss and weight vectors, instantaneous regret and
// the two cumulative states (per-expert variance, shared variance).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace squint {

/// Tolerance on |sum - 1| accepted when constructing a WeightVector.
inline constexpr double kSimplexTolerance = 1e-9;

/// One round's losses; every entry in [0, 1].
class LossVector {
public:
    explicit LossVector(std::vector<double> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> values() const noexcept { return entries_; }

    friend bool operator==(const LossVector&, const LossVector&) = default;

private:
    std::vector<double> entries_;
};

/// A point on the probability simplex.
class WeightVector {
public:
    /// Validates non-negativity and |sum - 1| <= kSimplexTolerance.
    explicit WeightVector(std::vector<double> entries);

    /// Divides non-negative entries by their sum. The sum must be positive and finite.
    static WeightVector normalized(std::vector<double> entries);
    static WeightVector uniform(std::size_t n);

    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> values() const noexcept { return entries_; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> entries_;
};

/// Cumulative regrets with one variance per expert (original Squint).
struct PerExpertState {
    std::vector<double> R;
    std::vector<double> V;
    std::int64_t t = 0;

    explicit PerExpertState(std::size_t n) : R(n, 0.0), V(n, 0.0) {}
    std::size_t size() const noexcept { return R.size(); }
};

/// Cumulative regrets with a single shared variance (Squint variant).
struct SharedVarState {
    std::vector<double> R;
    double V = 0.0;
    std::int64_t t = 0;

    explicit SharedVarState(std::size_t n) : R(n, 0.0) {}
    std::size_t size() const noexcept { return R.size(); }
};

/// One row of a game trace.
struct RoundRecord {
    std::int64_t t = 0;
    WeightVector p;
    LossVector loss;
    double learner_loss = 0.0;
    std::vector<double> r;
    std::optional<double> v_shared;
    double potential_sum = 0.0;
    /// Normalized residual of the variance root solve (variant only).
    std::optional<double> root_residual;
};

/// <p, loss>, clamped to [0, 1] against rounding.
double learner_loss(const WeightVector& p, const LossVector& loss);

/// r_i = <p, loss> - loss_i.
std::vector<double> instantaneous_regret(const WeightVector& p, const LossVector& loss);

/// R += r, V_i += r_i^2, t += 1.
PerExpertState accumulate(PerExpertState state, std::span<const double> r);

/// R += r, V += v, t += 1.
SharedVarState accumulate(SharedVarState state, std::span<const double> r, double v);

}  // namespace squint

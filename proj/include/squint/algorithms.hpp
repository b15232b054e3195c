#pragma once

// Prediction and update rules: original Squint (per-expert variance), the
// shared-variance variant with its variance root solve, the prior-scaled
// variant, and an exponential-weights (Hedge) baseline.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "squint/game.hpp"
#include "squint/potential.hpp"

namespace squint {

struct RootConfig {
    /// Stop once |sum_i q_i(v) (v - r_i^2)| falls below this.
    double tol = 1e-10;
    int max_iter = 80;
};

struct Tolerances {
    KernelConfig kernel;
    RootConfig root;
};

struct SquintOriginal {};
struct SquintVariant {};
struct SquintVariantWithPrior {
    WeightVector prior;
};
struct HedgeBaseline {
    double learning_rate;
};

using AlgorithmKind = std::variant<SquintOriginal, SquintVariant, SquintVariantWithPrior, HedgeBaseline>;

std::string algorithm_name(const AlgorithmKind& kind);

/// Normalizes log-weights (plus optional log-prior) by subtracting the largest
/// combined value before exponentiating.
WeightVector normalize_log_weights(std::span<const double> log_weights,
                                   std::span<const double> log_prior = {});

/// p_i proportional to dPhi/dR(R_i, V_i).
WeightVector squint_predict(const PerExpertState& state, const KernelConfig& cfg = {});

/// p_i proportional to dPhi/dR(R_i, V) with the shared V.
WeightVector variant_predict(const SharedVarState& state, const KernelConfig& cfg = {});

/// p_i proportional to prior_i * dPhi/dR(R_i, V). Prior entries must be positive.
WeightVector prior_scaled_predict(const SharedVarState& state, const WeightVector& prior,
                                  const KernelConfig& cfg = {});

struct RootResult {
    double v = 0.0;
    /// |sum_i q_i(v) (v - r_i^2)| with q normalized.
    double residual = 0.0;
    int iterations = 0;
};

/// Solves v = sum_i q_i(v) r_i^2 with q_i(v) proportional to d2Phi/dR2(R_i, V_prev + v)
/// by bisection on [min r_i^2, max r_i^2].
RootResult solve_vt(std::span<const double> R, double V_prev, std::span<const double> r,
                    const Tolerances& tol = {});

/// The normalized residual sum_i q_i(v) (v - r_i^2) at a given v.
double variant_residual(std::span<const double> R, double V_prev, std::span<const double> r, double v,
                        const KernelConfig& cfg = {});

PerExpertState squint_update(PerExpertState state, const WeightVector& p, const LossVector& loss);

struct VariantUpdate {
    SharedVarState state;
    RootResult root;
};

VariantUpdate variant_update(SharedVarState state, const WeightVector& p, const LossVector& loss,
                             const Tolerances& tol = {});

/// Cumulative losses for the Hedge baseline.
struct HedgeState {
    std::vector<double> L;
    std::int64_t t = 0;

    explicit HedgeState(std::size_t n) : L(n, 0.0) {}
};

WeightVector hedge_predict(const HedgeState& state, double learning_rate);
HedgeState hedge_update(HedgeState state, const LossVector& loss);

/// sqrt(8 ln N / T), with N floored at 2 so a single expert still gets a positive rate.
double default_hedge_rate(std::size_t n, std::int64_t horizon);

/// What a learner reports after absorbing one round.
struct StepInfo {
    std::vector<double> r;
    std::optional<double> v_shared;
    std::optional<double> root_residual;
};

/// Sequential learner driven by the game loop.
class Learner {
public:
    virtual ~Learner() = default;

    virtual WeightVector predict() const = 0;
    virtual StepInfo update(const WeightVector& p, const LossVector& loss) = 0;

    /// Sum over experts of Phi at the current state. Throws OverflowError out of range.
    virtual double potential_sum() const = 0;

    virtual const std::vector<double>& cumulative_regret() const = 0;
    virtual std::int64_t rounds() const = 0;
    /// Shared V_T for the variant, nullopt otherwise.
    virtual std::optional<double> shared_variance() const { return std::nullopt; }
    /// Per-expert sum of squared instantaneous regrets.
    virtual const std::vector<double>& per_expert_variance() const = 0;
};

std::unique_ptr<Learner> make_learner(const AlgorithmKind& kind, std::size_t n, const Tolerances& tol = {});

}  // namespace squint

#pragma once

// Quantile regret, the closed-form quantile-regret bounds, and the potential
// audit run over completed traces.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "squint/game.hpp"
#include "squint/potential.hpp"

namespace squint {

/// An epsilon in [1/N, 1) with floor(epsilon N) >= 1.
class QuantileSpec {
public:
    QuantileSpec(double epsilon, std::size_t n);

    double epsilon() const noexcept { return epsilon_; }
    /// floor(epsilon N), the 1-based rank of the comparator expert.
    std::size_t rank() const noexcept { return rank_; }

private:
    double epsilon_;
    std::size_t rank_;
};

/// Index of the floor(eps N)-th best expert; ties go to the lower index.
std::size_t quantile_expert(std::span<const double> cumulative_losses, double epsilon);

/// learner_total minus the cumulative loss of the floor(eps N)-th best expert.
double quantile_regret(double learner_total, std::span<const double> cumulative_losses, double epsilon);

/// sqrt(2 V) (1 + sqrt(2 ln((1/2 + ln(T+1)) / eps))) + 5 ln(1 + (1 + 2 ln(T+1)) / eps)
double shared_variance_bound(double V_T, std::int64_t T, double epsilon);

/// Same closed form evaluated at the comparator's own variance V_{T,i_eps}.
double per_expert_variance_bound(double V_T_i, std::int64_t T, double epsilon);

/// The grid {1/N, 2/N, ..., (N-1)/N}.
std::vector<double> epsilon_grid(std::size_t n);

struct BoundCheck {
    double epsilon = 0.0;
    double regret = 0.0;
    double bound = 0.0;
    bool pass = false;
    /// The other bound shape, reported side by side when it can be evaluated.
    std::optional<double> alternate_bound;
};

struct AuditReport {
    double max_step_delta = 0.0;
    double max_potential = 0.0;
    std::int64_t rounds_audited = 0;
    /// First round whose potential could not be evaluated, if any.
    std::optional<std::int64_t> unauditable_from;
    bool pass = true;
};

/// Replays the regret bookkeeping of a Squint-family trace and checks that
/// sum_i Phi never increases and stays <= 0, both within 1e-6 N. Rows with
/// v_shared use the shared variance; others use per-expert squared regrets.
AuditReport potential_audit(std::span<const RoundRecord> trace, const KernelConfig& cfg = {});

}  // namespace squint

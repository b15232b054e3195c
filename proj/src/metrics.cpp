#include "squint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "squint/errors.hpp"

namespace squint {

QuantileSpec::QuantileSpec(double epsilon, std::size_t n) : epsilon_(epsilon), rank_(0) {
    if (n == 0) throw DomainError("QuantileSpec: need at least one expert");
    const double nn = static_cast<double>(n);
    // A tiny slack keeps k/N grid points (which may round below k/N) in range.
    const double scaled = epsilon * nn;
    const double rank = std::floor(scaled + 1e-9);
    if (!(epsilon < 1.0) || !(rank >= 1.0) || !std::isfinite(epsilon)) {
        throw DomainError("QuantileSpec: epsilon " + std::to_string(epsilon) + " outside [1/N, 1) for N=" +
                          std::to_string(n));
    }
    rank_ = static_cast<std::size_t>(rank);
}

std::size_t quantile_expert(std::span<const double> cumulative_losses, double epsilon) {
    const QuantileSpec spec(epsilon, cumulative_losses.size());
    std::vector<std::size_t> order(cumulative_losses.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cumulative_losses[a] < cumulative_losses[b];
    });
    return order[spec.rank() - 1];
}

double quantile_regret(double learner_total, std::span<const double> cumulative_losses, double epsilon) {
    return learner_total - cumulative_losses[quantile_expert(cumulative_losses, epsilon)];
}

namespace {

double squint_bound_shape(double variance, std::int64_t T, double epsilon, const char* who) {
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw DomainError(std::string(who) + ": variance must be finite and >= 0");
    }
    if (T < 1) throw DomainError(std::string(who) + ": T must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError(std::string(who) + ": epsilon must lie in (0, 1)");
    const double log_t1 = std::log(static_cast<double>(T) + 1.0);
    const double inner = (0.5 + log_t1) / epsilon;
    if (inner < 1.0) throw DomainError(std::string(who) + ": inner log argument below 1");
    const double first = std::sqrt(2.0 * variance) * (1.0 + std::sqrt(2.0 * std::log(inner)));
    const double second = 5.0 * std::log(1.0 + (1.0 + 2.0 * log_t1) / epsilon);
    return first + second;
}

}  // namespace

double shared_variance_bound(double V_T, std::int64_t T, double epsilon) {
    return squint_bound_shape(V_T, T, epsilon, "shared_variance_bound");
}

double per_expert_variance_bound(double V_T_i, std::int64_t T, double epsilon) {
    return squint_bound_shape(V_T_i, T, epsilon, "per_expert_bound");
}

std::vector<double> epsilon_grid(std::size_t n) {
    std::vector<double> grid;
    for (std::size_t k = 1; k < n; ++k) grid.push_back(static_cast<double>(k) / static_cast<double>(n));
    return grid;
}

AuditReport potential_audit(std::span<const RoundRecord> trace, const KernelConfig& cfg) {
    AuditReport report;
    if (trace.empty()) return report;

    const std::size_t n = trace.front().p.size();
    std::vector<double> R(n, 0.0);
    std::vector<double> V(n, 0.0);
    double shared_V = 0.0;
    double previous = 0.0;
    report.max_potential = 0.0;

    for (const RoundRecord& row : trace) {
        if (row.p.size() != n || row.loss.size() != n) throw LengthError("potential_audit: ragged trace");
        const std::vector<double> r = instantaneous_regret(row.p, row.loss);
        for (std::size_t i = 0; i < n; ++i) {
            R[i] += r[i];
            V[i] += r[i] * r[i];
        }
        if (row.v_shared) shared_V += *row.v_shared;

        double sum = 0.0;
        try {
            for (std::size_t i = 0; i < n; ++i) sum += phi(R[i], row.v_shared ? shared_V : V[i], cfg);
        } catch (const OverflowError&) {
            report.unauditable_from = row.t;
            break;
        }
        report.max_step_delta = std::max(report.max_step_delta, sum - previous);
        report.max_potential = std::max(report.max_potential, sum);
        previous = sum;
        ++report.rounds_audited;
    }

    const double slack = 1e-6 * static_cast<double>(n);
    report.pass = report.max_step_delta <= slack && report.max_potential <= slack;
    return report;
}

}  // namespace squint

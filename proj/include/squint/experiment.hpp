#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "squint/config.hpp"
#include "squint/game.hpp"
#include "squint/metrics.hpp"

namespace squint {

struct RegretRow {
    double epsilon = 0.0;
    double regret = 0.0;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<double> cumulative_losses;
    double learner_total = 0.0;
    /// Shared V_T (variant family only).
    std::optional<double> shared_variance;
    /// Per-expert sums of squared instantaneous regrets.
    std::vector<double> per_expert_variance;
    std::vector<RegretRow> regret_table;
    /// Empty unless the algorithm carries a quantile guarantee.
    std::vector<BoundCheck> bound_checks;
    AuditReport audit;
    /// Bound checks and audit are asserted only for SquintOriginal and SquintVariant.
    bool checks_applicable = false;
    std::optional<double> max_root_residual;
    double wall_clock_seconds = 0.0;

    bool all_pass() const;
};

struct RunResult {
    RunReport report;
    std::vector<RoundRecord> trace;
};

/// Plays T rounds of predict -> observe -> update, then audits the trace and
/// evaluates the quantile bounds. With cfg.debug set, an invariant breach throws
/// InvariantError naming the round.
RunResult run_experiment(const ExperimentConfig& cfg);

/// The report as JSON. Wall-clock time is included only on request so that
/// repeated runs produce identical bytes.
nlohmann::json report_to_json(const RunReport& report, bool include_timing = false);

}  // namespace squint

#include "squint/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "squint/algorithms.hpp"
#include "squint/environment.hpp"
#include "squint/errors.hpp"

namespace squint {

namespace {

void check_round(std::int64_t t, const WeightVector& p, const StepInfo& info, const Learner& learner) {
    const std::size_t n = p.size();
    auto fail = [t](const std::string& what) {
        throw InvariantError("round " + std::to_string(t) + ": " + what);
    };
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) weighted += p[i] * info.r[i];
    if (std::abs(weighted) > 1e-12 * static_cast<double>(n)) fail("sum_i p_i r_i = " + std::to_string(weighted));

    const double td = static_cast<double>(t);
    const double slack = 1e-9 * td;
    for (double R : learner.cumulative_regret()) {
        if (std::abs(R) > td + slack) fail("|R_i| exceeds t");
    }
    for (double V : learner.per_expert_variance()) {
        if (V < 0.0 || V > td + slack) fail("per-expert V outside [0, t]");
    }
    if (const auto V = learner.shared_variance(); V && (*V < 0.0 || *V > td + slack)) fail("shared V outside [0, t]");
    if (info.v_shared && !(*info.v_shared >= 0.0 && *info.v_shared <= 1.0)) fail("v_t outside [0, 1]");
}

}  // namespace

bool RunReport::all_pass() const {
    if (!checks_applicable) return true;
    return audit.pass && std::all_of(bound_checks.begin(), bound_checks.end(), [](const BoundCheck& b) { return b.pass; });
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    auto learner = make_learner(cfg.algorithm, cfg.N, cfg.tolerances);
    const LossEnvironment env(cfg);

    RunResult result;
    result.report.config = cfg;
    RunReport& rep = result.report;
    rep.cumulative_losses.assign(cfg.N, 0.0);
    result.trace.reserve(static_cast<std::size_t>(cfg.T));

    for (std::int64_t t = 1; t <= cfg.T; ++t) {
        WeightVector p = learner->predict();
        LossVector loss = env.generate(t, p);
        const double lp = learner_loss(p, loss);
        StepInfo info = learner->update(p, loss);

        double potential = std::numeric_limits<double>::quiet_NaN();
        try {
            potential = learner->potential_sum();
        } catch (const OverflowError&) {
            // left as NaN; the audit reports where evaluation stopped
        }
        if (cfg.debug) check_round(t, p, info, *learner);

        rep.learner_total += lp;
        for (std::size_t i = 0; i < cfg.N; ++i) rep.cumulative_losses[i] += loss[i];
        if (info.root_residual) {
            rep.max_root_residual = std::max(rep.max_root_residual.value_or(0.0), *info.root_residual);
        }
        result.trace.push_back(RoundRecord{.t = t,
                                           .p = std::move(p),
                                           .loss = std::move(loss),
                                           .learner_loss = lp,
                                           .r = std::move(info.r),
                                           .v_shared = info.v_shared,
                                           .potential_sum = potential,
                                           .root_residual = info.root_residual});
    }

    rep.shared_variance = learner->shared_variance();
    rep.per_expert_variance = learner->per_expert_variance();

    const bool original = std::holds_alternative<SquintOriginal>(cfg.algorithm);
    const bool variant = std::holds_alternative<SquintVariant>(cfg.algorithm);
    rep.checks_applicable = original || variant;

    for (double eps : epsilon_grid(cfg.N)) {
        const double regret = quantile_regret(rep.learner_total, rep.cumulative_losses, eps);
        rep.regret_table.push_back({eps, regret});
        if (!rep.checks_applicable) continue;
        const std::size_t comparator = quantile_expert(rep.cumulative_losses, eps);
        const double per_expert = per_expert_variance_bound(rep.per_expert_variance[comparator], cfg.T, eps);
        BoundCheck check;
        check.epsilon = eps;
        check.regret = regret;
        if (variant) {
            check.bound = shared_variance_bound(*rep.shared_variance, cfg.T, eps);
            check.alternate_bound = per_expert;
        } else {
            check.bound = per_expert;
        }
        check.pass = regret <= check.bound;
        rep.bound_checks.push_back(check);
    }

    rep.audit = potential_audit(result.trace, cfg.tolerances.kernel);
    rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

nlohmann::json report_to_json(const RunReport& report, bool include_timing) {
    nlohmann::json regrets = nlohmann::json::array();
    for (const RegretRow& r : report.regret_table) regrets.push_back({{"epsilon", r.epsilon}, {"regret", r.regret}});

    nlohmann::json checks = nlohmann::json::array();
    for (const BoundCheck& b : report.bound_checks) {
        nlohmann::json row = {{"epsilon", b.epsilon}, {"regret", b.regret}, {"bound", b.bound}, {"pass", b.pass}};
        if (b.alternate_bound) row["per_expert_bound"] = *b.alternate_bound;
        checks.push_back(row);
    }

    nlohmann::json audit = {{"max_step_delta", report.audit.max_step_delta},
                            {"max_potential", report.audit.max_potential},
                            {"rounds_audited", report.audit.rounds_audited},
                            {"pass", report.audit.pass}};
    audit["unauditable_from"] = report.audit.unauditable_from ? nlohmann::json(*report.audit.unauditable_from)
                                                              : nlohmann::json(nullptr);

    nlohmann::json j = {{"config", config_to_json(report.config)},
                        {"cumulative_losses", report.cumulative_losses},
                        {"learner_total", report.learner_total},
                        {"per_expert_variance", report.per_expert_variance},
                        {"regret_table", regrets},
                        {"bound_checks", checks},
                        {"max_step_delta", report.audit.max_step_delta},
                        {"max_potential", report.audit.max_potential},
                        {"potential_audit", audit},
                        {"checks_applicable", report.checks_applicable},
                        {"pass", report.all_pass()}};
    j["V_T"] = report.shared_variance ? nlohmann::json(*report.shared_variance) : nlohmann::json(nullptr);
    j["max_root_residual"] =
        report.max_root_residual ? nlohmann::json(*report.max_root_residual) : nlohmann::json(nullptr);
    if (include_timing) j["wall_clock_seconds"] = report.wall_clock_seconds;
    return j;
}

}  // namespace squint

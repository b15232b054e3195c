// squint: run, verify and bound-evaluation front end.
//
//   squint run    --config exp.json --trace trace.csv --report report.json [--seed S] [--debug] [--timing]
//   squint verify --config a.json [--config b.json ...] [--jobs K] [--seed S]
//   squint bound  --vt X --t N --eps E

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "squint/config.hpp"
#include "squint/experiment.hpp"
#include "squint/metrics.hpp"
#include "squint/trace_io.hpp"

namespace {

squint::ExperimentConfig load(const std::string& path, std::optional<std::uint64_t> seed, bool debug) {
    squint::ExperimentConfig cfg = squint::load_config(path);
    if (seed) cfg.seed = *seed;
    cfg.debug = cfg.debug || debug;
    return cfg;
}

void print_failures(const std::string& name, const squint::RunReport& rep, std::ostream& out) {
    if (!rep.audit.pass) {
        out << name << ": potential audit failed (max step delta " << rep.audit.max_step_delta << ", max potential "
            << rep.audit.max_potential << ")\n";
    }
    if (rep.audit.unauditable_from) {
        out << name << ": potential unauditable beyond round " << *rep.audit.unauditable_from << "\n";
    }
    for (const auto& b : rep.bound_checks) {
        if (!b.pass) out << name << ": eps=" << b.epsilon << " regret " << b.regret << " exceeds bound " << b.bound << "\n";
    }
}

int cmd_run(const std::string& config, const std::string& trace_path, const std::string& report_path,
            std::optional<std::uint64_t> seed, bool debug, bool timing) {
    const auto cfg = load(config, seed, debug);
    const squint::RunResult res = squint::run_experiment(cfg);
    if (!trace_path.empty()) squint::write_trace_csv(trace_path, res.trace);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + report_path);
        out << squint::report_to_json(res.report, timing).dump(2) << '\n';
    }
    print_failures(config, res.report, std::cerr);
    return res.report.all_pass() ? 0 : 1;
}

int cmd_verify(const std::vector<std::string>& configs, unsigned jobs, std::optional<std::uint64_t> seed, bool debug) {
    std::vector<int> status(configs.size(), 0);
    std::vector<std::string> lines(configs.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                const auto cfg = load(configs[i], seed, debug);
                const auto res = squint::run_experiment(cfg);
                const bool ok = res.report.all_pass();
                status[i] = ok ? 0 : 1;
                lines[i] = std::string(ok ? "PASS " : "FAIL ") + configs[i];
                if (!ok) {
                    std::lock_guard lock(err_mutex);
                    print_failures(configs[i], res.report, std::cerr);
                }
            } catch (const std::exception& e) {
                status[i] = 2;
                lines[i] = "ERROR " + configs[i] + ": " + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < std::max(1u, jobs); ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    int rc = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::cout << lines[i] << "\n";
        rc = std::max(rc, status[i]);
    }
    return rc == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squint and shared-variance Squint experiment harness"};
    app.require_subcommand(1);

    std::string config, trace, report;
    std::vector<std::string> configs;
    std::optional<std::uint64_t> seed;
    bool debug = false, timing = false;
    unsigned jobs = 1;
    double vt = 0.0, eps = 0.0;
    std::int64_t horizon = 0;

    auto* run = app.add_subcommand("run", "play one experiment and write its trace and report");
    run->add_option("--config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--trace", trace, "CSV trace output");
    run->add_option("--report", report, "JSON report output");
    run->add_option("--seed", seed, "override the config seed");
    run->add_flag("--debug", debug, "assert game invariants every round");
    run->add_flag("--timing", timing, "include wall-clock time in the report");

    auto* verify = app.add_subcommand("verify", "run experiments and exit nonzero on any failed check");
    verify->add_option("--config", configs, "experiment JSON (repeatable)")->required()->check(CLI::ExistingFile);
    verify->add_option("--jobs", jobs, "configs to run in parallel")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "override every config seed");
    verify->add_flag("--debug", debug, "assert game invariants every round");

    auto* bound = app.add_subcommand("bound", "print the shared-variance quantile regret bound");
    bound->add_option("--vt", vt, "V_T")->required();
    bound->add_option("--t", horizon, "T")->required();
    bound->add_option("--eps", eps, "epsilon")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config, trace, report, seed, debug, timing);
        if (*verify) return cmd_verify(configs, jobs, seed, debug);
        if (*bound) {
            std::printf("%.17g\n", squint::shared_variance_bound(vt, horizon, eps));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

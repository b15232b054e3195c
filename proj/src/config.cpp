#include "squint/config.hpp"

#include <fstream>
#include <string>

#include "squint/errors.hpp"
#include "squint/overloaded.hpp"

namespace squint {

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw DomainError(std::string("config: missing \"") + key + "\" in " + where);
    }
    return j.at(key);
}

EnvironmentSpec parse_environment(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    const std::string kind = require(j, "kind", "environment").get<std::string>();
    if (kind == "iid_uniform") return IidUniform{};
    if (kind == "iid_bernoulli") return IidBernoulli{require(j, "means", "iid_bernoulli").get<std::vector<double>>()};
    if (kind == "fixed_gap") {
        FixedGap g;
        g.gap = require(j, "gap", "fixed_gap").get<double>();
        g.noise = j.value("noise", 0.0);
        return g;
    }
    if (kind == "adversarial_alternating") return AdversarialAlternating{};
    if (kind == "replay") {
        std::filesystem::path p = require(j, "path", "replay").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        return Replay{p};
    }
    throw DomainError("config: unknown environment kind \"" + kind + "\"");
}

AlgorithmKind parse_algorithm(const nlohmann::json& j, std::size_t n, std::int64_t horizon) {
    const std::string kind = require(j, "kind", "algorithm").get<std::string>();
    if (kind == "squint_original") return SquintOriginal{};
    if (kind == "squint_variant") return SquintVariant{};
    if (kind == "squint_variant_prior") {
        return SquintVariantWithPrior{WeightVector(require(j, "prior", "squint_variant_prior").get<std::vector<double>>())};
    }
    if (kind == "hedge") {
        const double rate = j.contains("learning_rate") ? j.at("learning_rate").get<double>()
                                                         : default_hedge_rate(n, horizon);
        return HedgeBaseline{rate};
    }
    throw DomainError("config: unknown algorithm kind \"" + kind + "\"");
}

}  // namespace

std::string environment_name(const EnvironmentSpec& env) {
    return std::visit(overloaded{[](const IidUniform&) { return std::string("iid_uniform"); },
                                 [](const IidBernoulli&) { return std::string("iid_bernoulli"); },
                                 [](const FixedGap&) { return std::string("fixed_gap"); },
                                 [](const AdversarialAlternating&) { return std::string("adversarial_alternating"); },
                                 [](const Replay&) { return std::string("replay"); }},
                      env);
}

void ExperimentConfig::validate() const {
    if (N < 1) throw DomainError("config: N must be >= 1");
    if (T < 1) throw DomainError("config: T must be >= 1");
    std::visit(overloaded{[&](const IidBernoulli& b) {
                              if (b.means.size() != N) throw DomainError("config: iid_bernoulli needs N means");
                              for (double m : b.means) {
                                  if (!(m >= 0.0 && m <= 1.0)) throw DomainError("config: means must lie in [0, 1]");
                              }
                          },
                          [&](const FixedGap& g) {
                              if (!(g.gap > 0.0 && g.gap <= 1.0)) throw DomainError("config: gap must lie in (0, 1]");
                              if (!(g.noise >= 0.0)) throw DomainError("config: noise must be >= 0");
                          },
                          [](const auto&) {}},
               environment);
    std::visit(overloaded{[&](const SquintVariantWithPrior& k) {
                              if (k.prior.size() != N) throw DomainError("config: prior needs N entries");
                              for (double q : k.prior.values()) {
                                  if (!(q > 0.0)) throw DomainError("config: prior entries must be positive");
                              }
                          },
                          [](const HedgeBaseline& h) {
                              if (!(h.learning_rate > 0.0)) throw DomainError("config: learning_rate must be > 0");
                          },
                          [](const auto&) {}},
               algorithm);
    const auto& k = tolerances.kernel;
    if (!(k.v_switch > 0.0) || !(k.quad_rel_tol > 0.0) || !(k.series_cutoff >= 0.0)) {
        throw DomainError("config: kernel tolerances must be positive");
    }
    if (!(tolerances.root.tol > 0.0) || tolerances.root.max_iter < 1) {
        throw DomainError("config: root tolerances must be positive");
    }
}

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    try {
        ExperimentConfig cfg;
        const auto n = require(j, "N", "config").get<std::int64_t>();
        if (n < 1) throw DomainError("config: N must be >= 1");
        cfg.N = static_cast<std::size_t>(n);
        cfg.T = require(j, "T", "config").get<std::int64_t>();
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.environment = parse_environment(require(j, "environment", "config"), base_dir);
        cfg.algorithm = parse_algorithm(require(j, "algorithm", "config"), cfg.N, std::max<std::int64_t>(cfg.T, 1));
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            cfg.tolerances.kernel.v_switch = t.value("v_switch", cfg.tolerances.kernel.v_switch);
            cfg.tolerances.kernel.quad_rel_tol = t.value("quad_rel_tol", cfg.tolerances.kernel.quad_rel_tol);
            cfg.tolerances.kernel.series_cutoff = t.value("series_cutoff", cfg.tolerances.kernel.series_cutoff);
            cfg.tolerances.root.tol = t.value("root_tol", cfg.tolerances.root.tol);
            cfg.tolerances.root.max_iter = t.value("root_max_iter", cfg.tolerances.root.max_iter);
        }
        cfg.debug = j.value("debug", false);
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DomainError("config: cannot open " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("config: " + file.string() + ": " + e.what());
    }
    return config_from_json(j, file.parent_path());
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json env = {{"kind", environment_name(cfg.environment)}};
    std::visit(overloaded{[&](const IidBernoulli& b) { env["means"] = b.means; },
                          [&](const FixedGap& g) {
                              env["gap"] = g.gap;
                              env["noise"] = g.noise;
                          },
                          [&](const Replay& r) { env["path"] = r.path.string(); },
                          [](const auto&) {}},
               cfg.environment);
    nlohmann::json alg = {{"kind", algorithm_name(cfg.algorithm)}};
    std::visit(overloaded{[&](const SquintVariantWithPrior& k) {
                              alg["prior"] = std::vector<double>(k.prior.values().begin(), k.prior.values().end());
                          },
                          [&](const HedgeBaseline& h) { alg["learning_rate"] = h.learning_rate; },
                          [](const auto&) {}},
               cfg.algorithm);
    return {{"N", cfg.N},
            {"T", cfg.T},
            {"seed", cfg.seed},
            {"environment", env},
            {"algorithm", alg},
            {"tolerances",
             {{"v_switch", cfg.tolerances.kernel.v_switch},
              {"quad_rel_tol", cfg.tolerances.kernel.quad_rel_tol},
              {"series_cutoff", cfg.tolerances.kernel.series_cutoff},
              {"root_tol", cfg.tolerances.root.tol},
              {"root_max_iter", cfg.tolerances.root.max_iter}}}};
}

}  // namespace squint

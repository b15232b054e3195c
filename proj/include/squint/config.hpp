#pragma once

// Experiment configuration, loaded from JSON.
//
//   {
//     "N": 10, "T": 1000, "seed": 42,
//     "environment": {"kind": "iid_uniform"},
//     "algorithm": {"kind": "squint_variant"},
//     "tolerances": {"v_switch": 1e-3, "quad_rel_tol": 1e-13, "root_tol": 1e-10, "root_max_iter": 80}
//   }
//
// environment kinds: iid_uniform | iid_bernoulli {means} | fixed_gap {gap, noise}
//                    | adversarial_alternating | replay {path}
// algorithm kinds:   squint_original | squint_variant | squint_variant_prior {prior}
//                    | hedge {learning_rate (optional)}

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "squint/algorithms.hpp"

namespace squint {

struct IidUniform {};
struct IidBernoulli {
    std::vector<double> means;
};
struct FixedGap {
    double gap = 0.2;
    /// Half-width of the uniform noise added to every loss (then clamped to [0, 1]).
    double noise = 0.0;
};
struct AdversarialAlternating {};
struct Replay {
    std::filesystem::path path;
};

using EnvironmentSpec = std::variant<IidUniform, IidBernoulli, FixedGap, AdversarialAlternating, Replay>;

std::string environment_name(const EnvironmentSpec& env);

struct ExperimentConfig {
    std::size_t N = 2;
    std::int64_t T = 1;
    std::uint64_t seed = 0;
    EnvironmentSpec environment = IidUniform{};
    AlgorithmKind algorithm = SquintVariant{};
    Tolerances tolerances;
    /// Check the game invariants after every round.
    bool debug = false;

    /// Throws DomainError on an inconsistent configuration.
    void validate() const;
};

/// Parses a configuration; relative replay paths resolve against base_dir.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace squint

#pragma once

// Loss environments. Every random draw for round t comes from a fresh
// std::mt19937_64 seeded with splitmix64(seed ^ splitmix64(t)), so the losses
// are a deterministic function of (seed, t, environment) and of the current
// weights for the adaptive adversary.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "squint/config.hpp"
#include "squint/game.hpp"

namespace squint {

std::uint64_t splitmix64(std::uint64_t x);

/// Loss rows from a replay file: either a trace CSV (loss_1..loss_N columns are
/// used) or plain rows of N comma-separated losses. '#' lines are skipped.
std::vector<LossVector> read_replay(const std::filesystem::path& file, std::size_t n);

class LossEnvironment {
public:
    explicit LossEnvironment(const ExperimentConfig& cfg);

    /// Losses for round t (1-based). `current` is the learner's prediction for
    /// this round, consulted only by the adversarial environment.
    LossVector generate(std::int64_t t, const WeightVector& current) const;

private:
    std::size_t n_;
    std::uint64_t seed_;
    EnvironmentSpec spec_;
    std::vector<LossVector> replay_;
};

}  // namespace squint

#include "squint/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "squint/errors.hpp"

namespace squint {

LossVector::LossVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DomainError("LossVector: need at least one expert");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const double x = entries_[i];
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("LossVector: entry " + std::to_string(i) + " = " + std::to_string(x) +
                              " outside [0, 1]");
        }
    }
}

WeightVector::WeightVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DomainError("WeightVector: need at least one expert");
    double sum = 0.0;
    for (double x : entries_) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("WeightVector: entries must be finite and >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw DomainError("WeightVector: entries sum to " + std::to_string(sum) + ", not 1");
    }
}

WeightVector WeightVector::normalized(std::vector<double> entries) {
    double sum = 0.0;
    for (double x : entries) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("WeightVector: entries must be finite and >= 0");
        sum += x;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) throw DomainError("WeightVector: cannot normalize, sum is 0 or inf");
    for (double& x : entries) x /= sum;
    return WeightVector(std::move(entries));
}

WeightVector WeightVector::uniform(std::size_t n) {
    if (n == 0) throw DomainError("WeightVector: need at least one expert");
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double learner_loss(const WeightVector& p, const LossVector& loss) {
    if (p.size() != loss.size()) {
        throw LengthError("learner_loss: " + std::to_string(p.size()) + " weights vs " +
                          std::to_string(loss.size()) + " losses");
    }
    const double lp = std::inner_product(p.values().begin(), p.values().end(), loss.values().begin(), 0.0);
    return std::clamp(lp, 0.0, 1.0);
}

std::vector<double> instantaneous_regret(const WeightVector& p, const LossVector& loss) {
    const double lp = learner_loss(p, loss);
    std::vector<double> r(loss.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = lp - loss[i];
    return r;
}

namespace {

void check_regret(std::span<const double> r, std::size_t n) {
    if (r.size() != n) {
        throw LengthError("accumulate: regret length " + std::to_string(r.size()) + " vs " +
                          std::to_string(n) + " experts");
    }
    for (double x : r) {
        if (!(std::abs(x) <= 1.0)) throw DomainError("accumulate: regret entry outside [-1, 1]");
    }
}

}  // namespace

PerExpertState accumulate(PerExpertState state, std::span<const double> r) {
    check_regret(r, state.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        state.R[i] += r[i];
        state.V[i] += r[i] * r[i];
    }
    ++state.t;
    return state;
}

SharedVarState accumulate(SharedVarState state, std::span<const double> r, double v) {
    check_regret(r, state.size());
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("accumulate: shared variance increment outside [0, 1]");
    for (std::size_t i = 0; i < r.size(); ++i) state.R[i] += r[i];
    state.V += v;
    ++state.t;
    return state;
}

}  // namespace squint

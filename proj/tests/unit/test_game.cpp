#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "squint/errors.hpp"
#include "squint/game.hpp"

using namespace squint;

TEST_CASE("LossVector and WeightVector validation") {
    CHECK_NOTHROW(LossVector({0.0, 1.0, 0.3}));
    CHECK_THROWS_AS(LossVector({0.0, 1.0000001}), DomainError);
    CHECK_THROWS_AS(LossVector({-1e-12}), DomainError);
    CHECK_THROWS_AS(LossVector({std::nan("")}), DomainError);
    CHECK_THROWS_AS(LossVector({}), DomainError);

    CHECK_NOTHROW(WeightVector({0.25, 0.75}));
    CHECK_NOTHROW(WeightVector({0.5, 0.5 + 5e-10}));
    CHECK_THROWS_AS(WeightVector({0.5, 0.5 + 2e-9}), DomainError);
    CHECK_THROWS_AS(WeightVector({1.5, -0.5}), DomainError);

    const WeightVector w = WeightVector::normalized({1.0, 3.0});
    CHECK(w[0] == 0.25);
    CHECK(w[1] == 0.75);
    CHECK_THROWS_AS(WeightVector::normalized({0.0, 0.0}), DomainError);
    CHECK(WeightVector::uniform(4)[2] == 0.25);
}

TEST_CASE("instantaneous regret examples") {
    const auto p3 = WeightVector::uniform(3);
    for (double c : {0.0, 0.4, 1.0}) {
        const auto r = instantaneous_regret(p3, LossVector({c, c, c}));
        for (double x : r) CHECK(std::abs(x) < 1e-16);
    }
    const auto r1 = instantaneous_regret(WeightVector({1.0, 0.0}), LossVector({0.0, 1.0}));
    CHECK(r1 == std::vector<double>{0.0, -1.0});
    const auto r2 = instantaneous_regret(WeightVector({0.5, 0.5}), LossVector({0.0, 1.0}));
    CHECK(r2 == std::vector<double>{0.5, -0.5});
    CHECK(learner_loss(WeightVector({0.5, 0.5}), LossVector({0.0, 1.0})) == 0.5);

    CHECK_THROWS_AS(instantaneous_regret(p3, LossVector({0.0, 1.0})), LengthError);
}

TEST_CASE("weighted regret vanishes and entries stay in [-1, 1]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + trial % 60;
        std::vector<double> w(n), l(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = u(rng) * (trial % 3 == 0 ? u(rng) * u(rng) : 1.0);
            l[i] = trial % 5 == 0 ? std::round(u(rng)) : u(rng);
        }
        w[0] += 1e-3;
        const auto p = WeightVector::normalized(w);
        const auto r = instantaneous_regret(p, LossVector(l));
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(r[i]) <= 1.0);
            dot += p[i] * r[i];
        }
        CHECK(std::abs(dot) <= 1e-12 * static_cast<double>(n));
    }
}

TEST_CASE("accumulate examples") {
    const std::vector<double> r = {0.5, -0.5};
    const PerExpertState a = accumulate(PerExpertState(2), r);
    CHECK(a.R == r);
    CHECK(a.V == std::vector<double>{0.25, 0.25});
    CHECK(a.t == 1);

    const SharedVarState b = accumulate(SharedVarState(2), r, 0.25);
    CHECK(b.R == r);
    CHECK(b.V == 0.25);
    CHECK(b.t == 1);

    const std::vector<double> zero = {0.0, 0.0};
    const PerExpertState a2 = accumulate(a, zero);
    CHECK(a2.R == a.R);
    CHECK(a2.V == a.V);
    CHECK(a2.t == 2);
    const SharedVarState b2 = accumulate(b, zero, 0.0);
    CHECK(b2.R == b.R);
    CHECK(b2.V == b.V);
    CHECK(b2.t == 2);
}

TEST_CASE("accumulate rejects malformed input") {
    const std::vector<double> r3 = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(accumulate(PerExpertState(2), r3), LengthError);
    CHECK_THROWS_AS(accumulate(SharedVarState(2), r3, 0.0), LengthError);
    const std::vector<double> big = {1.5, -1.5};
    CHECK_THROWS_AS(accumulate(PerExpertState(2), big), DomainError);
    const std::vector<double> ok = {0.1, -0.1};
    CHECK_THROWS_AS(accumulate(SharedVarState(2), ok, -0.1), DomainError);
    CHECK_THROWS_AS(accumulate(SharedVarState(2), ok, 1.1), DomainError);
}

TEST_CASE("single-expert game is degenerate but legal") {
    const auto p = WeightVector::uniform(1);
    CHECK(p[0] == 1.0);
    const auto r = instantaneous_regret(p, LossVector({0.7}));
    CHECK(r == std::vector<double>{0.0});
}

TEST_CASE("state bounds hold along random trajectories") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PerExpertState per(5);
    SharedVarState shared(5);
    for (int t = 1; t <= 500; ++t) {
        std::vector<double> w(5), l(5);
        for (int i = 0; i < 5; ++i) {
            w[i] = u(rng) + 1e-6;
            l[i] = u(rng);
        }
        const auto r = instantaneous_regret(WeightVector::normalized(w), LossVector(l));
        double vmax = 0.0;
        for (double x : r) vmax = std::max(vmax, x * x);
        per = accumulate(per, r);
        shared = accumulate(shared, r, vmax);
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(per.R[i]) <= t);
            CHECK(per.V[i] <= t);
        }
        CHECK(shared.V <= t);
    }
}

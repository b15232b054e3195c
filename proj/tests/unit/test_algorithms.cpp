#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "squint/algorithms.hpp"
#include "squint/errors.hpp"
#include "squint/potential.hpp"

using namespace squint;

namespace {

// Independent prediction: normalize Boost-quadrature moments in linear domain.
std::vector<double> oracle_weights(const std::vector<double>& R, const std::vector<double>& V) {
    std::vector<double> w(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) w[i] = oracle::moment(R[i], V[i], 0);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= s;
    return w;
}

// f(v) with oracle weights, for the grid-scan root.
double oracle_f(const std::vector<double>& R, double V_prev, const std::vector<double>& r, double v) {
    double f = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) f += oracle::moment(R[i], V_prev + v, 1) * (v - r[i] * r[i]);
    return f;
}

}  // namespace

TEST_CASE("predict examples") {
    CHECK(squint_predict(PerExpertState(4)) == WeightVector::uniform(4));
    CHECK(variant_predict(SharedVarState(3)) == WeightVector::uniform(3));

    PerExpertState s(2);
    s.R = {2.5, 2.5};
    s.V = {1.7, 1.7};
    const auto p = squint_predict(s);
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.5);

    const double a = std::exp(0.5) - 1.0;
    const double expect = a / (a + 0.5);
    // the quoted 0.564730 is a rounding of 0.5647331
    CHECK(std::abs(expect - 0.564730) < 1e-5);
    PerExpertState s10(2);
    s10.R = {1.0, 0.0};
    CHECK(std::abs(squint_predict(s10)[0] - expect) < 1e-14);
    SharedVarState v10(2);
    v10.R = {1.0, 0.0};
    CHECK(std::abs(variant_predict(v10)[0] - expect) < 1e-14);
}

TEST_CASE("predict matches independent quadrature weights") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uR(-40.0, 40.0), uV(0.0, 60.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 6;
        PerExpertState s(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.R[i] = uR(rng);
            s.V[i] = trial % 4 == 0 ? 0.0 : uV(rng);
        }
        const auto p = squint_predict(s);
        const auto ref = oracle_weights(s.R, s.V);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(p[i] - ref[i]) <= 1e-9 * ref[i] + 1e-300);
    }
}

TEST_CASE("prior-scaled examples") {
    const WeightVector q({0.6, 0.3, 0.1});
    const auto pq = prior_scaled_predict(SharedVarState(3), q);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(pq[i] - q[i]) <= 1e-15);
    const WeightVector q2({0.9, 0.1});
    const auto p = prior_scaled_predict(SharedVarState(2), q2);
    CHECK(std::abs(p[0] - 0.9) <= 1e-15);
    CHECK(std::abs(p[1] - 0.1) <= 1e-15);

    SharedVarState s(3);
    s.R = {1.0, -2.0, 0.3};
    s.V = 2.0;
    CHECK(prior_scaled_predict(s, WeightVector::uniform(3)) == variant_predict(s));

    CHECK_THROWS_AS(prior_scaled_predict(s, WeightVector({0.5, 0.5, 0.0})), DomainError);
    CHECK_THROWS_AS(prior_scaled_predict(s, WeightVector({0.5, 0.5})), LengthError);
}

TEST_CASE("predictions are permutation equivariant") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uR(-200.0, 200.0), uV(0.0, 300.0), uq(0.1, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 9;
        PerExpertState per(n);
        SharedVarState sh(n);
        std::vector<double> qraw(n);
        for (std::size_t i = 0; i < n; ++i) {
            per.R[i] = sh.R[i] = uR(rng);
            per.V[i] = uV(rng);
            qraw[i] = uq(rng);
        }
        sh.V = uV(rng);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);

        PerExpertState per2(n);
        SharedVarState sh2(n);
        sh2.V = sh.V;
        std::vector<double> q2(n);
        for (std::size_t i = 0; i < n; ++i) {
            per2.R[i] = per.R[perm[i]];
            per2.V[i] = per.V[perm[i]];
            sh2.R[i] = sh.R[perm[i]];
            q2[i] = qraw[perm[i]];
        }
        const auto q = WeightVector::normalized(qraw);
        const auto qp = WeightVector::normalized(q2);
        const auto a = squint_predict(per), a2 = squint_predict(per2);
        const auto b = variant_predict(sh), b2 = variant_predict(sh2);
        const auto c = prior_scaled_predict(sh, q), c2 = prior_scaled_predict(sh2, qp);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(a2[i] == doctest::Approx(a[perm[i]]).epsilon(1e-13));
            CHECK(b2[i] == doctest::Approx(b[perm[i]]).epsilon(1e-13));
            CHECK(c2[i] == doctest::Approx(c[perm[i]]).epsilon(1e-13));
        }
    }
}

TEST_CASE("solve_vt trivial examples") {
    for (double c : {-1.0, -0.3, 0.0, 0.45, 1.0}) {
        const std::vector<double> R = {17.0}, r = {c};
        CHECK(std::abs(solve_vt(R, 3.0, r).v - c * c) <= 1e-12);
    }
    const std::vector<double> R = {5.0, -3.0, 0.2, 40.0};
    const std::vector<double> r = {0.7, -0.7, 0.7, -0.7};
    CHECK(std::abs(solve_vt(R, 12.0, r).v - 0.49) <= 1e-12);
}

TEST_CASE("solve_vt matches a fine grid scan") {
    const std::vector<double> R = {0.8, -0.2}, r = {0.8, -0.2};
    const RootResult res = solve_vt(R, 0.0, r);
    CHECK(res.v > 0.04);
    CHECK(res.v < 0.64);

    // Scan f on a 1e-6 grid over the bracket and take the first sign change.
    double prev_v = 0.04;
    double prev_f = oracle_f(R, 0.0, r, prev_v);
    double root = -1.0;
    for (int k = 1; k <= 600000; ++k) {
        const double v = 0.04 + 1e-6 * k;
        const double f = oracle_f(R, 0.0, r, v);
        if (prev_f <= 0.0 && f >= 0.0) {
            root = prev_v - prev_f * (v - prev_v) / (f - prev_f);
            break;
        }
        prev_v = v;
        prev_f = f;
    }
    REQUIRE(root > 0.0);
    CHECK(std::abs(res.v - root) <= 1e-6);
    CHECK(res.residual <= 1e-10);
}

TEST_CASE("solve_vt bracket and residual on random instances") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uR(-100.0, 100.0), uV(0.0, 100.0), ur(-1.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 30;
        std::vector<double> R(n), r(n);
        for (std::size_t i = 0; i < n; ++i) {
            R[i] = uR(rng);
            r[i] = ur(rng);
        }
        const double Vp = uV(rng);
        const RootResult res = solve_vt(R, Vp, r);
        double lo = 1.0, hi = 0.0;
        for (double x : r) {
            lo = std::min(lo, x * x);
            hi = std::max(hi, x * x);
        }
        CHECK(res.v >= lo);
        CHECK(res.v <= hi);
        CHECK(std::abs(variant_residual(R, Vp, r, res.v)) <= 1e-9);
    }
}

TEST_CASE("solve_vt rejects malformed input") {
    const std::vector<double> R = {0.0, 1.0}, r = {0.1, 0.2}, r1 = {0.1};
    CHECK_THROWS_AS(solve_vt(R, 0.0, r1), LengthError);
    CHECK_THROWS_AS(solve_vt(R, -1.0, r), DomainError);
    const std::vector<double> bad = {0.1, 1.5};
    CHECK_THROWS_AS(solve_vt(R, 0.0, bad), DomainError);
    const std::vector<double> nan = {0.1, std::nan("")};
    CHECK_THROWS_AS(solve_vt(nan, 0.0, r), DomainError);
}

TEST_CASE("update examples") {
    const LossVector flat({0.3, 0.3});
    const auto vu = variant_update(SharedVarState(2), WeightVector::uniform(2), flat);
    CHECK(vu.state.V == 0.0);
    CHECK(vu.root.v == 0.0);
    CHECK(vu.state.t == 1);

    const LossVector split({0.0, 1.0});
    const auto vu2 = variant_update(SharedVarState(2), WeightVector::uniform(2), split);
    CHECK(vu2.state.R == std::vector<double>{0.5, -0.5});
    CHECK(vu2.root.v == 0.25);
    CHECK(vu2.state.V == 0.25);

    const auto su = squint_update(PerExpertState(2), WeightVector::uniform(2), split);
    CHECK(su.R == std::vector<double>{0.5, -0.5});
    CHECK(su.V == std::vector<double>{0.25, 0.25});
    const auto su2 = squint_update(PerExpertState(2), WeightVector::uniform(2), flat);
    CHECK(su2.V == std::vector<double>{0.0, 0.0});

    SharedVarState one(1);
    for (int t = 0; t < 5; ++t) one = variant_update(one, variant_predict(one), LossVector({0.9})).state;
    CHECK(one.V == 0.0);
    CHECK(one.R[0] == 0.0);
}

TEST_CASE("potential sum is non-increasing along trajectories") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 6;
    PerExpertState per(n);
    SharedVarState sh(n);
    double prev_per = 0.0, prev_sh = 0.0;
    for (int t = 1; t <= 300; ++t) {
        std::vector<double> l(n);
        for (std::size_t i = 0; i < n; ++i) l[i] = std::min(1.0, u(rng) + (i == 0 ? 0.0 : 0.15));
        const LossVector loss(l);
        per = squint_update(per, squint_predict(per), loss);
        sh = variant_update(sh, variant_predict(sh), loss).state;
        double sum_per = 0.0, sum_sh = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum_per += phi(per.R[i], per.V[i]);
            sum_sh += phi(sh.R[i], sh.V);
        }
        CHECK(sum_per <= prev_per + 1e-6 * n);
        CHECK(sum_sh <= prev_sh + 1e-6 * n);
        CHECK(sum_per <= 1e-6 * n);
        CHECK(sum_sh <= 1e-6 * n);
        prev_per = sum_per;
        prev_sh = sum_sh;
    }
}

TEST_CASE("hedge baseline") {
    CHECK(hedge_predict(HedgeState(4), 0.3) == WeightVector::uniform(4));
    HedgeState h(3);
    h.L = {5.0, 5.0, 5.0};
    CHECK(hedge_predict(h, 2.0) == WeightVector::uniform(3));
    h.L = {0.0, 100.0, 3.0};
    const auto tiny = hedge_predict(h, 1e-14);
    for (std::size_t i = 0; i < 3; ++i) CHECK(tiny[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    const auto sharp = hedge_predict(h, 1000.0);
    CHECK(sharp[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(sharp[1]));

    const auto h2 = hedge_update(HedgeState(2), LossVector({0.25, 1.0}));
    CHECK(h2.L == std::vector<double>{0.25, 1.0});
    CHECK(h2.t == 1);
    CHECK_THROWS_AS(hedge_predict(h, 0.0), DomainError);
    CHECK_THROWS_AS(hedge_update(HedgeState(2), LossVector({0.1})), LengthError);

    CHECK(default_hedge_rate(10, 1000) == doctest::Approx(std::sqrt(8.0 * std::log(10.0) / 1000.0)));
    CHECK(default_hedge_rate(1, 100) > 0.0);
}

TEST_CASE("learners are deterministic and consistent with the free functions") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<LossVector> losses;
    for (int t = 0; t < 50; ++t) losses.emplace_back(std::vector<double>{u(rng), u(rng), u(rng)});

    for (const AlgorithmKind& kind : {AlgorithmKind{SquintOriginal{}}, AlgorithmKind{SquintVariant{}},
                                      AlgorithmKind{SquintVariantWithPrior{WeightVector({0.5, 0.25, 0.25})}},
                                      AlgorithmKind{HedgeBaseline{0.4}}}) {
        auto a = make_learner(kind, 3);
        auto b = make_learner(kind, 3);
        for (const auto& l : losses) {
            const auto pa = a->predict();
            const auto pb = b->predict();
            CHECK(pa == pb);
            const auto ia = a->update(pa, l);
            const auto ib = b->update(pb, l);
            CHECK(ia.r == ib.r);
            CHECK(ia.v_shared == ib.v_shared);
        }
        CHECK(a->rounds() == 50);
        CHECK(a->cumulative_regret() == b->cumulative_regret());
    }

    auto learner = make_learner(SquintVariant{}, 3);
    SharedVarState s(3);
    for (const auto& l : losses) {
        const auto p = learner->predict();
        CHECK(p == variant_predict(s));
        learner->update(p, l);
        s = variant_update(s, p, l).state;
    }
    CHECK(learner->shared_variance() == s.V);
    CHECK(learner->cumulative_regret() == s.R);

    CHECK(algorithm_name(SquintVariant{}) == "squint_variant");
    CHECK_THROWS_AS(make_learner(SquintVariant{}, 0), DomainError);
}

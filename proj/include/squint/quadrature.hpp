#pragma once

// Globally adaptive Gauss-Kronrod (G7/K15) integration on a finite interval.
// The interval with the largest error estimate is bisected until the summed
// estimate drops below max(abs_tol, rel_tol * integral of |f|).

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace squint::quad {

struct Options {
    double rel_tol = 1e-13;
    double abs_tol = 0.0;
    std::size_t max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_value = 0.0;  // integral of |f|
    double error = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
};

namespace detail {

// Kronrod abscissae in [0, 1]; odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double abs_value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(fc) * kWgk[7];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kronrod * half, abs_sum * std::abs(half),
            std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates over consecutive panels [points[i], points[i+1]]; points must be
/// increasing. Seeding panels at known features keeps narrow peaks from being
/// missed by the first rule evaluation.
template <class F>
Result integrate(F&& f, std::span<const double> points, const Options& opt = {}) {
    std::priority_queue<detail::Panel> heap;
    Result res;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const detail::Panel p = detail::kronrod15(f, points[i], points[i + 1]);
        res.value += p.value;
        res.abs_value += p.abs_value;
        res.error += p.error;
        ++res.intervals;
        heap.push(p);
    }
    if (heap.empty()) return res;

    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * res.abs_value); };

    while (res.error > target() && res.intervals < opt.max_intervals) {
        detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval cannot be split further in double precision
            heap.push(worst);
            break;
        }
        detail::Panel left = detail::kronrod15(f, worst.a, mid);
        detail::Panel right = detail::kronrod15(f, mid, worst.b);
        res.value += left.value + right.value - worst.value;
        res.abs_value += left.abs_value + right.abs_value - worst.abs_value;
        res.error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++res.intervals;
    }

    // Re-sum from the panels to shed the drift of the running updates.
    double value = 0.0, abs_value = 0.0, error = 0.0;
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    for (auto it = panels.rbegin(); it != panels.rend(); ++it) {
        value += it->value;
        abs_value += it->abs_value;
        error += it->error;
    }
    res.value = value;
    res.abs_value = abs_value;
    res.error = error;
    res.converged = res.error <= target();
    return res;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    const std::array<double, 2> ends = {a, b};
    return integrate(std::forward<F>(f), std::span<const double>(ends), opt);
}

}  // namespace squint::quad

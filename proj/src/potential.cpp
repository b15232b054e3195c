#include "squint/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "squint/errors.hpp"
#include "squint/quadrature.hpp"

namespace squint {

namespace {

constexpr double kHalf = 0.5;
constexpr double kSqrtPi = 1.7724538509055160273;
// Largest exponent whose exp() is still a finite double.
constexpr double kMaxExponent = 709.0;
// Gaussian tail moments switch from the erfcx recurrence to the asymptotic series here.
constexpr double kTailAsymptotic = 7.0;

void check_args(double R, double V) {
    if (!std::isfinite(R) || !std::isfinite(V)) {
        throw DomainError("potential: non-finite argument (R=" + std::to_string(R) +
                          ", V=" + std::to_string(V) + ")");
    }
    if (V < 0.0) {
        throw DomainError("potential: V must be non-negative, got " + std::to_string(V));
    }
}

void check_order(int k) {
    if (k < 0 || k > 2) throw DomainError("log_moment: k must be 0, 1 or 2");
}

// Maximum of eta R - eta^2 V over [0, 1/2].
double max_exponent(double R, double V) {
    double eta = 0.0;
    if (V > 0.0) {
        eta = std::clamp(R / (2.0 * V), 0.0, kHalf);
    } else {
        eta = R > 0.0 ? kHalf : 0.0;
    }
    return eta * R - eta * eta * V;
}

// Panel breakpoints for quadrature on [0, 1/2]: geometric offsets from the
// exponent's peak, starting at the peak's width. Without them a peak much
// narrower than the first panel can fall between every rule node.
std::vector<double> peak_breakpoints(double R, double V) {
    double eta = 0.0;
    if (V > 0.0) {
        eta = std::clamp(R / (2.0 * V), 0.0, kHalf);
    } else {
        eta = R > 0.0 ? kHalf : 0.0;
    }
    const double slope = std::abs(R - 2.0 * eta * V);
    const double width = 1.0 / (slope + std::sqrt(2.0 * V) + 1e-300);
    std::vector<double> pts = {0.0};
    std::vector<double> right;
    for (double d = width; d < kHalf; d *= 4.0) {
        if (eta - d > 0.0) pts.push_back(eta - d);
        if (eta + d < kHalf) right.push_back(eta + d);
    }
    std::reverse(pts.begin() + 1, pts.end());
    if (eta > 0.0 && eta < kHalf) pts.push_back(eta);
    pts.insert(pts.end(), right.begin(), right.end());
    pts.push_back(kHalf);
    return pts;
}

// Moments of the exponent after normalization, as exp(log_scale) * m[k].
struct ScaledMoments {
    double log_scale;
    std::array<double, 3> m;
};

// Closed form when the peak mu = R / (2V) lies at or left of 1/4. Every
// summand below is non-negative, so no cancellation beyond the tail split.
ScaledMoments left_peak_moments(double R, double V) {
    const double sv = std::sqrt(V);
    const double mu = R / (2.0 * V);
    const double a = -R / (2.0 * sv);  // s-coordinate of eta = 0
    const double width = 0.5 * sv;     // s-width of [0, 1/2]
    const double b = a + width;

    if (a >= 0.0) {
        // Peak at or left of eta = 0; the maximum of the exponent is 0.
        const auto ta = detail::gaussian_tail_moments(a);
        const auto tb = detail::gaussian_tail_moments(b);
        const double decay = std::exp(-width * (2.0 * a + width));
        const double w = width;
        std::array<double, 3> tail_b = {tb[0], w * tb[0] + tb[1],
                                        w * w * tb[0] + 2.0 * w * tb[1] + tb[2]};
        std::array<double, 3> m{};
        double vpow = sv;
        for (int k = 0; k < 3; ++k) {
            m[k] = (ta[k] - decay * tail_b[k]) / vpow;
            vpow *= sv;
        }
        return {0.0, m};
    }

    // Interior peak, 0 < mu <= 1/4, so |a| <= b.
    const double ea = std::exp(-a * a);
    const double eb = std::exp(-b * b);
    const double g0 = 0.5 * kSqrtPi * (std::erf(b) + std::erf(-a));
    const double g1 = 0.5 * (ea - eb);
    const double g2 = 0.5 * g0 + 0.5 * (a * ea - b * eb);
    const double c = 1.0 / sv;
    std::array<double, 3> m = {g0, mu * g0 + c * g1, mu * mu * g0 + 2.0 * mu * c * g1 + c * c * g2};
    for (double& x : m) x /= sv;
    return {R * R / (4.0 * V), m};
}

}  // namespace

namespace detail {

double erfcx(double x) {
    if (x < 0.0) throw DomainError("erfcx: argument must be non-negative");
    if (x < 26.0) {
        // exp(x^2) with x^2 carried as hi + lo so the exponent is exact.
        const double hi = x * x;
        const double lo = std::fma(x, x, -hi);
        return std::exp(hi) * (1.0 + lo) * std::erfc(x);
    }
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 12; ++j) {
        term *= -(2.0 * j - 1.0) * inv2x2;
        sum += term;
    }
    return sum / (x * kSqrtPi);
}

std::array<double, 3> gaussian_tail_moments(double x) {
    if (x < 0.0) throw DomainError("gaussian_tail_moments: argument must be non-negative");
    std::array<double, 3> t{};
    if (x < kTailAsymptotic) {
        t[0] = 0.5 * kSqrtPi * erfcx(x);
        t[1] = 0.5 - x * t[0];
        t[2] = 0.5 * (t[0] - 2.0 * x * t[1]);
        return t;
    }
    const double two_x = 2.0 * x;
    const double inv_sq = 1.0 / (two_x * two_x);
    for (int k = 0; k < 3; ++k) {
        double term = (k == 2 ? 2.0 : 1.0) / std::pow(two_x, k + 1);
        double sum = 0.0;
        for (int j = 0; j < 80; ++j) {
            sum += term;
            const double next = -term * (k + 2.0 * j + 1.0) * (k + 2.0 * j + 2.0) * inv_sq / (j + 1.0);
            if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-18 * std::abs(sum)) break;
            term = next;
        }
        t[k] = sum;
    }
    return t;
}

std::array<double, 3> log_moments_closed_form(double R, double V) {
    check_args(R, V);
    if (!(V > 0.0)) throw DomainError("log_moments_closed_form: V must be positive");

    const double mu = R / (2.0 * V);
    if (mu <= 0.25) {
        const ScaledMoments s = left_peak_moments(R, V);
        return {s.log_scale + std::log(s.m[0]), s.log_scale + std::log(s.m[1]),
                s.log_scale + std::log(s.m[2])};
    }
    // Reflect eta -> 1/2 - eta: the exponent becomes g(1/2) + eta (V - R) - eta^2 V,
    // whose peak sits left of 1/4.
    const double g_half = 0.5 * R - 0.25 * V;
    const ScaledMoments s = left_peak_moments(V - R, V);
    const auto& j = s.m;
    const double m0 = j[0];
    const double m1 = 0.5 * j[0] - j[1];
    const double m2 = 0.25 * j[0] - j[1] + j[2];
    const double scale = g_half + s.log_scale;
    return {scale + std::log(m0), scale + std::log(m1), scale + std::log(m2)};
}

double log_moment_quadrature(double R, double V, int k, double rel_tol) {
    check_args(R, V);
    check_order(k);
    const double peak = max_exponent(R, V);
    auto integrand = [=](double eta) {
        const double e = std::exp(eta * R - eta * eta * V - peak);
        return k == 0 ? e : (k == 1 ? eta * e : eta * eta * e);
    };
    quad::Options opt;
    opt.rel_tol = rel_tol;
    const std::vector<double> pts = peak_breakpoints(R, V);
    const quad::Result res = quad::integrate(integrand, std::span<const double>(pts), opt);
    return peak + std::log(res.value);
}

}  // namespace detail

double log_moment(double R, double V, int k, const KernelConfig& cfg) {
    check_args(R, V);
    check_order(k);
    if (V >= cfg.v_switch && V > 0.0) {
        return detail::log_moments_closed_form(R, V)[static_cast<std::size_t>(k)];
    }
    return detail::log_moment_quadrature(R, V, k, cfg.quad_rel_tol);
}

double dphi_dR(double R, double V, const KernelConfig& cfg) {
    const double lm = log_moment(R, V, 0, cfg);
    if (lm > kMaxExponent) throw OverflowError("dphi_dR: value overflows a double");
    return std::exp(lm);
}

double d2phi_dR2(double R, double V, const KernelConfig& cfg) {
    const double lm = log_moment(R, V, 1, cfg);
    if (lm > kMaxExponent) throw OverflowError("d2phi_dR2: value overflows a double");
    return std::exp(lm);
}

double phi(double R, double V, const KernelConfig& cfg) {
    check_args(R, V);
    // Phi is below exp(peak) * log-ish factors; leave headroom for them.
    if (max_exponent(R, V) > kMaxExponent - 10.0) {
        throw OverflowError("phi: value not representable for R=" + std::to_string(R) +
                            ", V=" + std::to_string(V));
    }
    const double cutoff = cfg.series_cutoff;
    auto integrand = [=](double eta) {
        const double slope = R - eta * V;
        const double x = eta * slope;
        if (std::abs(x) < cutoff) {
            // expm1(x) / eta = slope * (1 + x/2 + x^2/6 + x^3/24 + x^4/120)
            return slope * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0))));
        }
        return std::expm1(x) / eta;
    };
    quad::Options opt;
    opt.rel_tol = cfg.quad_rel_tol;
    const std::vector<double> pts = peak_breakpoints(R, V);
    const quad::Result res = quad::integrate(integrand, std::span<const double>(pts), opt);
    if (!std::isfinite(res.value)) throw OverflowError("phi: quadrature overflowed");
    return res.value;
}

}  // namespace squint

#pragma once

// The Squint potential
//
//     Phi(R, V) = int_0^{1/2} (exp(eta R - eta^2 V) - 1) / eta  d eta
//
// and the exponential moments it is built from,
//
//     M_k(R, V) = int_0^{1/2} eta^k exp(eta R - eta^2 V)  d eta,   k = 0, 1, 2,
//
// with dPhi/dR = M_0 and d2Phi/dR2 = M_1 = -dPhi/dV. All weight computations
// go through log_moment, which never forms exp(eta R) in linear domain.

#include <array>

namespace squint {

struct KernelConfig {
    /// log_moment uses the error-function reduction for V >= v_switch and
    /// shifted adaptive quadrature below it.
    double v_switch = 1e-3;
    /// Relative tolerance (against the integral of |f|) for every quadrature.
    double quad_rel_tol = 1e-13;
    /// Below this |eta R - eta^2 V| the phi integrand uses its Taylor series.
    double series_cutoff = 1e-4;
};

/// log of int_0^{1/2} eta^k exp(eta R - eta^2 V) d eta for k in {0, 1, 2}.
/// Throws DomainError for V < 0, non-finite arguments or k outside {0,1,2}.
double log_moment(double R, double V, int k, const KernelConfig& cfg = {});

/// Phi(R, V). Throws OverflowError when the value is not representable.
double phi(double R, double V, const KernelConfig& cfg = {});

double dphi_dR(double R, double V, const KernelConfig& cfg = {});
double d2phi_dR2(double R, double V, const KernelConfig& cfg = {});

namespace detail {

/// Error-function route, valid for V > 0. Returns log M_0, log M_1, log M_2.
std::array<double, 3> log_moments_closed_form(double R, double V);

/// Shifted-quadrature route, valid for V >= 0.
double log_moment_quadrature(double R, double V, int k, double rel_tol);

/// exp(x^2) * erfc(x) for x >= 0.
double erfcx(double x);

/// int_0^inf u^k exp(-u^2 - 2 x u) du for x >= 0, k in {0, 1, 2}.
std::array<double, 3> gaussian_tail_moments(double x);

}  // namespace detail

}  // namespace squint

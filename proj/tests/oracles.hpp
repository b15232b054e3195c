#pragma once

// Test-only reference computations. These use Boost.Math quadrature and plain
// series so they share no code path with the library kernels.

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

/// int_0^{1/2} eta^k exp(eta R - eta^2 V) d eta in linear domain.
inline double moment(double R, double V, int k) {
    auto f = [=](double eta) { return std::pow(eta, k) * std::exp(eta * R - eta * eta * V); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 0.5, 15, 1e-13);
}

/// Phi(R, V) by linear-domain quadrature of expm1(.)/eta.
inline double phi(double R, double V) {
    auto f = [=](double eta) { return std::expm1(eta * R - eta * eta * V) / eta; };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 0.5, 15, 1e-13);
}

/// Phi(R, 0) = sum_{k>=1} (R/2)^k / (k k!).
inline double phi_v0_series(double R) {
    double term = 1.0;  // (R/2)^k / k!
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= (R / 2.0) / k;
        sum += term / k;
        if (std::abs(term / k) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace oracle

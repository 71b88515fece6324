#pragma once

// One-point quadrature rules for the convolution
//
//     X(t) = \int_0^t Phi(s) exp(delta (s - t)) ds,
//
// which is the solution of X' = Phi - delta X with X(0) = 0. Replacing the
// integral by w * Phi(t - tau) is what turns a quasi-steady-state assumption
// into a delayed one.

#include <cmath>

#include "dqssa/error.hpp"

namespace dqssa {

/// Node offset `tau` (the node sits at t - tau) and weight `w`, both in hours.
struct QuadratureRule {
    double tau = 0.0;
    double w = 0.0;
};

namespace detail {

inline void require_positive(double v, const char* what) {
    if (!(std::isfinite(v) && v > 0.0)) {
        throw InvalidArgument(std::string(what) + " must be positive and finite");
    }
}

// 1 - (1 + x) exp(-x); series for small x where the closed form cancels.
inline double first_moment_kernel(double x) {
    if (x < 1e-2) {
        // sum_{k>=2} (-1)^k (k-1) x^k / k!
        double term = x * x / 2.0;
        double sum = 0.0;
        for (int k = 2; k <= 10; ++k) {
            sum += (k - 1) * term;
            term *= -x / (k + 1);
        }
        return sum;
    }
    return -std::expm1(-x) - x * std::exp(-x);
}

} // namespace detail

/// Weight of the node-at-t rule that is exact for constant Phi.
inline double constant_exact_weight(double delta, double t) {
    detail::require_positive(delta, "delta");
    detail::require_positive(t, "t");
    return -std::expm1(-delta * t) / delta;
}

/// Finite-horizon rule that is exact for every linear Phi on [0, t].
inline QuadratureRule exact_tau_w(double delta, double t) {
    detail::require_positive(delta, "delta");
    detail::require_positive(t, "t");
    const double x = delta * t;
    const double zeroth = -std::expm1(-x);  // 1 - exp(-x)
    const double first = detail::first_moment_kernel(x);
    return {first / (delta * zeroth), zeroth / delta};
}

/// Large-t limit of exact_tau_w: tau = w = 1/delta.
inline QuadratureRule limit_tau_w(double delta) {
    detail::require_positive(delta, "delta");
    return {1.0 / delta, 1.0 / delta};
}

} // namespace dqssa

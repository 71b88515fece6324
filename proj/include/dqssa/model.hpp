#pragma once

// Nine-species activator/repressor circadian oscillator (mass action) and
// its algebraic quasi-steady-state maps.

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "dqssa/error.hpp"

namespace dqssa {

/// Kinetic constants. Unary rates in 1/h, bimolecular rates in 1/(Mol h).
/// Default-constructed values are the reference oscillator parameters.
struct RateConstants {
    double alpha_A = 50.0;
    double alpha_A_p = 500.0;
    double alpha_R = 0.01;
    double alpha_R_p = 50.0;
    double beta_A = 50.0;
    double beta_R = 5.0;
    double gamma_A = 1.0;
    double gamma_R = 1.0;
    double gamma_C = 2.0;
    double delta_A = 1.0;
    double delta_R = 0.2;
    double delta_MA = 10.0;
    double delta_MR = 0.5;
    double theta_A = 50.0;
    double theta_R = 100.0;

    /// Visits (name, member) pairs in a fixed order; used by config IO.
    template <class F>
    void for_each(F&& f) {
        f("alpha_A", alpha_A);
        f("alpha_A_p", alpha_A_p);
        f("alpha_R", alpha_R);
        f("alpha_R_p", alpha_R_p);
        f("beta_A", beta_A);
        f("beta_R", beta_R);
        f("gamma_A", gamma_A);
        f("gamma_R", gamma_R);
        f("gamma_C", gamma_C);
        f("delta_A", delta_A);
        f("delta_R", delta_R);
        f("delta_MA", delta_MA);
        f("delta_MR", delta_MR);
        f("theta_A", theta_A);
        f("theta_R", theta_R);
    }

    template <class F>
    void for_each(F&& f) const {
        const_cast<RateConstants*>(this)->for_each(
            [&](std::string_view name, double& v) { f(name, static_cast<const double&>(v)); });
    }

    /// Throws InvalidArgument unless every constant is finite and > 0.
    void validate() const {
        for_each([](std::string_view name, double v) {
            if (!(std::isfinite(v) && v > 0.0)) {
                throw InvalidArgument("rate constant " + std::string(name) +
                                      " must be positive and finite");
            }
        });
    }
};

/// Copy numbers of the nine species.
struct FullState {
    double D_A = 0.0;
    double D_A_p = 0.0;
    double D_R = 0.0;
    double D_R_p = 0.0;
    double M_A = 0.0;
    double M_R = 0.0;
    double A = 0.0;
    double R = 0.0;
    double C = 0.0;

    static constexpr std::size_t size = 9;
    static constexpr std::array<std::string_view, size> names{
        "D_A", "D_Ap", "D_R", "D_Rp", "M_A", "M_R", "A", "R", "C"};

    /// Both genes inactive, no transcripts or proteins.
    static constexpr FullState initial() {
        FullState s;
        s.D_A = 1.0;
        s.D_R = 1.0;
        return s;
    }

    std::array<double, size> to_array() const { return {D_A, D_A_p, D_R, D_R_p, M_A, M_R, A, R, C}; }

    static FullState from_array(const std::array<double, size>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
    }
};

struct ReducedState {
    double R = 0.0;
    double C = 0.0;
};

/// Time derivative of the full mass-action system; the result holds d/dt of
/// each species in the same slot.
inline FullState full_rhs(const FullState& s, const RateConstants& p) {
    FullState d;
    const double bind_A = p.gamma_A * s.D_A * s.A;
    const double bind_R = p.gamma_R * s.D_R * s.A;
    d.D_A = p.theta_A * s.D_A_p - bind_A;
    d.D_A_p = -p.theta_A * s.D_A_p + bind_A;
    d.D_R = p.theta_R * s.D_R_p - bind_R;
    d.D_R_p = -p.theta_R * s.D_R_p + bind_R;
    d.M_A = p.alpha_A_p * s.D_A_p + p.alpha_A * s.D_A - p.delta_MA * s.M_A;
    d.M_R = p.alpha_R_p * s.D_R_p + p.alpha_R * s.D_R - p.delta_MR * s.M_R;
    d.A = p.beta_A * s.M_A + p.theta_A * s.D_A_p + p.theta_R * s.D_R_p -
          s.A * (p.gamma_A * s.D_A + p.gamma_R * s.D_R + p.gamma_C * s.R + p.delta_A);
    d.R = p.beta_R * s.M_R - p.gamma_C * s.A * s.R + p.delta_A * s.C - p.delta_R * s.R;
    d.C = p.gamma_C * s.A * s.R - p.delta_A * s.C;
    return d;
}

// Steady states of the gene and mRNA species for a frozen activator level,
// with the activated gene forms eliminated through D' = 1 - D.

inline double steady_DA(double A, const RateConstants& p) {
    return p.theta_A / (p.theta_A + p.gamma_A * A);
}

inline double steady_DR(double A, const RateConstants& p) {
    return p.theta_R / (p.theta_R + p.gamma_R * A);
}

inline double steady_MA(double A, const RateConstants& p) {
    // Weighted mean of the two transcription rates; avoids cancellation at A = 0.
    return (p.alpha_A * p.theta_A + p.alpha_A_p * p.gamma_A * A) / (p.delta_MA * (p.theta_A + p.gamma_A * A));
}

inline double steady_MR(double A, const RateConstants& p) {
    return (p.alpha_R * p.theta_R + p.alpha_R_p * p.gamma_R * A) / (p.delta_MR * (p.theta_R + p.gamma_R * A));
}

/// rho(R) = beta_A / (delta_MA (gamma_C R + delta_A)).
inline double rho(double R, const RateConstants& p) {
    return p.beta_A / (p.delta_MA * (p.gamma_C * R + p.delta_A));
}

/// Dissociation constant K_d = theta_A / gamma_A.
inline double dissociation_constant(const RateConstants& p) { return p.theta_A / p.gamma_A; }

/// Quasi-steady activator level as a function of the repressor: the positive
/// root of A^2 - (alpha_A' rho - K_d) A - alpha_A rho K_d = 0.
///
/// The printed root formula is used when b = alpha_A' rho - K_d >= 0. For
/// b < 0 (large R) the sum b + sqrt(b^2 + c) cancels, so the equivalent form
/// c / (sqrt(b^2 + c) - b) is used instead.
inline double a_tilde_s(double R, const RateConstants& p) {
    const double r = rho(R, p);
    const double kd = dissociation_constant(p);
    const double b = p.alpha_A_p * r - kd;
    const double c = 4.0 * p.alpha_A * r * kd;
    const double disc = std::sqrt(b * b + c);
    if (b >= 0.0) {
        return 0.5 * (b + disc);
    }
    return 0.5 * c / (disc - b);
}

/// Standard (no delay) quasi-steady-state reduction in (R, C).
inline ReducedState reduced_rhs(const ReducedState& s, const RateConstants& p) {
    const double a = a_tilde_s(s.R, p);
    const double complexation = p.gamma_C * a * s.R;
    return {p.beta_R * steady_MR(a, p) - complexation + p.delta_A * s.C - p.delta_R * s.R,
            complexation - p.delta_A * s.C};
}

/// Nine-component state implied by the standard reduction at (R, C).
inline FullState qss_full_state(const ReducedState& s, const RateConstants& p) {
    const double a = a_tilde_s(s.R, p);
    FullState f;
    f.D_A = steady_DA(a, p);
    f.D_A_p = 1.0 - f.D_A;
    f.D_R = steady_DR(a, p);
    f.D_R_p = 1.0 - f.D_R;
    f.M_A = steady_MA(a, p);
    f.M_R = steady_MR(a, p);
    f.A = a;
    f.R = s.R;
    f.C = s.C;
    return f;
}

} // namespace dqssa

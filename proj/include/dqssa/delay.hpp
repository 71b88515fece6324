#pragma once

// Delayed quasi-steady-state closure of the circadian model.
//
// Each fast species X obeys X' = f - g X. Instead of the instantaneous
// steady state f/g, the delayed closure evaluates f/g at t - 1/g. Only R and C
// remain dynamic; the fast species are recovered from the recorded history of
// the delayed activator A^tau and of its instantaneous steady state A^s.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dqssa/history.hpp"
#include "dqssa/model.hpp"

namespace dqssa {

enum class DelayVariant {
    derived,     ///< state-dependent delays exactly as derived
    simplified,  ///< constant gene delays, tau_A = 1/(gamma_C R + delta_A)
    constant,    ///< all delays constant, tau_A = 1/delta_MA
};

inline std::string_view to_string(DelayVariant v) {
    switch (v) {
    case DelayVariant::derived:
        return "derived";
    case DelayVariant::simplified:
        return "simplified";
    case DelayVariant::constant:
        return "constant";
    }
    return "?";
}

inline std::optional<DelayVariant> parse_delay_variant(std::string_view s) {
    if (s == "derived") return DelayVariant::derived;
    if (s == "simplified") return DelayVariant::simplified;
    if (s == "constant") return DelayVariant::constant;
    return std::nullopt;
}

/// The five lags in hours.
struct Delays {
    double D_A = 0.0;
    double D_R = 0.0;
    double M_A = 0.0;
    double M_R = 0.0;
    double A = 0.0;
};

struct DelayedAux {
    double D_A_tau = 0.0;
    double D_R_tau = 0.0;
    double M_A_tau = 0.0;
    double M_R_tau = 0.0;
    double A_tau = 0.0;
    double A_s_now = 0.0;  ///< A^s(t), the value to record in the history
    Delays delays;
};

/// Gene delays, which depend only on the current repressor level.
inline Delays gene_delays(DelayVariant variant, double R_now, const RateConstants& p) {
    Delays d;
    if (variant == DelayVariant::derived) {
        const double a = a_tilde_s(R_now, p);
        d.D_A = 1.0 / (p.theta_A + p.gamma_A * a);
        d.D_R = 1.0 / (p.theta_R + p.gamma_R * a);
    } else {
        d.D_A = 1.0 / p.theta_A;
        d.D_R = 1.0 / p.theta_R;
    }
    d.M_A = 1.0 / p.delta_MA;
    d.M_R = 1.0 / p.delta_MR;
    return d;
}

/// Activator delay. DA_tau and DR_tau are only read by the derived variant.
inline double activator_delay(DelayVariant variant, double R_now, double DA_tau, double DR_tau,
                              const RateConstants& p) {
    switch (variant) {
    case DelayVariant::derived:
        return 1.0 / (p.gamma_A * DA_tau + p.gamma_R * DR_tau + p.gamma_C * R_now + p.delta_A);
    case DelayVariant::simplified:
        return 1.0 / (p.gamma_C * R_now + p.delta_A);
    case DelayVariant::constant:
        return 1.0 / p.delta_MA;
    }
    throw std::logic_error("unhandled delay variant");
}

/// Lags for explicitly supplied D^tau values.
inline Delays delays_at(DelayVariant variant, double /*t*/, double R_now, double DA_tau, double DR_tau,
                        const RateConstants& p) {
    Delays d = gene_delays(variant, R_now, p);
    d.A = activator_delay(variant, R_now, DA_tau, DR_tau, p);
    return d;
}

/// All five lags at time t: gene lags from R_now, then tau_A, which in the
/// derived variant needs D^tau(t) and therefore reads the A^tau history.
inline Delays delays_at(DelayVariant variant, double t, double R_now, const HistoryStore& hist,
                        const RateConstants& p) {
    Delays d = gene_delays(variant, R_now, p);
    const double da = steady_DA(hist.lookup_committed(Channel::A_tau, t - d.D_A), p);
    const double dr = steady_DR(hist.lookup_committed(Channel::A_tau, t - d.D_R), p);
    d.A = activator_delay(variant, R_now, da, dr, p);
    return d;
}

/// Evaluates the delayed auxiliaries at time t for given lags.
///
/// D^tau and M^tau come from the A^tau history, A^tau(t) from the A^s
/// history, and A^s(t) from those plus R_now. A^tau lags ending inside the
/// step being solved read the last committed sample (zero-order hold); A^s
/// lags may read the provisional sample.
inline DelayedAux delayed_aux_with(double t, double R_now, const HistoryStore& hist, const Delays& d,
                                   const RateConstants& p) {
    DelayedAux aux;
    aux.delays = d;
    aux.D_A_tau = steady_DA(hist.lookup_committed(Channel::A_tau, t - d.D_A), p);
    aux.D_R_tau = steady_DR(hist.lookup_committed(Channel::A_tau, t - d.D_R), p);
    aux.M_A_tau = steady_MA(hist.lookup_committed(Channel::A_tau, t - d.M_A), p);
    aux.M_R_tau = steady_MR(hist.lookup_committed(Channel::A_tau, t - d.M_R), p);
    aux.A_tau = hist.lookup(Channel::A_s, t - d.A);

    const double production =
        p.beta_A * aux.M_A_tau + p.theta_A * (1.0 - aux.D_A_tau) + p.theta_R * (1.0 - aux.D_R_tau);
    const double loss =
        p.gamma_A * aux.D_A_tau + p.gamma_R * aux.D_R_tau + p.gamma_C * R_now + p.delta_A;
    aux.A_s_now = production / loss;
    return aux;
}

/// Evaluates the delayed auxiliaries at time t with lags taken from R_now.
///
/// Order: gene lags from R_now; D^tau, M^tau from the A^tau history; tau_A;
/// A^tau from the A^s history; finally A^s(t). Only recorded (or
/// provisional) history and the current R are read, so no inner iteration
/// over the auxiliaries is needed.
inline DelayedAux delayed_aux_at(double t, double R_now, const HistoryStore& hist, DelayVariant variant,
                                 const RateConstants& p) {
    return delayed_aux_with(t, R_now, hist, delays_at(variant, t, R_now, hist, p), p);
}

struct DelayedDerivative {
    double dR = 0.0;
    double dC = 0.0;
    DelayedAux aux;
};

/// Right-hand side of the delayed (R, C) system at time t for given lags.
inline DelayedDerivative delayed_rhs_with(double t, const ReducedState& s, const HistoryStore& hist,
                                          const Delays& d, const RateConstants& p) {
    DelayedDerivative out;
    out.aux = delayed_aux_with(t, s.R, hist, d, p);
    const double complexation = p.gamma_C * out.aux.A_tau * s.R;
    out.dR = p.beta_R * out.aux.M_R_tau - complexation + p.delta_A * s.C - p.delta_R * s.R;
    out.dC = complexation - p.delta_A * s.C;
    return out;
}

/// Right-hand side of the delayed (R, C) system at time t.
inline DelayedDerivative delayed_rhs(double t, const ReducedState& s, const HistoryStore& hist,
                                     DelayVariant variant, const RateConstants& p) {
    return delayed_rhs_with(t, s, hist, delays_at(variant, t, s.R, hist, p), p);
}

/// Full nine-component state implied by delayed auxiliaries and (R, C).
inline FullState delayed_full_state(const DelayedAux& aux, const ReducedState& s) {
    FullState f;
    f.D_A = aux.D_A_tau;
    f.D_A_p = 1.0 - aux.D_A_tau;
    f.D_R = aux.D_R_tau;
    f.D_R_p = 1.0 - aux.D_R_tau;
    f.M_A = aux.M_A_tau;
    f.M_R = aux.M_R_tau;
    f.A = aux.A_tau;
    f.R = s.R;
    f.C = s.C;
    return f;
}

} // namespace dqssa

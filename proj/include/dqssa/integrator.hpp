#pragma once

// Fixed-step implicit Euler for the full model, the standard reduction and
// the delayed reductions (method of steps on a uniform history grid).

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dqssa/delay.hpp"
#include "dqssa/history.hpp"
#include "dqssa/model.hpp"
#include "dqssa/trajectory.hpp"

namespace dqssa {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

namespace detail {

template <int N>
bool all_finite(const Vec<N>& v) {
    return v.array().isFinite().all();
}

/// Newton iteration on residual(z) = 0 with a forward-difference Jacobian,
/// started at z0. Converged when |residual|_inf <= tol (1 + |z|_inf).
template <int N, class Residual>
Vec<N> newton_solve(Residual&& residual, Vec<N> z, double tol, int max_iters, double t) {
    using Mat = Eigen::Matrix<double, N, N>;
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    Vec<N> g = residual(z);
    double res = g.template lpNorm<Eigen::Infinity>();
    for (int it = 0;; ++it) {
        if (!all_finite<N>(z) || !std::isfinite(res)) {
            throw NonFinite(t);
        }
        if (res <= tol * (1.0 + z.template lpNorm<Eigen::Infinity>())) {
            return z;
        }
        if (it >= max_iters) {
            throw NonConvergence(t, res);
        }
        Mat jac;
        for (int j = 0; j < N; ++j) {
            const double h = sqrt_eps * std::max(1.0, std::abs(z[j]));
            Vec<N> zp = z;
            zp[j] += h;
            jac.col(j) = (residual(zp) - g) / (zp[j] - z[j]);
        }
        // Halve the step while the scaled residual grows; the delayed
        // residual is only piecewise smooth, so full steps can cycle.
        const Vec<N> weight = (1.0 + z.array().abs()).inverse().matrix();
        auto merit = [&weight](const Vec<N>& r) { return r.cwiseProduct(weight).template lpNorm<Eigen::Infinity>(); };
        const double merit0 = merit(g);
        const Vec<N> step = jac.partialPivLu().solve(g);
        double lambda = 1.0;
        Vec<N> trial = z - step;
        Vec<N> g_trial = residual(trial);
        for (int k = 0; k < 8 && !(merit(g_trial) < merit0); ++k) {
            lambda *= 0.5;
            trial = z - lambda * step;
            g_trial = residual(trial);
        }
        const double res_trial = g_trial.template lpNorm<Eigen::Infinity>();
        z = trial;
        g = g_trial;
        res = res_trial;
    }
}

} // namespace detail

/// One implicit Euler step y1 = y0 + dt f(t1, y1), warm-started at y0.
template <int N, class Rhs>
Vec<N> implicit_euler_step(Rhs&& rhs, double t1, const Vec<N>& y0, double dt, const SolverConfig& cfg) {
    auto residual = [&](const Vec<N>& y) -> Vec<N> { return y - y0 - dt * rhs(t1, y); };
    return detail::newton_solve<N>(residual, y0, cfg.newton_tol, cfg.max_iters, t1);
}

/// Integrates y' = rhs(t, y) from t = 0 and samples every cfg.stride steps.
template <int N, class Rhs>
Trajectory integrate_ode(Rhs&& rhs, const Vec<N>& y0, const SolverConfig& cfg,
                         std::vector<std::string> channels, std::string system = "ode") {
    cfg.validate();
    if (channels.size() != static_cast<std::size_t>(N)) {
        throw InvalidArgument("channel names do not match state dimension");
    }
    Trajectory traj(std::move(channels), std::move(system));
    traj.set_config(cfg);
    const std::size_t steps = cfg.steps();
    traj.reserve(steps / static_cast<std::size_t>(cfg.stride) + 1);

    Vec<N> y = y0;
    traj.push(0.0, std::span<const double>(y.data(), N));
    for (std::size_t n = 1; n <= steps; ++n) {
        const double t1 = static_cast<double>(n) * cfg.dt;
        y = implicit_euler_step<N>(rhs, t1, y, cfg.dt, cfg);
        if (n % static_cast<std::size_t>(cfg.stride) == 0) {
            traj.push(t1, std::span<const double>(y.data(), N));
        }
    }
    return traj;
}

inline std::vector<std::string> full_channel_names() {
    return {FullState::names.begin(), FullState::names.end()};
}

/// Full nine-species model from the all-genes-inactive initial condition.
inline Trajectory integrate_full(const RateConstants& p, const SolverConfig& cfg) {
    auto rhs = [&p](double, const Vec<9>& y) -> Vec<9> {
        std::array<double, 9> a;
        for (int i = 0; i < 9; ++i) a[i] = y[i];
        const auto d = full_rhs(FullState::from_array(a), p).to_array();
        return Eigen::Map<const Vec<9>>(d.data());
    };
    const auto init = FullState::initial().to_array();
    return integrate_ode<9>(rhs, Eigen::Map<const Vec<9>>(init.data()), cfg, full_channel_names(),
                            "original");
}

/// Standard quasi-steady-state reduction, (R, C) = (0, 0) at t = 0.
inline Trajectory integrate_reduced(const RateConstants& p, const SolverConfig& cfg) {
    auto rhs = [&p](double, const Vec<2>& y) -> Vec<2> {
        const auto d = reduced_rhs({y[0], y[1]}, p);
        return {d.R, d.C};
    };
    return integrate_ode<2>(rhs, Vec<2>::Zero(), cfg, {"R", "C"}, "qss");
}

/// Channels emitted by integrate_dde.
inline std::vector<std::string> dde_channel_names() {
    return {"R", "C", "A_tau", "A_s", "D_A_tau", "D_R_tau", "M_A_tau", "M_R_tau", "tau_A"};
}

/// Delayed reduction by the method of steps.
///
/// Each step solves for (R, C, A^tau, A^s) at t_{n+1} simultaneously: lags
/// shorter than dt read the history between the committed sample at t_n and
/// the current iterate, which is attached as a provisional sample. The
/// history is constant for t <= 0: A^tau = R = C = 0 and A^s frozen at its
/// value at t = 0.
inline Trajectory integrate_dde(DelayVariant variant, const RateConstants& p, const SolverConfig& cfg) {
    cfg.validate();
    Trajectory traj(dde_channel_names(), "dqss-" + std::string(to_string(variant)));
    traj.set_config(cfg);
    const std::size_t steps = cfg.steps();
    traj.reserve(steps / static_cast<std::size_t>(cfg.stride) + 1);

    auto emit = [&traj](double t, const ReducedState& s, const DelayedAux& aux, double a_tau, double a_s) {
        const std::array<double, 9> row{s.R,         s.C,         a_tau,       a_s,          aux.D_A_tau,
                                        aux.D_R_tau, aux.M_A_tau, aux.M_R_tau, aux.delays.A};
        traj.push(t, row);
    };

    // A^s(0) reads only the A^tau history, which is identically zero before 0.
    DelayedAux aux0;
    {
        HistoryStore seed(0.0, cfg.dt, {0.0, 0.0, 0.0, 0.0});
        aux0 = delayed_aux_at(0.0, 0.0, seed, variant, p);
    }
    const double a_s0 = aux0.A_s_now;
    HistoryStore hist(0.0, cfg.dt, {0.0, a_s0, 0.0, 0.0});
    hist.reserve(steps + 1);
    hist.append({0.0, a_s0, 0.0, 0.0});
    emit(0.0, {0.0, 0.0}, aux0, 0.0, a_s0);

    Vec<4> z(0.0, 0.0, 0.0, a_s0);  // R, C, A^tau, A^s
    DelayedDerivative last;
    for (std::size_t n = 1; n <= steps; ++n) {
        const double t1 = static_cast<double>(n) * cfg.dt;
        const Vec<4> z0 = z;
        hist.clear_provisional();
        const Delays lags = delays_at(variant, t1, z0[0], hist, p);
        auto residual = [&](const Vec<4>& w) -> Vec<4> {
            hist.set_provisional({w[2], w[3], w[0], w[1]});
            last = delayed_rhs_with(t1, {w[0], w[1]}, hist, lags, p);
            return {w[0] - z0[0] - cfg.dt * last.dR, w[1] - z0[1] - cfg.dt * last.dC,
                    w[2] - last.aux.A_tau, w[3] - last.aux.A_s_now};
        };
        z = detail::newton_solve<4>(residual, z0, cfg.newton_tol, cfg.max_iters, t1);

        hist.set_provisional({z[2], z[3], z[0], z[1]});
        last = delayed_rhs_with(t1, {z[0], z[1]}, hist, lags, p);
        const Delays& d = last.aux.delays;
        if (!(d.D_A > 0.0 && d.D_R > 0.0 && d.M_A > 0.0 && d.M_R > 0.0 && d.A > 0.0)) {
            throw Error("non-positive delay at t = " + std::to_string(t1));
        }
        hist.append({z[2], z[3], z[0], z[1]});
        if (n % static_cast<std::size_t>(cfg.stride) == 0) {
            emit(t1, {z[0], z[1]}, last.aux, z[2], z[3]);
        }
    }
    return traj;
}

/// The five simulated systems.
enum class System { original, qss, dqss_derived, dqss_simplified, dqss_constant };

inline constexpr std::array<System, 5> all_systems{System::original, System::qss, System::dqss_derived,
                                                   System::dqss_simplified, System::dqss_constant};

inline std::string_view to_string(System s) {
    switch (s) {
    case System::original:
        return "original";
    case System::qss:
        return "qss";
    case System::dqss_derived:
        return "dqss-derived";
    case System::dqss_simplified:
        return "dqss-simplified";
    case System::dqss_constant:
        return "dqss-constant";
    }
    return "?";
}

inline std::optional<System> parse_system(std::string_view s) {
    for (System sys : all_systems) {
        if (to_string(sys) == s) return sys;
    }
    return std::nullopt;
}

inline std::optional<DelayVariant> delay_variant_of(System s) {
    switch (s) {
    case System::dqss_derived:
        return DelayVariant::derived;
    case System::dqss_simplified:
        return DelayVariant::simplified;
    case System::dqss_constant:
        return DelayVariant::constant;
    default:
        return std::nullopt;
    }
}

/// Runs one system; the result carries that system's native channels.
inline Trajectory simulate(System s, const RateConstants& p, const SolverConfig& cfg) {
    p.validate();
    switch (s) {
    case System::original:
        return integrate_full(p, cfg);
    case System::qss:
        return integrate_reduced(p, cfg);
    default:
        return integrate_dde(*delay_variant_of(s), p, cfg);
    }
}

} // namespace dqssa

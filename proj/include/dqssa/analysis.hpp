#pragma once

// Period extraction, peak alignment and the relative error metrics used to
// compare a reduction against the full model.

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dqssa/integrator.hpp"
#include "dqssa/model.hpp"
#include "dqssa/trajectory.hpp"

namespace dqssa {

struct PeriodEstimate {
    double period = 0.0;
    std::vector<double> peak_times;
    int n_cycles_used = 0;
};

struct PeakOptions {
    /// Peaks must rise above min + prominence * (max - min) of the window.
    double prominence = 0.5;
    /// Largest accepted relative standard deviation of peak spacings.
    double max_spread = 0.01;
    int min_cycles = 3;
};

/// Refined times of the local maxima of `y` at or after `skip`.
inline std::vector<double> find_peaks(const std::vector<double>& t, const std::vector<double>& y, double skip,
                                      double prominence = 0.5) {
    std::vector<double> peaks;
    const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), skip) - t.begin());
    if (first >= t.size() || t.size() - first < 3) {
        return peaks;
    }
    const auto [lo, hi] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(first), y.end());
    const double threshold = *lo + prominence * (*hi - *lo);
    for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > threshold) {
            // Three-point parabola through the discrete maximum.
            const double curv = y[i - 1] - 2.0 * y[i] + y[i + 1];
            double offset = 0.0;
            if (curv < 0.0) {
                offset = std::clamp(0.5 * (y[i - 1] - y[i + 1]) / curv, -0.5, 0.5);
            }
            const double h = offset >= 0.0 ? t[i + 1] - t[i] : t[i] - t[i - 1];
            peaks.push_back(t[i] + offset * h);
        }
    }
    return peaks;
}

/// Mean peak spacing of `component` after the transient `skip`.
///
/// Throws NoOscillation for a flat signal and IrregularPeriod when fewer than
/// `min_cycles` full cycles are visible or the spacings scatter too much.
inline PeriodEstimate detect_period(const Trajectory& traj, std::string_view component, double skip,
                                    const PeakOptions& opt = {}) {
    const auto& y = traj.column(component);
    const auto& t = traj.times();
    const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), skip) - t.begin());
    if (first < y.size()) {
        const auto [lo, hi] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(first), y.end());
        const double scale = std::max({std::abs(*lo), std::abs(*hi), 1e-300});
        if (*hi - *lo <= 1e-9 * scale) {
            throw NoOscillation("component " + std::string(component) + " is flat after t = " +
                                std::to_string(skip));
        }
    }

    PeriodEstimate est;
    est.peak_times = find_peaks(t, y, skip, opt.prominence);
    const int cycles = static_cast<int>(est.peak_times.size()) - 1;
    if (cycles < opt.min_cycles) {
        throw IrregularPeriod("too few cycles after t = " + std::to_string(skip) + ": found " +
                              std::to_string(std::max(cycles, 0)) + ", need " +
                              std::to_string(opt.min_cycles));
    }
    std::vector<double> gaps(est.peak_times.size() - 1);
    for (std::size_t i = 0; i + 1 < est.peak_times.size(); ++i) {
        gaps[i] = est.peak_times[i + 1] - est.peak_times[i];
    }
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    double var = 0.0;
    for (double g : gaps) var += (g - mean) * (g - mean);
    const double spread = std::sqrt(var / static_cast<double>(gaps.size())) / mean;
    if (spread > opt.max_spread) {
        throw IrregularPeriod("peak spacing of " + std::string(component) + " varies by " +
                              std::to_string(100.0 * spread) + " %");
    }
    est.period = mean;
    est.n_cycles_used = cycles;
    return est;
}

enum class ReconstructMode { qss, delayed };

/// Fills in all nine species of a reduced trajectory. Trajectories that
/// already carry the nine species are returned unchanged.
inline Trajectory reconstruct_full(const Trajectory& traj, ReconstructMode mode, const RateConstants& p) {
    const auto names = full_channel_names();
    if (std::all_of(names.begin(), names.end(), [&](const std::string& n) { return traj.has(n); })) {
        return traj;
    }
    Trajectory out(names, traj.system());
    out.set_config(traj.config());
    out.reserve(traj.size());
    const auto& R = traj.column("R");
    const auto& C = traj.column("C");

    if (mode == ReconstructMode::qss) {
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const auto row = qss_full_state({R[i], C[i]}, p).to_array();
            out.push(traj.times()[i], row);
        }
        return out;
    }

    const auto& a_tau = traj.column("A_tau");
    const auto& da = traj.column("D_A_tau");
    const auto& dr = traj.column("D_R_tau");
    const auto& ma = traj.column("M_A_tau");
    const auto& mr = traj.column("M_R_tau");
    for (std::size_t i = 0; i < traj.size(); ++i) {
        DelayedAux aux;
        aux.D_A_tau = da[i];
        aux.D_R_tau = dr[i];
        aux.M_A_tau = ma[i];
        aux.M_R_tau = mr[i];
        aux.A_tau = a_tau[i];
        const auto row = delayed_full_state(aux, {R[i], C[i]}).to_array();
        out.push(traj.times()[i], row);
    }
    return out;
}

inline Trajectory reconstruct_full(const Trajectory& traj, System s, const RateConstants& p) {
    return reconstruct_full(traj, s == System::qss ? ReconstructMode::qss : ReconstructMode::delayed, p);
}

/// Time warp that carries g onto f: g~(t) = g(g_ref + (t - f_ref) * p_approx / p_orig).
struct Alignment {
    double f_ref = 0.0;
    double g_ref = 0.0;
    double p_orig = 0.0;
    double p_approx = 0.0;

    double source_time(double t) const { return g_ref + (t - f_ref) * (p_approx / p_orig); }
};

/// Rescales g to period p_orig and shifts it so that its reference peak
/// (first peak of `component` after `skip`) lands on f's reference peak.
/// The result lives on f's grid, restricted to times whose preimage lies in
/// g's time range.
inline Trajectory align_scale(const Trajectory& f, const Trajectory& g, double p_orig, double p_approx,
                              double skip, std::string_view component = "R", Alignment* used = nullptr) {
    if (!(p_orig > 0.0 && p_approx > 0.0)) {
        throw InvalidArgument("periods must be positive");
    }
    const auto fp = find_peaks(f.times(), f.column(component), skip);
    const auto gp = find_peaks(g.times(), g.column(component), skip);
    if (fp.empty() || gp.empty()) {
        throw NoOscillation("no reference peak after t = " + std::to_string(skip));
    }
    const Alignment al{fp.front(), gp.front(), p_orig, p_approx};
    if (used) *used = al;

    Trajectory out(g.channels(), g.system());
    out.set_config(g.config());
    const double g0 = g.times().front();
    const double g1 = g.times().back();
    std::vector<double> row(g.channels().size());
    for (double t : f.times()) {
        const double s = al.source_time(t);
        if (s < g0 || s > g1) continue;
        for (std::size_t k = 0; k < row.size(); ++k) row[k] = g.interpolate(k, s);
        out.push(t, row);
    }
    return out;
}

/// ||f - g||_{L2(a,b)} / ||f||_{L2(a,b)} summed over f's channels, by the
/// trapezoid rule on f's grid inside [a, b] plus the two end points.
inline double rel_err_l2(const Trajectory& f, const Trajectory& g, double a, double b) {
    if (!(b > a)) throw WindowOutOfRange("empty L2 window");
    for (const Trajectory* tr : {&f, &g}) {
        const double tol = 1e-9 * std::max(1.0, std::abs(b));
        if (tr->empty() || a < tr->times().front() - tol || b > tr->times().back() + tol) {
            throw WindowOutOfRange("window [" + std::to_string(a) + ", " + std::to_string(b) +
                                   "] not covered by trajectory " + tr->system());
        }
    }
    std::vector<double> nodes{a};
    for (double t : f.times()) {
        if (t > a && t < b) nodes.push_back(t);
    }
    nodes.push_back(b);

    double diff2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t k = 0; k < f.channels().size(); ++k) {
        const std::size_t gk = g.index_of(f.channels()[k]);
        double prev_d = 0.0;
        double prev_r = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double fv = f.interpolate(k, nodes[i]);
            const double d = fv - g.interpolate(gk, nodes[i]);
            const double dd = d * d;
            const double rr = fv * fv;
            if (i > 0) {
                const double h = nodes[i] - nodes[i - 1];
                diff2 += 0.5 * h * (dd + prev_d);
                ref2 += 0.5 * h * (rr + prev_r);
            }
            prev_d = dd;
            prev_r = rr;
        }
    }
    if (ref2 == 0.0) throw InvalidArgument("reference trajectory vanishes on the window");
    return std::sqrt(diff2 / ref2);
}

inline double rel_err_period(double p_orig, double p_approx) { return std::abs(p_orig - p_approx) / p_orig; }

struct ErrorReport {
    std::string system;
    double p_orig = 0.0;
    double p_approx = 0.0;
    double rel_err_period = 0.0;
    double rel_err_l2 = 0.0;
    std::pair<double, double> window;
};

struct CompareOptions {
    double skip = 100.0;
    std::string component = "R";
    PeakOptions peaks;
};

/// Compares two nine-channel trajectories: f is the reference.
inline ErrorReport compare(const Trajectory& f, const Trajectory& g, const CompareOptions& opt = {}) {
    ErrorReport rep;
    rep.system = g.system();
    rep.p_orig = detect_period(f, opt.component, opt.skip, opt.peaks).period;
    rep.p_approx = detect_period(g, opt.component, opt.skip, opt.peaks).period;
    rep.rel_err_period = rel_err_period(rep.p_orig, rep.p_approx);
    Alignment al;
    const Trajectory g_tilde = align_scale(f, g, rep.p_orig, rep.p_approx, opt.skip, opt.component, &al);
    rep.window = {al.f_ref, al.f_ref + rep.p_orig};
    rep.rel_err_l2 = rel_err_l2(f, g_tilde, rep.window.first, rep.window.second);
    return rep;
}

struct Table1 {
    PeriodEstimate original;
    std::vector<ErrorReport> rows;  ///< qss, derived, simplified, constant
};

/// Simulates every system (concurrently when `parallel`) and compares each
/// reduction against the full model.
inline Table1 build_table1(const RateConstants& p, const SolverConfig& cfg, const CompareOptions& opt = {},
                           bool parallel = true) {
    const auto policy = parallel ? std::launch::async : std::launch::deferred;
    std::vector<std::future<Trajectory>> runs;
    for (System s : all_systems) {
        runs.push_back(std::async(policy, [s, &p, &cfg] { return reconstruct_full(simulate(s, p, cfg), s, p); }));
    }
    std::vector<Trajectory> trajs;
    for (auto& r : runs) trajs.push_back(r.get());

    Table1 table;
    table.original = detect_period(trajs[0], opt.component, opt.skip, opt.peaks);
    for (std::size_t i = 1; i < trajs.size(); ++i) {
        table.rows.push_back(compare(trajs[0], trajs[i], opt));
    }
    return table;
}

} // namespace dqssa

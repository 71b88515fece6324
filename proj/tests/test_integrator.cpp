#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dqssa/analysis.hpp"
#include "dqssa/integrator.hpp"

using namespace dqssa;

namespace {

const RateConstants kRates{};

double max_diff(const Trajectory& a, const Trajectory& b, std::string_view ch, double from) {
    // Both trajectories are sampled on the same output times.
    const auto& x = a.column(ch);
    const auto& y = b.column(ch);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.times()[i] >= from) m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

} // namespace

TEST(ImplicitEuler, LinearDecayMatchesClosedForm) {
    SolverConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 5.0;
    cfg.stride = 1;
    cfg.newton_tol = 1e-14;
    auto rhs = [](double, const Vec<1>& y) -> Vec<1> { return -y; };
    const Trajectory tr = integrate_ode<1>(rhs, Vec<1>(1.0), cfg, {"y"});
    ASSERT_EQ(tr.size(), 51u);
    for (std::size_t n = 0; n < tr.size(); ++n) {
        EXPECT_NEAR(tr.column("y")[n], std::pow(1.1, -static_cast<double>(n)), 1e-12);
    }
}

TEST(ImplicitEuler, StiffLinearSystemStaysBounded) {
    SolverConfig cfg;
    cfg.dt = 0.5;
    cfg.t_end = 50.0;
    cfg.stride = 1;
    auto rhs = [](double, const Vec<2>& y) -> Vec<2> { return {-1e6 * (y[0] - y[1]), -y[1]}; };
    const Trajectory tr = integrate_ode<2>(rhs, Vec<2>(1.0, 1.0), cfg, {"a", "b"});
    for (double v : tr.column("a")) EXPECT_LE(std::abs(v), 1.0);
}

TEST(ImplicitEuler, RejectsBadConfig) {
    SolverConfig cfg;
    cfg.dt = 0.0;
    EXPECT_THROW(integrate_full(kRates, cfg), InvalidArgument);
    cfg = {};
    cfg.stride = 0;
    EXPECT_THROW(integrate_full(kRates, cfg), InvalidArgument);
}

TEST(FullModel, GenePairsConservedOverLongRun) {
    const Trajectory tr = integrate_full(kRates, {});
    const auto& da = tr.column("D_A");
    const auto& dap = tr.column("D_Ap");
    const auto& dr = tr.column("D_R");
    const auto& drp = tr.column("D_Rp");
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        worst = std::max({worst, std::abs(da[i] + dap[i] - 1.0), std::abs(dr[i] + drp[i] - 1.0)});
    }
    EXPECT_LE(worst, 1e-8);
    EXPECT_DOUBLE_EQ(tr.times().back(), 300.0);
}

TEST(FullModel, FirstSampleIsInitialCondition) {
    SolverConfig cfg;
    cfg.t_end = 0.1;
    const Trajectory tr = integrate_full(kRates, cfg);
    const auto init = FullState::initial().to_array();
    for (std::size_t k = 0; k < 9; ++k) EXPECT_EQ(tr.column(k)[0], init[k]);
    EXPECT_EQ(tr.size(), 11u);
}

TEST(FullModel, Deterministic) {
    SolverConfig cfg;
    cfg.t_end = 30.0;
    const Trajectory a = integrate_full(kRates, cfg);
    const Trajectory b = integrate_full(kRates, cfg);
    for (std::size_t k = 0; k < 9; ++k) EXPECT_EQ(a.column(k), b.column(k));
}

TEST(FullModel, FirstOrderSelfConvergence) {
    // Differences between successive halvings of dt shrink by about 2.
    auto run = [](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 30.0;
        cfg.stride = static_cast<int>(std::lround(0.04 / dt));
        return integrate_full(kRates, cfg);
    };
    const Trajectory a = run(0.004);
    const Trajectory b = run(0.002);
    const Trajectory c = run(0.001);
    const double e1 = max_diff(a, b, "R", 0.0);
    const double e2 = max_diff(b, c, "R", 0.0);
    const double order = std::log2(e1 / e2);
    EXPECT_GT(order, 0.7);
    EXPECT_LT(order, 1.3);
}

TEST(ReducedModel, FirstStepProducesRepressor) {
    SolverConfig cfg;
    cfg.t_end = 1e-3;
    cfg.stride = 1;
    const Trajectory tr = integrate_reduced(kRates, cfg);
    EXPECT_GT(tr.column("R")[1], 0.0);
    EXPECT_GT(tr.column("C")[1], 0.0);
}

TEST(DelayedModel, ChannelsAndLagsStayFeasible) {
    SolverConfig cfg;
    cfg.t_end = 60.0;
    for (auto v : {DelayVariant::derived, DelayVariant::simplified, DelayVariant::constant}) {
        const Trajectory tr = integrate_dde(v, kRates, cfg);
        EXPECT_EQ(tr.channels(), dde_channel_names());
        for (double tau : tr.column("tau_A")) {
            EXPECT_GT(tau, 0.0);
            EXPECT_LE(tau, 1.0 / kRates.delta_A);
        }
        for (double r : tr.column("R")) EXPECT_GE(r, -1e-9);
        for (double a : tr.column("A_tau")) EXPECT_GE(a, -1e-9);
    }
}

TEST(DelayedModel, Deterministic) {
    SolverConfig cfg;
    cfg.t_end = 20.0;
    const Trajectory a = integrate_dde(DelayVariant::derived, kRates, cfg);
    const Trajectory b = integrate_dde(DelayVariant::derived, kRates, cfg);
    for (std::size_t k = 0; k < a.channels().size(); ++k) EXPECT_EQ(a.column(k), b.column(k));
}

TEST(Systems, NamesRoundTrip) {
    for (System s : all_systems) EXPECT_EQ(parse_system(to_string(s)), s);
    EXPECT_FALSE(parse_system("dqss").has_value());
    EXPECT_EQ(simulate(System::dqss_constant, kRates, SolverConfig{1e-3, 0.01}).system(), "dqss-constant");
}

TEST(Systems, SimulateValidatesRates) {
    RateConstants p;
    p.theta_R = -3.0;
    EXPECT_THROW(simulate(System::original, p, {}), InvalidArgument);
}

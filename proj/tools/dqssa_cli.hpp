#pragma once

// Command-line front end: simulate, compare, table1, fig1.
//
// Exit codes: 0 success, 2 usage error, 3 solver or analysis failure,
// 4 IO or config parse failure.

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dqssa/analysis.hpp"
#include "dqssa/integrator.hpp"
#include "dqssa/io.hpp"

namespace dqssa::cli {

enum ExitCode : int { ok = 0, usage = 2, solver_failure = 3, io_failure = 4 };

struct Options {
    std::string system = "original";
    double t_end = 300.0;
    double dt = 1e-3;
    double skip = 100.0;
    int stride = 10;
    std::string out;
    std::string format = "csv";
    std::string config;
};

inline ModelConfig resolve_config(const Options& o, const CLI::App& sub) {
    ModelConfig cfg;
    std::string path = o.config;
    if (path.empty()) {
        if (const char* env = std::getenv("DQSSA_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) cfg = load_config(path);
    // Explicit flags win over the config file.
    if (sub.count("--t-end") || path.empty()) cfg.solver.t_end = o.t_end;
    if (sub.count("--dt") || path.empty()) cfg.solver.dt = o.dt;
    cfg.solver.stride = o.stride;
    cfg.solver.validate();
    cfg.rates.validate();
    return cfg;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    return f;
}

/// Reference trajectory and one reduction, both with all nine species.
inline std::pair<Trajectory, Trajectory> run_pair(System s, const ModelConfig& cfg) {
    Trajectory f = simulate(System::original, cfg.rates, cfg.solver);
    Trajectory g = reconstruct_full(simulate(s, cfg.rates, cfg.solver), s, cfg.rates);
    return {std::move(f), std::move(g)};
}

/// D_R, M_R and R of the full model next to those of a reduction.
inline Trajectory figure1_panel(const Trajectory& f, const Trajectory& g) {
    Trajectory panel({"D_R_orig", "M_R_orig", "R_orig", "D_R_approx", "M_R_approx", "R_approx"});
    const auto& fd = f.column("D_R");
    const auto& fm = f.column("M_R");
    const auto& fr = f.column("R");
    const std::size_t gd = g.index_of("D_R");
    const std::size_t gm = g.index_of("M_R");
    const std::size_t gr = g.index_of("R");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double t = f.times()[i];
        const std::array<double, 6> row{fd[i], fm[i], fr[i], g.interpolate(gd, t), g.interpolate(gm, t),
                                        g.interpolate(gr, t)};
        panel.push(t, row);
    }
    return panel;
}

inline void write_figure1_svg(const std::string& path, const std::string& title, const Trajectory& panel) {
    std::vector<PlotPanel> plots;
    for (const char* name : {"D_R", "M_R", "R"}) {
        const std::string n(name);
        plots.push_back({n,
                         {{n + " original", &panel.times(), &panel.column(n + "_orig"), false},
                          {n + " reduced", &panel.times(), &panel.column(n + "_approx"), true}}});
    }
    auto f = open_out(path);
    write_svg(f, title, plots);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Delayed quasi-steady-state reductions of a circadian oscillator"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::string> systems{"original", "qss", "dqss-derived", "dqss-simplified", "dqss-constant"};
    auto common = [&](CLI::App* sub) {
        sub->add_option("--t-end", o.t_end, "Simulated time [h]")->check(CLI::PositiveNumber);
        sub->add_option("--dt", o.dt, "Implicit Euler step [h]")->check(CLI::PositiveNumber);
        sub->add_option("--stride", o.stride, "Emit every n-th step")->check(CLI::PositiveNumber);
        sub->add_option("--config", o.config, "key = value parameter file (default: $DQSSA_CONFIG)");
    };

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one system and write its nine species");
    common(simulate_cmd);
    simulate_cmd->add_option("--system", o.system, "System to simulate")->check(CLI::IsMember(systems));
    simulate_cmd->add_option("--out", o.out, "Output file")->required();
    simulate_cmd->add_option("--format", o.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

    auto* compare_cmd = app.add_subcommand("compare", "Period and L2 error of one reduction");
    common(compare_cmd);
    compare_cmd->add_option("--system", o.system, "Reduced system")
        ->check(CLI::IsMember({"qss", "dqss-derived", "dqss-simplified", "dqss-constant"}))
        ->required();
    compare_cmd->add_option("--skip", o.skip, "Transient to discard [h]")->check(CLI::NonNegativeNumber);
    compare_cmd->add_option("--out", o.out, "Optional CSV report");

    auto* table_cmd = app.add_subcommand("table1", "Periods and relative errors of all reductions");
    common(table_cmd);
    table_cmd->add_option("--skip", o.skip, "Transient to discard [h]")->check(CLI::NonNegativeNumber);
    table_cmd->add_option("--out", o.out, "CSV report; a .txt rendering is written next to it");

    auto* fig_cmd = app.add_subcommand("fig1", "D_R, M_R, R of the full model against two reductions");
    common(fig_cmd);
    fig_cmd->add_option("--out", o.out, "Output prefix")->required();
    fig_cmd->add_option("--format", o.format, "csv or svg (svg also writes csv)")
        ->check(CLI::IsMember({"csv", "svg"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (simulate_cmd->parsed()) {
            const ModelConfig cfg = resolve_config(o, *simulate_cmd);
            const System sys = *parse_system(o.system);
            const Trajectory traj = reconstruct_full(simulate(sys, cfg.rates, cfg.solver), sys, cfg.rates);
            if (o.format == "svg") {
                std::vector<PlotPanel> plots;
                for (const auto& c : traj.channels()) {
                    plots.push_back({c, {{c, &traj.times(), &traj.column(c), false}}});
                }
                auto f = open_out(o.out);
                write_svg(f, std::string(to_string(sys)), plots);
            } else {
                auto f = open_out(o.out);
                write_csv(f, traj);
            }
            out << "wrote " << traj.size() << " samples of " << to_string(sys) << " to " << o.out << '\n';
        } else if (compare_cmd->parsed()) {
            const ModelConfig cfg = resolve_config(o, *compare_cmd);
            const auto [f, g] = run_pair(*parse_system(o.system), cfg);
            CompareOptions copt;
            copt.skip = o.skip;
            const ErrorReport r = compare(f, g, copt);
            out << std::setprecision(6) << "system          " << r.system << '\n'
                << "p_orig [h]      " << r.p_orig << '\n'
                << "p_approx [h]    " << r.p_approx << '\n'
                << "RelErr(period)  " << 100.0 * r.rel_err_period << " %\n"
                << "RelErr(L2)      " << 100.0 * r.rel_err_l2 << " %\n"
                << "window [h]      " << r.window.first << " .. " << r.window.second << '\n';
            if (!o.out.empty()) {
                auto file = open_out(o.out);
                file << std::setprecision(12)
                     << "system,p_orig_h,p_approx_h,rel_err_period_pct,rel_err_l2_pct,window_a_h,window_b_h\n"
                     << r.system << ',' << r.p_orig << ',' << r.p_approx << ',' << 100.0 * r.rel_err_period << ','
                     << 100.0 * r.rel_err_l2 << ',' << r.window.first << ',' << r.window.second << '\n';
            }
        } else if (table_cmd->parsed()) {
            const ModelConfig cfg = resolve_config(o, *table_cmd);
            CompareOptions copt;
            copt.skip = o.skip;
            const Table1 table = build_table1(cfg.rates, cfg.solver, copt);
            write_table1_text(out, table);
            if (!o.out.empty()) {
                {
                    auto f = open_out(o.out);
                    write_table1_csv(f, table);
                }
                auto txt = open_out(o.out + ".txt");
                write_table1_text(txt, table);
            }
        } else if (fig_cmd->parsed()) {
            const ModelConfig cfg = resolve_config(o, *fig_cmd);
            const Trajectory f = simulate(System::original, cfg.rates, cfg.solver);
            const Trajectory qss =
                reconstruct_full(simulate(System::qss, cfg.rates, cfg.solver), System::qss, cfg.rates);
            const Trajectory dqss = reconstruct_full(simulate(System::dqss_derived, cfg.rates, cfg.solver),
                                                     System::dqss_derived, cfg.rates);
            const Trajectory left = figure1_panel(f, qss);
            const Trajectory right = figure1_panel(f, dqss);
            {
                auto lf = open_out(o.out + "_left.csv");
                write_csv(lf, left);
                auto rf = open_out(o.out + "_right.csv");
                write_csv(rf, right);
            }
            if (o.format == "svg") {
                write_figure1_svg(o.out + "_left.svg", "full model (solid) vs standard QSS (dashed)", left);
                write_figure1_svg(o.out + "_right.svg", "full model (solid) vs delayed QSS (dashed)", right);
            }
            out << "wrote " << o.out << "_left and " << o.out << "_right (" << left.size() << " rows each)\n";
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io_failure;
    } catch (const ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return io_failure;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const Error& e) {
        err << "failure: " << e.what() << '\n';
        return solver_failure;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return solver_failure;
    }
    return ok;
}

} // namespace dqssa::cli

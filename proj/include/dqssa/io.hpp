#pragma once

// Config files, CSV trajectories and reports, SVG line plots.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dqssa/analysis.hpp"
#include "dqssa/error.hpp"
#include "dqssa/model.hpp"
#include "dqssa/trajectory.hpp"

namespace dqssa {

class IoError : public Error {
public:
    using Error::Error;
};

struct ModelConfig {
    RateConstants rates;
    SolverConfig solver;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace detail

/// Reads flat `key = value` lines on top of `base`. `#` starts a comment.
/// Keys are the rate constant names plus dt, t_end, newton_tol, max_iters;
/// every value must be positive.
inline ModelConfig parse_config(std::istream& in, ModelConfig base = {}) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
        const std::string key(detail::trim(view.substr(0, eq)));
        const std::string_view text = detail::trim(view.substr(eq + 1));
        double value = 0.0;
        if (!detail::parse_double(text, value) || !std::isfinite(value)) {
            throw ParseError(lineno, "value of '" + key + "' is not a number");
        }
        if (!(value > 0.0)) throw ParseError(lineno, "value of '" + key + "' must be positive");

        bool known = false;
        base.rates.for_each([&](std::string_view name, double& field) {
            if (name == key) {
                field = value;
                known = true;
            }
        });
        if (key == "dt") {
            base.solver.dt = value, known = true;
        } else if (key == "t_end") {
            base.solver.t_end = value, known = true;
        } else if (key == "newton_tol") {
            base.solver.newton_tol = value, known = true;
        } else if (key == "max_iters") {
            if (value != std::floor(value) || value > std::numeric_limits<int>::max()) {
                throw ParseError(lineno, "max_iters must be an integer");
            }
            base.solver.max_iters = static_cast<int>(value), known = true;
        }
        if (!known) throw UnknownKey(lineno, key);
    }
    return base;
}

inline ModelConfig load_config(const std::string& path, ModelConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    return parse_config(in, base);
}

/// `t,<channel>...` header then one row per sample, 17 significant digits.
inline void write_csv(std::ostream& out, const Trajectory& traj) {
    out << "t";
    for (const auto& c : traj.channels()) out << ',' << c;
    out << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << traj.times()[i];
        for (std::size_t k = 0; k < traj.channels().size(); ++k) out << ',' << traj.column(k)[i];
        out << '\n';
    }
}

inline Trajectory read_csv(std::istream& in, std::string system = {}) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty CSV");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.emplace_back(detail::trim(cell));
    }
    if (header.empty() || header.front() != "t") throw ParseError(1, "first CSV column must be 't'");
    Trajectory traj(std::vector<std::string>(header.begin() + 1, header.end()), std::move(system));
    std::vector<double> row(header.size() - 1);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        double t = 0.0;
        std::size_t k = 0;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            if (!detail::parse_double(detail::trim(cell), v)) throw ParseError(lineno, "bad number '" + cell + "'");
            if (k == 0) {
                t = v;
            } else if (k <= row.size()) {
                row[k - 1] = v;
            }
            ++k;
        }
        if (k != header.size()) throw ParseError(lineno, "wrong number of CSV fields");
        traj.push(t, row);
    }
    return traj;
}

/// Machine-readable period and error table; the reference row has empty
/// error fields.
inline void write_table1_csv(std::ostream& out, const Table1& table) {
    out << "system,period_h,rel_err_period_pct,rel_err_l2_pct\n";
    out << std::setprecision(12);
    out << "original," << table.original.period << ",,\n";
    for (const auto& r : table.rows) {
        out << r.system << ',' << r.p_approx << ',' << 100.0 * r.rel_err_period << ',' << 100.0 * r.rel_err_l2
            << '\n';
    }
}

inline void write_table1_text(std::ostream& out, const Table1& table) {
    constexpr int label = 16;
    constexpr int col = 17;
    auto cell = [&](const std::string& s) { out << std::setw(col) << s; };
    auto fmt = [](double v, int prec, const char* unit) {
        std::ostringstream ss;
        ss << std::fixed << std::setprecision(prec) << v << unit;
        return ss.str();
    };
    out << std::left << std::setw(label) << "" << std::right;
    cell("original");
    for (const auto& r : table.rows) cell(r.system);
    out << '\n' << std::left << std::setw(label) << "period" << std::right;
    cell(fmt(table.original.period, 1, " h"));
    for (const auto& r : table.rows) cell(fmt(r.p_approx, 1, " h"));
    out << '\n' << std::left << std::setw(label) << "RelErr(period)" << std::right;
    cell("---");
    for (const auto& r : table.rows) cell(fmt(100.0 * r.rel_err_period, 2, " %"));
    out << '\n' << std::left << std::setw(label) << "RelErr(L2)" << std::right;
    cell("---");
    for (const auto& r : table.rows) cell(fmt(100.0 * r.rel_err_l2, 1, " %"));
    out << '\n';
}

struct PlotSeries {
    std::string label;
    const std::vector<double>* t = nullptr;
    const std::vector<double>* y = nullptr;
    bool dashed = false;
};

struct PlotPanel {
    std::string title;
    std::vector<PlotSeries> series;
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// Stacked line plots, one panel per entry, sharing the time axis.
inline void write_svg(std::ostream& out, const std::string& title, const std::vector<PlotPanel>& panels) {
    constexpr double width = 720.0;
    constexpr double panel_h = 180.0;
    constexpr double left = 70.0;
    constexpr double right = 150.0;
    constexpr double top = 40.0;
    constexpr double gap = 30.0;
    const double height = top + static_cast<double>(panels.size()) * (panel_h + gap) + 20.0;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    out << std::setprecision(6);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << detail::xml_escape(title) << "</text>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        double t0 = std::numeric_limits<double>::infinity(), t1 = -t0, y0 = t0, y1 = -t0;
        for (const auto& s : panel.series) {
            if (s.t->empty()) continue;
            t0 = std::min(t0, s.t->front());
            t1 = std::max(t1, s.t->back());
            const auto [lo, hi] = std::minmax_element(s.y->begin(), s.y->end());
            y0 = std::min(y0, *lo);
            y1 = std::max(y1, *hi);
        }
        if (!(t1 > t0)) t1 = t0 + 1.0;
        if (!(y1 > y0)) y1 = y0 + 1.0;
        const double ox = left;
        const double oy = top + static_cast<double>(p) * (panel_h + gap);
        const double w = width - left - right;
        auto px = [&](double t) { return ox + (t - t0) / (t1 - t0) * w; };
        auto py = [&](double y) { return oy + panel_h - (y - y0) / (y1 - y0) * panel_h; };

        out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
        out << "<rect x=\"" << ox << "\" y=\"" << oy << "\" width=\"" << w << "\" height=\"" << panel_h
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ox - 8 << "\" y=\"" << oy + 10 << "\" text-anchor=\"end\">" << y1 << "</text>\n";
        out << "<text x=\"" << ox - 8 << "\" y=\"" << oy + panel_h << "\" text-anchor=\"end\">" << y0
            << "</text>\n";
        out << "<text x=\"" << ox << "\" y=\"" << oy + panel_h + 14 << "\">" << t0 << " h</text>\n";
        out << "<text x=\"" << ox + w << "\" y=\"" << oy + panel_h + 14 << "\" text-anchor=\"end\">" << t1
            << " h</text>\n";
        out << "<text x=\"" << ox + w / 2 << "\" y=\"" << oy - 6 << "\" text-anchor=\"middle\">"
            << detail::xml_escape(panel.title) << "</text>\n";

        for (std::size_t k = 0; k < panel.series.size(); ++k) {
            const auto& s = panel.series[k];
            const char* color = colors[k % 4];
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
            if (s.dashed) out << " stroke-dasharray=\"6,4\"";
            out << " points=\"";
            // Thin long series to at most ~2000 vertices.
            const std::size_t n = s.t->size();
            const std::size_t step = std::max<std::size_t>(1, n / 2000);
            for (std::size_t i = 0; i < n; i += step) out << px((*s.t)[i]) << ',' << py((*s.y)[i]) << ' ';
            out << "\"/>\n";
            const double ly = oy + 16.0 + 16.0 * static_cast<double>(k);
            out << "<line x1=\"" << ox + w + 10 << "\" y1=\"" << ly << "\" x2=\"" << ox + w + 40 << "\" y2=\"" << ly
                << "\" stroke=\"" << color << "\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
            out << "<text x=\"" << ox + w + 45 << "\" y=\"" << ly + 4 << "\">" << detail::xml_escape(s.label)
                << "</text>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

} // namespace dqssa

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dqssa/error.hpp"

namespace dqssa {

/// Fixed-step solver settings. Times in hours.
struct SolverConfig {
    double dt = 1e-3;
    double t_end = 300.0;
    double newton_tol = 1e-10;
    int max_iters = 50;
    /// Every `stride`-th step is emitted to the output trajectory.
    int stride = 10;

    void validate() const {
        if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("dt must be positive");
        if (!(std::isfinite(t_end) && t_end > 0.0)) throw InvalidArgument("t_end must be positive");
        if (!(std::isfinite(newton_tol) && newton_tol > 0.0))
            throw InvalidArgument("newton_tol must be positive");
        if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
        if (stride < 1) throw InvalidArgument("stride must be at least 1");
    }

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }
};

/// Sampled multi-channel time series. Columns are stored per channel.
class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(std::vector<std::string> channels, std::string system = {})
        : system_(std::move(system)), channels_(std::move(channels)), columns_(channels_.size()) {}

    const std::string& system() const noexcept { return system_; }
    void set_system(std::string s) { system_ = std::move(s); }
    const SolverConfig& config() const noexcept { return cfg_; }
    void set_config(const SolverConfig& c) { cfg_ = c; }

    const std::vector<std::string>& channels() const noexcept { return channels_; }
    const std::vector<double>& times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    bool has(std::string_view name) const {
        return std::find(channels_.begin(), channels_.end(), name) != channels_.end();
    }

    std::size_t index_of(std::string_view name) const {
        auto it = std::find(channels_.begin(), channels_.end(), name);
        if (it == channels_.end()) {
            throw MissingChannel("trajectory has no channel '" + std::string(name) + "'");
        }
        return static_cast<std::size_t>(it - channels_.begin());
    }

    const std::vector<double>& column(std::string_view name) const { return columns_[index_of(name)]; }
    const std::vector<double>& column(std::size_t i) const { return columns_.at(i); }
    std::vector<double>& column(std::size_t i) { return columns_.at(i); }

    void reserve(std::size_t n) {
        times_.reserve(n);
        for (auto& c : columns_) c.reserve(n);
    }

    /// Appends one sample; `values` must have one entry per channel, and `t`
    /// must exceed the previous sample time.
    void push(double t, std::span<const double> values) {
        if (values.size() != channels_.size()) {
            throw InvalidArgument("sample width does not match channel count");
        }
        if (!times_.empty() && !(t > times_.back())) {
            throw InvalidArgument("trajectory times must be strictly increasing");
        }
        times_.push_back(t);
        for (std::size_t i = 0; i < values.size(); ++i) columns_[i].push_back(values[i]);
    }

    /// Linear interpolation of a channel at time t (clamped to the end points).
    double interpolate(std::size_t channel, double t) const {
        const auto& y = columns_.at(channel);
        if (times_.empty()) throw InvalidArgument("interpolation on an empty trajectory");
        if (t <= times_.front()) return y.front();
        if (t >= times_.back()) return y.back();
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const auto hi = static_cast<std::size_t>(it - times_.begin());
        const auto lo = hi - 1;
        const double frac = (t - times_[lo]) / (times_[hi] - times_[lo]);
        return y[lo] + frac * (y[hi] - y[lo]);
    }

private:
    std::string system_;
    SolverConfig cfg_;
    std::vector<std::string> channels_;
    std::vector<double> times_;
    std::vector<std::vector<double>> columns_;
};

} // namespace dqssa

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqssa/error.hpp"

namespace dqssa {

/// Quantities recorded on the grid by the delayed integrator.
enum class Channel : std::size_t { A_tau = 0, A_s = 1, R = 2, C = 3 };

inline constexpr std::size_t channel_count = 4;

inline constexpr std::string_view channel_name(Channel c) {
    constexpr std::array<std::string_view, channel_count> names{"A_tau", "A_s", "R", "C"};
    return names[static_cast<std::size_t>(c)];
}

using ChannelValues = std::array<double, channel_count>;

/// Uniform-grid record of the delayed system's history.
///
/// Samples sit at t0 + i*dt. Every channel is constant (pre0) for t <= t0 and
/// piecewise linear between samples. One provisional sample at the next grid
/// point may be attached while that step is being solved; lookups beyond it
/// are refused.
class HistoryStore {
public:
    HistoryStore(double t0, double dt, const ChannelValues& pre0) : t0_(t0), dt_(dt), pre0_(pre0) {
        if (!(dt > 0.0)) {
            throw InvalidArgument("history step must be positive");
        }
    }

    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return samples_[0].size(); }
    const ChannelValues& pre0() const noexcept { return pre0_; }

    /// Time of grid sample i.
    double time_at(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * dt_; }

    double sample(Channel c, std::size_t i) const { return samples_[idx(c)].at(i); }

    void reserve(std::size_t n) {
        for (auto& s : samples_) {
            s.reserve(n);
        }
    }

    /// Commits the next grid sample and drops any provisional one.
    void append(const ChannelValues& v) {
        for (std::size_t k = 0; k < channel_count; ++k) {
            samples_[k].push_back(v[k]);
        }
        provisional_.reset();
    }

    void set_provisional(const ChannelValues& v) { provisional_ = v; }
    void clear_provisional() noexcept { provisional_.reset(); }
    bool has_provisional() const noexcept { return provisional_.has_value(); }

    double lookup(Channel c, double t) const { return lookup_impl(c, t, true); }

    /// Like lookup, but times past the newest committed sample read that
    /// sample (zero-order hold) instead of the provisional one.
    double lookup_committed(Channel c, double t) const { return lookup_impl(c, t, false); }

private:
    static constexpr std::size_t idx(Channel c) noexcept { return static_cast<std::size_t>(c); }

    double lookup_impl(Channel c, double t, bool use_provisional) const {
        const std::size_t k = idx(c);
        if (t <= t0_) {
            return pre0_[k];
        }
        const auto& s = samples_[k];
        const std::size_t n = s.size();
        if (n == 0) {
            throw HistoryLookupError("history lookup past t0 on an empty store");
        }
        // Grid positions are computed as t0 + i*dt; allow for round-off.
        constexpr double slack = 1e-9;
        const double pos = (t - t0_) / dt_;
        const double last = static_cast<double>(n - 1);
        if (pos > last && use_provisional && provisional_) {
            if (pos > last + 1.0 + slack) {
                throw HistoryLookupError("history lookup at t = " + std::to_string(t) +
                                         " is beyond the provisional sample");
            }
            const double frac = std::min(pos - last, 1.0);
            return s[n - 1] + frac * ((*provisional_)[k] - s[n - 1]);
        }
        if (pos > last + slack && use_provisional) {
            throw HistoryLookupError("history lookup at t = " + std::to_string(t) +
                                     " is beyond the newest sample");
        }
        if (pos >= last || n == 1) {
            return s[n - 1];
        }
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return s[i] + frac * (s[i + 1] - s[i]);
    }

    double t0_;
    double dt_;
    ChannelValues pre0_;
    std::array<std::vector<double>, channel_count> samples_;
    std::optional<ChannelValues> provisional_;
};

} // namespace dqssa

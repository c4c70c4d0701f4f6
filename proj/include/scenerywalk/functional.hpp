#pragma once

// The additive functional A_t = \int_0^t z(S_u) du along a simulated path,
// its clock-process view, per-site local times and the level-set slicing of
// occupation time.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "scenerywalk/numerics.hpp"
#include "scenerywalk/path.hpp"
#include "scenerywalk/scenery.hpp"

namespace scenerywalk {

/// Piecewise-linear, continuous, nondecreasing u -> A_u with A_0 = 0.
/// breakpoints[i] = (time_i, A(time_i)); slopes[i] applies on [time_i, time_{i+1}].
class ClockProcess {
public:
    struct Breakpoint {
        double time;
        double value;
    };

    ClockProcess() = default;
    ClockProcess(std::vector<Breakpoint> breakpoints, std::vector<double> slopes)
        : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)) {
        if (breakpoints_.size() != slopes_.size() + 1)
            throw std::invalid_argument("ClockProcess: need one more breakpoint than slopes");
    }

    const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& slopes() const { return slopes_; }
    double horizon() const { return breakpoints_.back().time; }
    double final_value() const { return breakpoints_.back().value; }

    /// A_u for 0 <= u <= horizon.
    double value_at(double u) const {
        if (u < 0.0 || u > horizon()) throw std::out_of_range("ClockProcess: time outside [0, horizon]");
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u,
                                   [](double t, const Breakpoint& b) { return t < b.time; });
        const auto i = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it)) - 1;
        if (i >= slopes_.size()) return breakpoints_.back().value;
        return breakpoints_[i].value + slopes_[i] * (u - breakpoints_[i].time);
    }

    /// First time u with A_u >= a (inverse clock). Requires 0 <= a <= final_value().
    double first_passage(double a) const {
        if (a < 0.0 || a > final_value()) throw std::out_of_range("ClockProcess: level outside the range of A");
        auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), a,
                                   [](const Breakpoint& b, double v) { return b.value < v; });
        if (it == breakpoints_.begin()) return 0.0;
        const auto i = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it)) - 1;
        return breakpoints_[i].time + (a - breakpoints_[i].value) / slopes_[i];
    }

private:
    std::vector<Breakpoint> breakpoints_{{0.0, 0.0}};
    std::vector<double> slopes_;
};

/// Exact clock process of `path` in the scenery `field`.
template <Scenery F>
ClockProcess clock(const F& field, const WalkPath& path) {
    std::vector<ClockProcess::Breakpoint> bps;
    std::vector<double> slopes;
    bps.reserve(path.events.size() + 2);
    slopes.reserve(path.events.size() + 1);
    bps.push_back({0.0, 0.0});
    CompensatedSum acc;
    path.for_each_sojourn(path.horizon, [&](const Site& x, double from, double to) {
        const double z = field.value(x);
        acc.add(z * (to - from));
        slopes.push_back(z);
        bps.push_back({to, acc.value()});
    });
    return {std::move(bps), std::move(slopes)};
}

struct FunctionalRecord {
    double horizon = 0.0;
    double additive = 0.0;  // A_t
    std::map<Site, double> local_times;
    std::int64_t max_range = 0;  // max ||S_u||_inf on [0, t]

    double total_time() const {
        CompensatedSum s;
        for (const auto& [x, l] : local_times) s.add(l);
        return s.value();
    }
};

/// A_t and the local times l_t(x) of `path` up to t <= horizon.
template <Scenery F>
FunctionalRecord local_times(const F& field, const WalkPath& path, double t) {
    if (t < 0.0 || t > path.horizon) throw std::domain_error("local_times: t must lie in [0, horizon]");
    FunctionalRecord rec;
    rec.horizon = t;
    std::map<Site, CompensatedSum> acc;
    CompensatedSum a;
    path.for_each_sojourn(t, [&](const Site& x, double from, double to) {
        acc[x].add(to - from);
        a.add(field.value(x) * (to - from));
        rec.max_range = std::max(rec.max_range, linf_norm(x));
    });
    rec.max_range = std::max(rec.max_range, linf_norm(path.start));
    for (auto& [x, s] : acc) rec.local_times.emplace(x, s.value());
    rec.additive = a.value();
    return rec;
}

/// Slice index of value z for thresholds t^{k eps}: the k with t^{k eps} <= z < t^{(k+1) eps},
/// clamped to [0, top].
inline int level_slice(double z, double log_t, double epsilon, int top) {
    const double k = std::floor(std::log(z) / (epsilon * log_t));
    return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(top)));
}

/// Occupation times l_t(H_k \ H_{k+1}) for k = 0..K with H_k = {z >= t^{k eps}}.
/// The last slice K collects everything with z >= t^{K eps}.
template <Scenery F>
std::vector<double> level_occupations(const F& field, const WalkPath& path, double t, double epsilon, int slices_top) {
    if (!(t > 1.0)) throw std::domain_error("level_occupations: need t > 1");
    if (!(epsilon > 0.0)) throw std::domain_error("level_occupations: epsilon must be positive");
    if (slices_top < 0) throw std::domain_error("level_occupations: K must be nonnegative");
    if (t > path.horizon) throw std::domain_error("level_occupations: t beyond path horizon");
    const double log_t = std::log(t);
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(slices_top) + 1);
    path.for_each_sojourn(t, [&](const Site& x, double from, double to) {
        acc[static_cast<std::size_t>(level_slice(field.value(x), log_t, epsilon, slices_top))].add(to - from);
    });
    std::vector<double> out;
    out.reserve(acc.size());
    for (const auto& s : acc) out.push_back(s.value());
    return out;
}

/// Default top slice K = floor(d mu / (eps alpha)): H_k is empty beyond it for the truncated field.
inline int default_slice_top(double alpha, int dim, double mu, double epsilon) {
    if (!(alpha > 0.0) || !(epsilon > 0.0)) throw std::domain_error("default_slice_top: alpha, epsilon must be positive");
    return static_cast<int>(std::floor(dim * mu / (epsilon * alpha)));
}

}  // namespace scenerywalk

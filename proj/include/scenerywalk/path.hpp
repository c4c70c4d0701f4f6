#pragma once

// Continuous-time lattice walks: the event-list trajectory type and the
// event-driven simulators (streaming and materialized).

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "scenerywalk/lattice.hpp"
#include "scenerywalk/rng.hpp"
#include "scenerywalk/scenery.hpp"

namespace scenerywalk {

struct Jump {
    double time = 0.0;
    Site site;
};

/// Right-continuous step trajectory on [0, horizon] started at `start`.
struct WalkPath {
    int dim = 1;
    Site start;
    std::vector<Jump> events;
    double horizon = 0.0;

    WalkPath() = default;
    WalkPath(Site s, double h) : dim(s.dim), start(s), horizon(h) {}

    const Site& position_at(double u) const {
        if (u < 0.0 || u > horizon) throw std::out_of_range("WalkPath::position_at: time outside [0, horizon]");
        auto it = std::upper_bound(events.begin(), events.end(), u,
                                   [](double t, const Jump& j) { return t < j.time; });
        return it == events.begin() ? start : std::prev(it)->site;
    }

    const Site& end_position() const { return events.empty() ? start : events.back().site; }

    std::size_t jump_count() const { return events.size(); }

    /// Calls fn(site, from, to) for each sojourn interval clipped to [0, t].
    template <class Fn>
    void for_each_sojourn(double t, Fn&& fn) const {
        double from = 0.0;
        const Site* at = &start;
        for (const auto& e : events) {
            if (e.time >= t) break;
            fn(*at, from, e.time);
            from = e.time;
            at = &e.site;
        }
        if (t > from) fn(*at, from, t);
    }
};

/// Checks the trajectory invariants: increasing jump times inside the
/// horizon and nearest-neighbour steps.
inline bool is_valid_path(const WalkPath& path) {
    if (!(path.horizon > 0.0) || path.start.dim != path.dim) return false;
    double last = 0.0;
    const Site* prev = &path.start;
    for (const auto& e : path.events) {
        if (!(e.time > last) || e.time > path.horizon) return false;
        if (e.site.dim != path.dim || l1_distance(e.site, *prev) != 1) return false;
        last = e.time;
        prev = &e.site;
    }
    return true;
}

/// Writes the event list as CSV: time,x1,...,xd (first row is the start at time 0).
inline void write_path_csv(std::ostream& os, const WalkPath& path) {
    os << "time";
    for (int i = 0; i < path.dim; ++i) os << ",x" << (i + 1);
    os << '\n' << std::setprecision(17);
    auto row = [&](double t, const Site& s) {
        os << t;
        for (int i = 0; i < path.dim; ++i) os << ',' << s.c[i];
        os << '\n';
    };
    row(0.0, path.start);
    for (const auto& e : path.events) row(e.time, e.site);
}

/// Continuous-time simple random walk with exponential(total_rate) holding
/// times and uniformly chosen neighbours. Calls on_sojourn(site, from, to)
/// for every sojourn in [0, horizon] and on_jump(time, site) after each jump.
template <class OnSojourn, class OnJump>
void walk_srw(const Site& start, double total_rate, double horizon, RngStream& rng, OnSojourn&& on_sojourn,
              OnJump&& on_jump) {
    Site x = start;
    const auto dirs = static_cast<std::uint32_t>(2 * x.dim);
    double now = 0.0;
    while (true) {
        const double next = now + rng.exponential(total_rate);
        if (next > horizon) {
            on_sojourn(static_cast<const Site&>(x), now, horizon);
            return;
        }
        on_sojourn(static_cast<const Site&>(x), now, next);
        step(x, rng.below(dirs));
        now = next;
        on_jump(now, static_cast<const Site&>(x));
    }
}

template <class OnSojourn>
void walk_srw(const Site& start, double total_rate, double horizon, RngStream& rng, OnSojourn&& on_sojourn) {
    walk_srw(start, total_rate, horizon, rng, std::forward<OnSojourn>(on_sojourn), [](double, const Site&) {});
}

inline WalkPath simulate_srw(const Site& start, double total_rate, double horizon, RngStream& rng) {
    if (!(horizon > 0.0)) throw std::domain_error("simulate_srw: horizon must be positive");
    if (!(total_rate > 0.0)) throw std::domain_error("simulate_srw: total rate must be positive");
    WalkPath path(start, horizon);
    walk_srw(
        start, total_rate, horizon, rng, [](const Site&, double, double) {},
        [&](double t, const Site& x) { path.events.push_back({t, x}); });
    return path;
}

inline WalkPath simulate_srw(int dim, double total_rate, double horizon, RngStream& rng) {
    return simulate_srw(Site::origin(dim), total_rate, horizon, rng);
}

/// Variable speed walk on Z^{1+d} in the layered conductances: rate z(x_2)
/// across each edge along e_1 and rate 1 across each transverse edge. The
/// field lives on the transverse lattice Z^d. Holding times are drawn per
/// site from the exact exit rate 2 z(x_2) + 2d.
template <Scenery F, class OnSojourn, class OnJump>
void walk_vsrw(const F& field, const Site& start, double horizon, RngStream& rng, OnSojourn&& on_sojourn,
               OnJump&& on_jump) {
    const int d = field.dim();
    if (start.dim != d + 1) throw std::invalid_argument("walk_vsrw: start must live in Z^{1+d}");
    Site x = start;
    double z = field.value(transverse(x));
    double now = 0.0;
    while (true) {
        const double exit_rate = 2.0 * z + 2.0 * d;
        const double next = now + rng.exponential(exit_rate);
        if (next > horizon) {
            on_sojourn(static_cast<const Site&>(x), now, horizon);
            return;
        }
        on_sojourn(static_cast<const Site&>(x), now, next);
        const double r = rng.uniform() * exit_rate;
        if (r < z) {
            ++x.c[0];
        } else if (r < 2.0 * z) {
            --x.c[0];
        } else {
            auto k = static_cast<unsigned>(r - 2.0 * z);
            k = std::min<unsigned>(k, static_cast<unsigned>(2 * d - 1));
            x.c[1 + (k >> 1)] += (k & 1U) ? -1 : 1;
            z = field.value(transverse(x));
        }
        now = next;
        on_jump(now, static_cast<const Site&>(x));
    }
}

template <Scenery F>
WalkPath simulate_vsrw(const F& field, double horizon, RngStream& rng) {
    if (!(horizon > 0.0)) throw std::domain_error("simulate_vsrw: horizon must be positive");
    const Site start = Site::origin(field.dim() + 1);
    WalkPath path(start, horizon);
    walk_vsrw(
        field, start, horizon, rng, [](const Site&, double, double) {},
        [&](double t, const Site& x) { path.events.push_back({t, x}); });
    return path;
}

}  // namespace scenerywalk

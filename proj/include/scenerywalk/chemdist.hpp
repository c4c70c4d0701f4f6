#pragma once

// Chemical distance on Z^{1+d} with layered conductances: vertical edges at
// transverse site x_2 weigh 1/(sqrt(z(x_2)) v 1), transverse edges weigh 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <vector>

#include "scenerywalk/lattice.hpp"
#include "scenerywalk/parallel.hpp"
#include "scenerywalk/rng.hpp"
#include "scenerywalk/scenery.hpp"
#include "scenerywalk/stats.hpp"

namespace scenerywalk {

inline double edge_weight(double conductance) {
    if (!(conductance > 0.0)) throw std::domain_error("edge_weight: conductance must be positive");
    return 1.0 / std::max(std::sqrt(conductance), 1.0);
}

/// Product of integer intervals [lo_i, hi_i] in Z^{1+d}.
struct Box {
    Site lo;
    Site hi;

    int dim() const { return lo.dim; }
    bool contains(const Site& x) const {
        for (int i = 0; i < lo.dim; ++i)
            if (x.c[i] < lo.c[i] || x.c[i] > hi.c[i]) return false;
        return true;
    }
    std::int64_t extent(int i) const { return hi.c[i] - lo.c[i] + 1; }
    double site_count() const {
        double n = 1.0;
        for (int i = 0; i < lo.dim; ++i) n *= static_cast<double>(extent(i));
        return n;
    }
    std::size_t index(const Site& x) const {
        std::size_t idx = 0;
        for (int i = 0; i < lo.dim; ++i)
            idx = idx * static_cast<std::size_t>(extent(i)) + static_cast<std::size_t>(x.c[i] - lo.c[i]);
        return idx;
    }
    Site site(std::size_t idx) const {
        Site x(lo.dim);
        for (int i = lo.dim - 1; i >= 0; --i) {
            const auto e = static_cast<std::size_t>(extent(i));
            x.c[i] = lo.c[i] + static_cast<std::int64_t>(idx % e);
            idx /= e;
        }
        return x;
    }
};

/// Bounding box of {x, y} widened by `margin` in every coordinate.
inline Box bounding_box(const Site& x, const Site& y, std::int64_t margin = 0) {
    Box b{Site(x.dim), Site(x.dim)};
    for (int i = 0; i < x.dim; ++i) {
        b.lo.c[i] = std::min(x.c[i], y.c[i]) - margin;
        b.hi.c[i] = std::max(x.c[i], y.c[i]) + margin;
    }
    return b;
}

/// Box with the default sufficiency margin 2 ||x - y||_1 in every direction.
inline Box sufficient_box(const Site& x, const Site& y) { return bounding_box(x, y, 2 * l1_distance(x, y)); }

/// True if the unrestricted infimum is guaranteed to be attained in `box`.
/// Vertical detours never help (weights depend on x_2 only) and a transverse
/// detour of m beyond the bounding box costs 2m > |x_1 - y_1| once m exceeds
/// half the vertical separation, which already beats the straight path.
inline bool box_is_sufficient(const Box& box, const Site& x, const Site& y) {
    const std::int64_t need = (std::llabs(x.c[0] - y.c[0]) + 1) / 2;
    const Box want = bounding_box(x, y, 0);
    if (want.lo.c[0] < box.lo.c[0] || want.hi.c[0] > box.hi.c[0]) return false;
    for (int i = 1; i < x.dim; ++i)
        if (want.lo.c[i] - need < box.lo.c[i] || want.hi.c[i] + need > box.hi.c[i]) return false;
    return true;
}

struct DistanceResult {
    double distance = 0.0;
    bool box_warning = false;  // box may be too small for the unrestricted infimum
};

/// Single-source Dijkstra inside `box`; returns distances to every box site (box order).
template <Scenery F>
std::vector<double> box_distances(const F& field, const Box& box, const Site& source,
                                  double site_budget = kDefaultSiteBudget) {
    if (field.dim() + 1 != box.dim()) throw std::invalid_argument("box_distances: field must live on Z^d for a box in Z^{1+d}");
    if (!box.contains(source)) throw std::domain_error("box_distances: source outside box");
    if (box.site_count() > site_budget) throw ResourceError("box_distances: box exceeds the configured site budget");
    const std::size_t n = static_cast<std::size_t>(box.site_count());
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    const std::size_t s = box.index(source);
    dist[s] = 0.0;
    heap.push({0.0, s});
    const auto dirs = static_cast<unsigned>(2 * box.dim());
    while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > dist[u]) continue;
        const Site x = box.site(u);
        const double vertical = edge_weight(field.value(transverse(x)));
        for (unsigned k = 0; k < dirs; ++k) {
            Site y = x;
            step(y, k);
            if (!box.contains(y)) continue;
            const double w = (k >> 1) == 0 ? vertical : 1.0;
            const std::size_t v = box.index(y);
            if (du + w < dist[v]) {
                dist[v] = du + w;
                heap.push({dist[v], v});
            }
        }
    }
    return dist;
}

/// Shortest weighted path length between x and y restricted to `box`.
template <Scenery F>
DistanceResult chemical_distance(const F& field, const Box& box, const Site& x, const Site& y) {
    if (!box.contains(x) || !box.contains(y)) throw std::domain_error("chemical_distance: endpoints must lie in the box");
    DistanceResult r;
    r.box_warning = !box_is_sufficient(box, x, y);
    if (x == y) return r;
    r.distance = box_distances(field, box, x)[box.index(y)];
    return r;
}

/// Shortest path length on all of Z^{1+d}, exploiting the layered structure:
/// an optimal path does all its vertical steps at one transverse site w, so
///   d(x, y) = min_w ||x_2 - w||_1 + ||w - y_2||_1 + |x_1 - y_1| / sqrt(z(w)).
/// Sites w are scanned in rings of growing l_inf distance r from the bounding
/// box of {x_2, y_2}; ring r costs at least ||x_2 - y_2||_1 + 2r.
template <Scenery F>
double layered_distance(const F& field, const Site& x, const Site& y) {
    const int d = field.dim();
    if (x.dim != d + 1 || y.dim != d + 1) throw std::invalid_argument("layered_distance: points must live in Z^{1+d}");
    const Site x2 = transverse(x), y2 = transverse(y);
    const double base = static_cast<double>(l1_distance(x2, y2));
    const double vertical = static_cast<double>(std::llabs(x.c[0] - y.c[0]));
    if (vertical == 0.0) return base;
    Site lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo.c[i] = std::min(x2.c[i], y2.c[i]);
        hi.c[i] = std::max(x2.c[i], y2.c[i]);
    }
    double best = base + vertical;
    auto consider = [&](const Site& w) {
        const double detour = static_cast<double>(l1_distance(x2, w) + l1_distance(w, y2));
        if (detour >= best) return;
        best = std::min(best, detour + vertical * edge_weight(field.value(w)));
    };
    for (std::int64_t r = 0; base + 2.0 * static_cast<double>(r) < best; ++r) {
        if (d == 1) {
            if (r == 0) {
                for (std::int64_t v = lo.c[0]; v <= hi.c[0]; ++v) consider(Site{v});
            } else {
                consider(Site{lo.c[0] - r});
                consider(Site{hi.c[0] + r});
            }
            continue;
        }
        // Walk the widened box and keep the sites at l_inf distance exactly r.
        Site w(d);
        for (int i = 0; i < d; ++i) w.c[i] = lo.c[i] - r;
        while (true) {
            std::int64_t gap = 0;
            for (int i = 0; i < d; ++i)
                gap = std::max({gap, lo.c[i] - w.c[i], w.c[i] - hi.c[i]});
            if (gap == r) consider(w);
            int i = d - 1;
            while (i >= 0 && w.c[i] == hi.c[i] + r) {
                w.c[i] = lo.c[i] - r;
                --i;
            }
            if (i < 0) break;
            ++w.c[i];
        }
    }
    return best;
}

/// Closest lattice point to t^delta e_1 + t^gamma e_2 in Z^{1+d}; halves round away from zero.
inline Site displacement_target(int dim, double t, double delta, double gamma) {
    Site y(dim + 1);
    y.c[0] = std::llround(std::pow(t, delta));
    y.c[1] = std::llround(std::pow(t, gamma));
    return y;
}

struct ChemdistPoint {
    double t;
    std::uint64_t seed;
    double distance;
};

struct ChemdistScaling {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    std::vector<ChemdistPoint> points;
};

/// Regresses log d(0, target(t)) on log t over t_grid x seeds, for the fields
/// produced by make_field(seed).
template <class MakeField>
ChemdistScaling chemdist_scaling_with(MakeField&& make_field, int dim, double delta, double gamma,
                                      const std::vector<double>& t_grid, const std::vector<std::uint64_t>& seeds,
                                      int jobs = 1) {
    if (!(delta > 0.5)) throw std::domain_error("chemdist_scaling: requires delta > 1/2");
    if (t_grid.size() < 2 || seeds.empty()) throw std::domain_error("chemdist_scaling: need >= 2 times and >= 1 seed");
    const std::size_t cells = t_grid.size() * seeds.size();
    const auto dists = run_replicas(cells, jobs, [&](std::uint64_t c) {
        const double t = t_grid[c / seeds.size()];
        const auto field = make_field(seeds[c % seeds.size()]);
        return layered_distance(field, Site::origin(dim + 1), displacement_target(dim, t, delta, gamma));
    });
    ChemdistScaling out;
    std::vector<double> xs, ys;
    for (std::size_t c = 0; c < cells; ++c) {
        const double t = t_grid[c / seeds.size()];
        out.points.push_back({t, seeds[c % seeds.size()], dists[c]});
        xs.push_back(t);
        ys.push_back(dists[c]);
    }
    const LineFit fit = fit_loglog(xs, ys);
    out.slope = fit.slope;
    out.slope_stderr = fit.slope_stderr;
    out.intercept = fit.intercept;
    return out;
}

/// Scaling fit for Pareto fields with the given seeds.
inline ChemdistScaling chemdist_scaling(double alpha, int dim, double delta, double gamma,
                                        const std::vector<double>& t_grid, const std::vector<std::uint64_t>& seeds,
                                        int jobs = 1) {
    return chemdist_scaling_with([&](std::uint64_t s) { return SceneryField(alpha, dim, s); }, dim, delta, gamma,
                                 t_grid, seeds, jobs);
}

}  // namespace scenerywalk

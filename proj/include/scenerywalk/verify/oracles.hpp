#pragma once

// Slow reference implementations used only to check the fast ones.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "scenerywalk/chemdist.hpp"
#include "scenerywalk/lattice.hpp"
#include "scenerywalk/scenery.hpp"

namespace scenerywalk::oracle {

/// Chemical distance by enumerating every simple nearest-neighbour path from
/// x to y inside `box`. Exponential; only for boxes with a handful of sites.
template <Scenery F>
double brute_force_distance(const F& field, const Box& box, const Site& x, const Site& y, double max_sites = 16) {
    if (box.site_count() > max_sites) throw std::domain_error("brute_force_distance: box too large");
    if (!box.contains(x) || !box.contains(y)) throw std::domain_error("brute_force_distance: endpoints outside box");
    const auto n = static_cast<std::size_t>(box.site_count());
    std::vector<char> on_path(n, 0);
    double best = std::numeric_limits<double>::infinity();
    const auto dirs = static_cast<unsigned>(2 * box.dim());
    auto dfs = [&](auto&& self, const Site& u, double len) -> void {
        if (u == y) {
            best = std::min(best, len);
            return;
        }
        const double vertical = edge_weight(field.value(transverse(u)));
        for (unsigned k = 0; k < dirs; ++k) {
            Site v = u;
            step(v, k);
            if (!box.contains(v)) continue;
            const std::size_t iv = box.index(v);
            if (on_path[iv]) continue;
            on_path[iv] = 1;
            self(self, v, len + ((k >> 1) == 0 ? vertical : 1.0));
            on_path[iv] = 0;
        }
    };
    on_path[box.index(x)] = 1;
    dfs(dfs, x, 0.0);
    return best;
}

/// All boxes in Z^{1+d} with extents e_i >= 1 and at most `max_sites` sites,
/// anchored at the origin.
inline std::vector<Box> small_boxes(int total_dim, double max_sites) {
    std::vector<Box> out;
    std::vector<std::int64_t> ext(static_cast<std::size_t>(total_dim), 1);
    while (true) {
        double n = 1.0;
        for (auto e : ext) n *= static_cast<double>(e);
        if (n <= max_sites) {
            Box b{Site(total_dim), Site(total_dim)};
            for (int i = 0; i < total_dim; ++i) b.hi.c[i] = ext[static_cast<std::size_t>(i)] - 1;
            out.push_back(b);
        }
        int i = total_dim - 1;
        while (i >= 0 && ext[static_cast<std::size_t>(i)] >= static_cast<std::int64_t>(max_sites)) {
            ext[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++ext[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace scenerywalk::oracle

#pragma once

// Heavy-tailed i.i.d. scenery z: Z^d -> [1, inf) evaluated lazily from a
// counter-based hash, plus the extreme-value and level-set queries on it.
//
// Bit-exact field definition (reproducible by other implementations):
//   h   = mix64(seed ^ 0x6a09e667f3bcc909)
//   for i in 0..d-1:  h = mix64((h + 0x9e3779b97f4a7c15 * (i + 1)) ^ zigzag(x_i))
//   u   = ((h >> 11) + 1) * 2^-53            in (0, 1]
//   z   = max(1, u^(-1/alpha))
// where mix64 is the SplitMix64 finalizer and zigzag(v) = (v << 1) ^ (v >> 63).

#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scenerywalk/lattice.hpp"
#include "scenerywalk/rng.hpp"

namespace scenerywalk {

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SceneryLaw { ParetoExact };

inline std::string to_string(SceneryLaw law) {
    switch (law) {
        case SceneryLaw::ParetoExact: return "pareto_exact";
    }
    return "unknown";
}

inline SceneryLaw scenery_law_from_string(const std::string& s) {
    if (s == "pareto_exact") return SceneryLaw::ParetoExact;
    throw std::invalid_argument("unknown scenery law: " + s);
}

/// Anything that assigns a value z(x) >= 1 to the sites of Z^dim.
template <class F>
concept Scenery = requires(const F& f, const Site& x) {
    { f.value(x) } -> std::convertible_to<double>;
    { f.dim() } -> std::convertible_to<int>;
};

/// Inverse CDF of the reference law P(z > r) = r^-alpha for r >= 1.
inline double pareto_from_uniform(double u, double alpha) {
    if (u >= 1.0) return 1.0;
    return std::max(1.0, std::pow(u, -1.0 / alpha));
}

/// Hash uniform in (0, 1] attached to site x under `seed`.
inline double site_uniform(std::uint64_t seed, const Site& x) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    for (int i = 0; i < x.dim; ++i)
        h = mix64((h + kGolden * static_cast<std::uint64_t>(i + 1)) ^ zigzag(x.c[i]));
    return to_unit_open_closed(h);
}

/// The i.i.d. Pareto scenery. Immutable; safe to share across threads.
class SceneryField {
public:
    SceneryField(double alpha, int dim, std::uint64_t seed, SceneryLaw law = SceneryLaw::ParetoExact)
        : alpha_(alpha), dim_(dim), seed_(seed), law_(law) {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("SceneryField: alpha must be positive");
        if (dim < 1 || dim > kMaxDim) throw std::domain_error("SceneryField: unsupported dimension");
    }

    double alpha() const { return alpha_; }
    int dim() const { return dim_; }
    std::uint64_t seed() const { return seed_; }
    SceneryLaw law() const { return law_; }

    double uniform_at(const Site& x) const { return site_uniform(seed_, x); }
    double value(const Site& x) const { return pareto_from_uniform(uniform_at(x), alpha_); }

    bool operator==(const SceneryField&) const = default;

private:
    double alpha_;
    int dim_;
    std::uint64_t seed_;
    SceneryLaw law_;
};

/// z == c everywhere (degenerate law used for overrides in checks).
class ConstantField {
public:
    ConstantField(int dim, double c) : dim_(dim), c_(c) {
        if (!(c >= 1.0)) throw std::domain_error("ConstantField: value must be >= 1");
    }
    int dim() const { return dim_; }
    double value(const Site&) const { return c_; }

private:
    int dim_;
    double c_;
};

/// Explicit finite table of values; every other site takes `fallback`.
class TableField {
public:
    TableField(int dim, std::map<Site, double> values, double fallback = 1.0)
        : dim_(dim), values_(std::move(values)), fallback_(fallback) {
        for (const auto& [site, v] : values_)
            if (!(v >= 1.0)) throw std::domain_error("TableField: values must be >= 1");
    }
    int dim() const { return dim_; }
    double value(const Site& x) const {
        auto it = values_.find(x);
        return it == values_.end() ? fallback_ : it->second;
    }

private:
    int dim_;
    std::map<Site, double> values_;
    double fallback_;
};

/// Memoizes a one-dimensional field on a growing window around the origin.
/// Not thread-safe; meant to live inside a single replica.
template <Scenery F>
class LineCache {
public:
    explicit LineCache(const F& field) : field_(&field) {}

    double value(std::int64_t x) {
        const std::int64_t idx = x + offset_;
        if (idx < 0 || idx >= static_cast<std::int64_t>(cache_.size())) grow(x);
        double& v = cache_[static_cast<std::size_t>(x + offset_)];
        if (v == 0.0) v = field_->value(Site{x});
        return v;
    }

    void reset() {
        cache_.clear();
        offset_ = 0;
    }

private:
    void grow(std::int64_t x) {
        std::int64_t lo = -offset_;
        std::int64_t hi = lo + static_cast<std::int64_t>(cache_.size()) - 1;
        if (cache_.empty()) lo = hi = 0;
        const std::int64_t half = std::max<std::int64_t>(64, (hi - lo + 1));
        std::int64_t new_lo = std::min(lo, x - half);
        std::int64_t new_hi = std::max(hi, x + half);
        std::vector<double> grown(static_cast<std::size_t>(new_hi - new_lo + 1), 0.0);
        for (std::size_t i = 0; i < cache_.size(); ++i)
            grown[static_cast<std::size_t>(lo - new_lo) + i] = cache_[i];
        cache_.swap(grown);
        offset_ = -new_lo;
    }

    const F* field_;
    std::vector<double> cache_;
    std::int64_t offset_ = 0;
};

/// z(x) for the given field. Deterministic in (seed, x).
template <Scenery F>
double sample_site(const F& field, const Site& x) {
    return field.value(x);
}

struct BoxMax {
    double value = 1.0;
    Site argmax;
};

/// Maximum of z over ||x||_inf <= radius; ties go to the lexicographically smallest site.
template <Scenery F>
BoxMax box_max(const F& field, std::int64_t radius) {
    if (radius < 0) throw std::domain_error("box_max: radius must be nonnegative");
    BoxMax best{-1.0, Site::origin(field.dim())};
    for_each_in_box(field.dim(), radius, [&](const Site& x) {
        const double v = field.value(x);
        if (v > best.value) best = {v, x};
    });
    return best;
}

/// Number of sites of the cube of the given radius in Z^dim, as a double.
inline double box_site_count(int dim, std::int64_t radius) {
    return std::pow(2.0 * static_cast<double>(radius) + 1.0, dim);
}

/// P(max_{||x||_inf <= radius} z(x) >= s) = 1 - (1 - s^-alpha)^N for the exact Pareto law.
inline double exceedance_prob(double alpha, int dim, std::int64_t radius, double s) {
    if (!(s >= 1.0)) throw std::domain_error("exceedance_prob: threshold must be >= 1");
    if (!(alpha > 0.0)) throw std::domain_error("exceedance_prob: alpha must be positive");
    if (radius < 0) throw std::domain_error("exceedance_prob: radius must be nonnegative");
    const double n = box_site_count(dim, radius);
    const double tail = std::pow(s, -alpha);
    if (tail >= 1.0) return 1.0;
    return -std::expm1(n * std::log1p(-tail));
}

struct LevelSet {
    double threshold = 1.0;
    std::int64_t box_radius = 0;
    std::vector<Site> sites;  // lexicographic order

    bool contains(const Site& x) const { return std::binary_search(sites.begin(), sites.end(), x); }
};

inline constexpr double kDefaultSiteBudget = 5.0e7;

/// Exact enumeration of {x : ||x||_inf <= box_radius, z(x) >= threshold}.
template <Scenery F>
LevelSet level_set(const F& field, std::int64_t box_radius, double threshold,
                   double site_budget = kDefaultSiteBudget) {
    if (!(threshold >= 1.0)) throw std::domain_error("level_set: threshold must be >= 1");
    if (box_radius < 0) throw std::domain_error("level_set: radius must be nonnegative");
    if (box_site_count(field.dim(), box_radius) > site_budget)
        throw ResourceError("level_set: box exceeds the configured site budget");
    LevelSet out{threshold, box_radius, {}};
    for_each_in_box(field.dim(), box_radius, [&](const Site& x) {
        if (field.value(x) >= threshold) out.sites.push_back(x);
    });
    return out;
}

}  // namespace scenerywalk

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "scenerywalk/numerics.hpp"

namespace scenerywalk {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Monte Carlo probability with its Wilson 95% interval.
struct TailEstimate {
    double probability = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t successes = 0;
    std::uint64_t replicas = 0;
    double log_t = 0.0;

    double binomial_stderr() const {
        if (replicas == 0) return 0.0;
        return std::sqrt(probability * (1.0 - probability) / static_cast<double>(replicas));
    }
};

inline TailEstimate make_tail_estimate(std::uint64_t successes, std::uint64_t replicas, double t = 1.0) {
    if (replicas == 0) throw std::domain_error("make_tail_estimate: need at least one replica");
    const auto ci = wilson_interval(successes, replicas);
    const double p = static_cast<double>(successes) / static_cast<double>(replicas);
    return {p, std::min(ci.low, p), std::max(ci.high, p), successes, replicas, t > 0.0 ? std::log(t) : 0.0};
}

struct SampleSummary {
    double mean = 0.0;
    double std_error = 0.0;
    double variance = 0.0;
    std::size_t count = 0;
};

inline SampleSummary summarize(std::span<const double> xs) {
    SampleSummary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    CompensatedSum sum;
    for (double x : xs) sum.add(x);
    s.mean = sum.value() / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        CompensatedSum sq;
        for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
        s.variance = sq.value() / static_cast<double>(xs.size() - 1);
        s.std_error = std::sqrt(s.variance / static_cast<double>(xs.size()));
    }
    return s;
}

/// Linear-interpolated sample quantile (Hyndman-Fan type 7). Sorts a copy.
inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::domain_error("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw std::domain_error("quantile: q outside [0,1]");
    std::sort(xs.begin(), xs.end());
    const double h = (static_cast<double>(xs.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

/// Ordinary least squares y = intercept + slope x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_line: size mismatch");
    if (xs.size() < 2) throw std::domain_error("fit_line: need at least two points");
    const double n = static_cast<double>(xs.size());
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
    }
    const double mx = sx.value() / n, my = sy.value() / n;
    CompensatedSum sxx, sxy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx.add((xs[i] - mx) * (xs[i] - mx));
        sxy.add((xs[i] - mx) * (ys[i] - my));
    }
    if (sxx.value() <= 0.0) throw std::domain_error("fit_line: degenerate abscissae");
    LineFit f;
    f.points = xs.size();
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    if (xs.size() > 2) {
        CompensatedSum rss;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - f.intercept - f.slope * xs[i];
            rss.add(r * r);
        }
        f.slope_stderr = std::sqrt(rss.value() / (n - 2.0) / sxx.value());
    }
    return f;
}

/// Fit of log y against log x.
inline LineFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
    std::vector<double> lx, ly;
    lx.reserve(xs.size());
    ly.reserve(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::domain_error("fit_loglog: values must be positive");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    return fit_line(lx, ly);
}

/// Geometric grid lo, lo*r, ..., hi with `points` entries.
inline std::vector<double> geometric_grid(double lo, double hi, int points) {
    if (points < 2 || !(lo > 0.0) || !(hi > lo)) throw std::domain_error("geometric_grid: bad arguments");
    std::vector<double> g;
    const double r = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) g.push_back(i + 1 == points ? hi : lo * std::exp(r * i));
    return g;
}

/// One-sample Kolmogorov-Smirnov statistic given the model CDF values of the sample.
inline double ks_statistic(std::vector<double> cdf_values) {
    if (cdf_values.empty()) throw std::domain_error("ks_statistic: empty sample");
    std::sort(cdf_values.begin(), cdf_values.end());
    const double n = static_cast<double>(cdf_values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_values.size(); ++i) {
        const double f = cdf_values[i];
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

struct ChiSquareResult {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
    int bins = 0;
};

/// Two-sample chi-square homogeneity test on categorical counts. Categories
/// are ranked by pooled count; the smallest set covering `mass` of the pooled
/// sample (and each with pooled count >= min_pooled) form bins, the rest is
/// lumped into one remainder bin.
template <class Key>
ChiSquareResult chi_square_two_sample(const std::map<Key, std::uint64_t>& a, const std::map<Key, std::uint64_t>& b,
                                      double mass = 0.99, std::uint64_t min_pooled = 10) {
    std::map<Key, std::pair<double, double>> pooled;
    double na = 0.0, nb = 0.0;
    for (const auto& [k, c] : a) {
        pooled[k].first += static_cast<double>(c);
        na += static_cast<double>(c);
    }
    for (const auto& [k, c] : b) {
        pooled[k].second += static_cast<double>(c);
        nb += static_cast<double>(c);
    }
    if (na == 0.0 || nb == 0.0) throw std::domain_error("chi_square_two_sample: empty sample");
    std::vector<std::pair<double, double>> cells;
    cells.reserve(pooled.size());
    for (const auto& [k, v] : pooled) cells.push_back(v);
    std::stable_sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
        return x.first + x.second > y.first + y.second;
    });
    const double total = na + nb;
    std::vector<std::pair<double, double>> bins;
    std::pair<double, double> rest{0.0, 0.0};
    double covered = 0.0;
    for (const auto& c : cells) {
        const double pooled_count = c.first + c.second;
        if (covered < mass * total && pooled_count >= static_cast<double>(min_pooled)) {
            bins.push_back(c);
            covered += pooled_count;
        } else {
            rest.first += c.first;
            rest.second += c.second;
        }
    }
    if (rest.first + rest.second > 0.0) bins.push_back(rest);
    ChiSquareResult r;
    r.bins = static_cast<int>(bins.size());
    if (bins.size() < 2) {
        r.p_value = std::numeric_limits<double>::quiet_NaN();  // nothing to compare
        return r;
    }
    const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
    CompensatedSum stat;
    for (const auto& [x, y] : bins) {
        const double diff = ka * x - kb * y;
        stat.add(diff * diff / (x + y));
    }
    r.statistic = stat.value();
    r.degrees_of_freedom = na == nb ? r.bins - 1 : r.bins;
    boost::math::chi_squared dist(r.degrees_of_freedom);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    return r;
}

}  // namespace scenerywalk

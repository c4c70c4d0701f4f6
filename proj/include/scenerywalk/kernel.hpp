#pragma once

// Exact transition probabilities of the continuous-time simple random walk,
// evaluated in log space so that far off-diagonal values do not underflow.
//
// With total jump rate r on Z^d each coordinate is an independent walk with
// rate r/d, whose position at time u is Skellam(v/2, v/2), v = r u / d:
//   P(S_u = n) = e^{-v} I_{|n|}(v) = e^{-v} sum_k (v/2)^{2k+|n|} / (k! (k+|n|)!).

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "scenerywalk/lattice.hpp"
#include "scenerywalk/numerics.hpp"

namespace scenerywalk {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log P(N+ - N- = n) for independent N+-, N- ~ Poisson(v/2).
inline double log_skellam_pmf(double v, std::int64_t n) {
    if (v < 0.0) throw std::domain_error("log_skellam_pmf: v must be nonnegative");
    const double m = static_cast<double>(n < 0 ? -n : n);
    if (v == 0.0) return m == 0.0 ? 0.0 : kNegInf;
    const double lh = std::log(v / 2.0);
    auto term = [&](double k) { return (2.0 * k + m) * lh - std::lgamma(k + 1.0) - std::lgamma(k + m + 1.0); };
    const double k0 = std::floor((-m + std::sqrt(m * m + v * v)) / 2.0);
    const double peak = term(k0);
    double acc = 0.0;  // sum of exp(term - peak)
    for (double k = k0; k >= 0.0; k -= 1.0) {
        const double e = term(k) - peak;
        acc += std::exp(e);
        if (e < -45.0) break;
    }
    for (double k = k0 + 1.0;; k += 1.0) {
        const double e = term(k) - peak;
        acc += std::exp(e);
        if (e < -45.0) break;
    }
    return -v + peak + std::log(acc);
}

/// log P(S > n) for S Skellam(v/2, v/2), n >= 0.
inline double log_skellam_upper_tail(double v, std::int64_t n) {
    if (n < 0) throw std::domain_error("log_skellam_upper_tail: n must be nonnegative");
    double acc = kNegInf;
    for (std::int64_t m = n + 1;; ++m) {
        const double lp = log_skellam_pmf(v, m);
        acc = log_add(acc, lp);
        if (lp == kNegInf || lp < acc - 40.0) break;
    }
    return acc;
}

/// log p_u(0, x) for the walk on Z^dim with total jump rate `total_rate`.
inline double log_transition_prob(double total_rate, double u, const Site& x) {
    if (u < 0.0) throw std::domain_error("log_transition_prob: time must be nonnegative");
    const double v = total_rate * u / x.dim;
    double s = 0.0;
    for (int i = 0; i < x.dim; ++i) s += log_skellam_pmf(v, x.c[i]);
    return s;
}

/// log P_x(l_w(x) >= s) for the one-dimensional walk with total rate r.
///
/// While at x the walk departs at rate r, so local time s contains
/// N ~ Poisson(r s) departures; each is followed by an excursion distributed
/// as the hitting time T_1 of x from a neighbour, and N excursions add up to
/// T_N. Hence l_w(x) >= s iff s + T_N <= w, and by the reflection principle
/// for the skip-free walk P(T_n <= v) = P(S_v = n) + 2 P(S_v > n).
inline double log_local_time_tail(double total_rate, double w, double s) {
    if (s <= 0.0) return 0.0;
    if (s > w) return kNegInf;
    const double mu = total_rate * s;
    const double v = total_rate * (w - s);
    const auto n_max = static_cast<std::int64_t>(mu + 15.0 * std::sqrt(mu) + 40.0);
    // pmf(m) for m = 0..n_max+1 and tails P(S > m).
    std::vector<double> log_pmf(static_cast<std::size_t>(n_max) + 2);
    for (std::int64_t m = 0; m <= n_max + 1; ++m) log_pmf[static_cast<std::size_t>(m)] = log_skellam_pmf(v, m);
    std::vector<double> log_tail(static_cast<std::size_t>(n_max) + 1);
    double tail = log_skellam_upper_tail(v, n_max);
    log_tail[static_cast<std::size_t>(n_max)] = tail;
    for (std::int64_t m = n_max - 1; m >= 0; --m) {
        tail = log_add(tail, log_pmf[static_cast<std::size_t>(m) + 1]);
        log_tail[static_cast<std::size_t>(m)] = tail;
    }
    double acc = kNegInf;
    const double log2 = std::log(2.0);
    for (std::int64_t n = 0; n <= n_max; ++n) {
        const double log_pois = -mu + static_cast<double>(n) * std::log(mu) - std::lgamma(static_cast<double>(n) + 1.0);
        const double log_hit =
            n == 0 ? 0.0 : log_add(log_pmf[static_cast<std::size_t>(n)], log2 + log_tail[static_cast<std::size_t>(n)]);
        acc = log_add(acc, log_pois + log_hit);
    }
    return std::min(acc, 0.0);
}

}  // namespace scenerywalk

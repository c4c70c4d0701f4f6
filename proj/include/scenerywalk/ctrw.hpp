#pragma once

// Walk-level operations built on the simulators: the time-change
// representation of the layered walk, heat-kernel envelopes, and Monte Carlo
// transition probabilities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "scenerywalk/functional.hpp"
#include "scenerywalk/parallel.hpp"
#include "scenerywalk/path.hpp"
#include "scenerywalk/stats.hpp"

namespace scenerywalk {

class InsufficientHorizonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (S^1_{A_t}, S^2_t) for a vertical walk on Z, the clock of the transverse
/// walk, and the transverse walk on Z^d.
inline Site time_change_compose(const WalkPath& vertical, const ClockProcess& clk, const WalkPath& transverse_path,
                                double t) {
    if (vertical.dim != 1) throw std::invalid_argument("time_change_compose: vertical walk must live on Z");
    const double a = clk.value_at(t);
    if (vertical.horizon < a)
        throw InsufficientHorizonError("time_change_compose: vertical walk simulated to " +
                                       std::to_string(vertical.horizon) + " but the clock reached " +
                                       std::to_string(a));
    const Site& x2 = transverse_path.position_at(t);
    Site out(1 + x2.dim);
    out.c[0] = vertical.position_at(a).c[0];
    for (int i = 0; i < x2.dim; ++i) out.c[1 + i] = x2.c[i];
    return out;
}

/// Per-direction rates matching the layered walk's jump-rate display:
/// the vertical walk jumps at rate 1 in each direction (total 2) and the
/// transverse walk at rate 1 per direction (total 2d).
inline constexpr double kVerticalTotalRate = 2.0;
inline double transverse_total_rate(int d) { return 2.0 * d; }

/// Samples X_t through the time-change representation: transverse walk and
/// its clock first, then the vertical walk exactly up to the clock value.
template <Scenery F>
Site sample_time_changed(const F& field, double t, RngStream& transverse_rng, RngStream& vertical_rng) {
    const WalkPath s2 = simulate_srw(field.dim(), transverse_total_rate(field.dim()), t, transverse_rng);
    const ClockProcess clk = clock(field, s2);
    const double a = clk.value_at(t);
    const WalkPath s1 = a > 0.0 ? simulate_srw(1, kVerticalTotalRate, a, vertical_rng) : WalkPath(Site::origin(1), 1.0);
    return time_change_compose(s1, clk, s2, t);
}

struct HKConstants {
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0;

    void validate() const {
        if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0 && c4 > 0.0))
            throw std::domain_error("HKConstants: all constants must be positive");
    }
};

struct LogEnvelope {
    double lower = 0.0;
    double upper = 0.0;
    bool gaussian_branch = true;
};

/// Two-sided heat-kernel envelope for p_t(0, x), in log form. The Gaussian
/// branch is used for |x| <= t (boundary included), the Poissonian one beyond.
inline LogEnvelope hk_envelope(double t, const Site& x, const HKConstants& k) {
    if (!(t >= 1.0)) throw std::domain_error("hk_envelope: requires t >= 1");
    k.validate();
    const double r = euclidean_norm(x);
    if (r <= t) {
        const double base = -0.5 * x.dim * std::log(t);
        return {std::log(k.c1) + base - k.c2 * r * r / t, std::log(k.c3) + base - k.c4 * r * r / t, true};
    }
    const double shape = r * std::max(1.0, std::log(r / t));
    return {-k.c2 * shape, -k.c4 * shape, false};
}

/// Monte Carlo estimate of p_t(0, x) with Wilson interval.
inline TailEstimate transition_prob_mc(int dim, double total_rate, double t, const Site& x, std::uint64_t replicas,
                                       std::uint64_t seed, int jobs = 1) {
    if (replicas == 0) throw std::domain_error("transition_prob_mc: need at least one replica");
    if (x.dim != dim) throw std::invalid_argument("transition_prob_mc: target dimension mismatch");
    const auto hits = run_replicas(replicas, jobs, [&](std::uint64_t i) -> std::uint8_t {
        RngStream rng(seed, i);
        Site end = Site::origin(dim);
        walk_srw(end, total_rate, t, rng, [&](const Site& s, double, double) { end = s; });
        return end == x ? 1 : 0;
    });
    std::uint64_t k = 0;
    for (auto h : hits) k += h;
    return make_tail_estimate(k, replicas, t);
}

/// A point of the empirical heat kernel used to fit envelope constants.
struct KernelSample {
    double t;
    Site x;
    TailEstimate estimate;
};

/// Fits envelope constants so that every sample whose interval excludes 0
/// lies inside the envelope. The Gaussian exponents are anchored at
/// `gauss_lower_rate` / `gauss_upper_rate` (then widened if the Poissonian
/// samples require it) and the prefactors c1, c3 are the tightest that
/// contain the samples, loosened by `margin`.
inline HKConstants fit_hk_constants(const std::vector<KernelSample>& samples, double gauss_lower_rate = 1.0,
                                    double gauss_upper_rate = 0.25, double margin = 1.5) {
    double c2 = gauss_lower_rate, c4 = gauss_upper_rate;
    for (const auto& s : samples) {
        if (!(s.estimate.ci_low > 0.0)) continue;
        const double r = euclidean_norm(s.x);
        if (r <= s.t) continue;
        const double shape = r * std::max(1.0, std::log(r / s.t));
        const double lp = std::log(s.estimate.probability);
        c2 = std::max(c2, margin * (-lp) / shape);
        c4 = std::min(c4, (-lp) / shape / margin);
    }
    double c1 = std::numeric_limits<double>::infinity(), c3 = 0.0;
    for (const auto& s : samples) {
        if (!(s.estimate.ci_low > 0.0)) continue;
        const double r = euclidean_norm(s.x);
        if (r > s.t) continue;
        const double scaled = s.estimate.probability * std::pow(s.t, 0.5 * s.x.dim);
        c1 = std::min(c1, scaled * std::exp(c2 * r * r / s.t));
        c3 = std::max(c3, scaled * std::exp(c4 * r * r / s.t));
    }
    if (!std::isfinite(c1)) c1 = 1.0;
    if (c3 <= 0.0) c3 = 1.0;
    return {c1 / margin, c2, c3 * margin, c4};
}

}  // namespace scenerywalk

#pragma once

// Estimators and verifiers for the claims that are checkable at desk scale:
// LLN and scaling of A_t, polynomial-regime tails, the strategy lower bound in
// the stretched-exponential regimes, the non-asymptotic local-time tail bound
// and moment bound, and occupation of high level sets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenerywalk/chemdist.hpp"
#include "scenerywalk/ctrw.hpp"
#include "scenerywalk/exponents.hpp"
#include "scenerywalk/functional.hpp"
#include "scenerywalk/kernel.hpp"
#include "scenerywalk/numerics.hpp"
#include "scenerywalk/parallel.hpp"
#include "scenerywalk/path.hpp"
#include "scenerywalk/rng.hpp"
#include "scenerywalk/scenery.hpp"
#include "scenerywalk/stats.hpp"

namespace scenerywalk {

/// Raised when a Monte Carlo request targets a stretched-exponential regime.
class RefusedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Slack constants fixed after pilot runs; loaded from data/calibration.json.
struct Calibration {
    double polynomial_floor_exponent = 6.0;
    double strategy_eps_tol = 0.15;
    double slope_slack = 0.1;
    std::string provenance = "built-in defaults";
};

inline Calibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_calibration: cannot open " + path);
    const auto j = nlohmann::json::parse(in);
    Calibration c;
    c.polynomial_floor_exponent = j.at("polynomial_floor_exponent").get<double>();
    c.strategy_eps_tol = j.at("strategy_eps_tol").get<double>();
    c.slope_slack = j.at("slope_slack").get<double>();
    c.provenance = j.value("provenance", std::string("unspecified"));
    return c;
}

// ---------------------------------------------------------------------------
// A_t along a single walk

/// A_u of one rate-`total_rate` walk from the origin at each of the sorted
/// times `times`. One-dimensional fields are read through a LineCache.
template <Scenery F>
std::vector<double> additive_at_times(const F& field, double total_rate, const std::vector<double>& times,
                                      RngStream& rng) {
    if (times.empty()) return {};
    if (!std::is_sorted(times.begin(), times.end()) || !(times.front() > 0.0))
        throw std::domain_error("additive_at_times: times must be positive and sorted");
    std::vector<double> out(times.size());
    auto run = [&](auto&& z) {
        CompensatedSum acc;
        std::size_t next = 0;
        walk_srw(Site::origin(field.dim()), total_rate, times.back(), rng, [&](const Site& x, double from, double to) {
            const double v = z(x);
            while (next < times.size() && times[next] <= to) {
                out[next] = acc.value() + v * (times[next] - from);
                ++next;
            }
            acc.add(v * (to - from));
        });
    };
    if (field.dim() == 1) {
        LineCache<F> cache(field);
        run([&](const Site& x) { return cache.value(x.c[0]); });
    } else {
        run([&](const Site& x) { return field.value(x); });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Law of large numbers

struct LlnResult {
    double mean = 0.0;  // mean of A_t / t
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double target = 0.0;  // E z(0)
    std::uint64_t replicas = 0;

    double z_score() const { return std_error > 0.0 ? (mean - target) / std_error : (mean == target ? 0.0 : INFINITY); }
};

/// Mean of A_t / t over replicas, each with a fresh field make_field(i).
template <class MakeField>
LlnResult lln_check_with(MakeField&& make_field, double target, double t, std::uint64_t replicas, std::uint64_t seed,
                         int jobs = 1) {
    if (replicas == 0) throw std::domain_error("lln_check: need at least one replica");
    if (!(t > 0.0)) throw std::domain_error("lln_check: t must be positive");
    const auto ratios = run_replicas(replicas, jobs, [&](std::uint64_t i) {
        const auto field = make_field(i);
        RngStream rng(seed, i, StreamTag::Walk);
        return additive_at_times(field, 1.0, {t}, rng)[0] / t;
    });
    const auto s = summarize(ratios);
    return {s.mean, s.std_error, s.mean - kZ95 * s.std_error, s.mean + kZ95 * s.std_error, target, replicas};
}

/// LLN check for the Pareto scenery: target alpha / (alpha - 1).
inline LlnResult lln_check(double alpha, int dim, double t, std::uint64_t replicas, std::uint64_t seed, int jobs = 1) {
    if (!(alpha > 1.0)) throw std::domain_error("lln_check: requires alpha > 1 (E z(0) finite)");
    return lln_check_with(
        [&](std::uint64_t i) { return SceneryField(alpha, dim, derive_seed(seed, i, StreamTag::Field)); },
        alpha / (alpha - 1.0), t, replicas, seed, jobs);
}

// ---------------------------------------------------------------------------
// Scaling exponent of A_t

struct ScalingEstimate {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double target = 0.0;
    bool one_sided = false;  // target is only an upper bound (d >= 2)
    double quantile_level = 0.5;
    std::vector<double> times;
    std::vector<double> quantiles;
    std::uint64_t replicas = 0;
};

/// Regression of log q_t on log t, q_t the sample quantile of A_t with fields
/// make_field(i) and walk streams (seed, i).
template <class MakeField>
ScalingEstimate scaling_exponent_estimate_with(MakeField&& make_field, const std::vector<double>& t_grid,
                                               std::uint64_t replicas, double quantile_level, std::uint64_t seed,
                                               int jobs = 1) {
    if (t_grid.size() < 2) throw std::domain_error("scaling_exponent_estimate: need at least two times");
    if (replicas == 0) throw std::domain_error("scaling_exponent_estimate: need at least one replica");
    const auto per_replica = run_replicas(replicas, jobs, [&](std::uint64_t i) {
        const auto field = make_field(i);
        RngStream rng(seed, i, StreamTag::Walk);
        return additive_at_times(field, 1.0, t_grid, rng);
    });
    ScalingEstimate out;
    out.quantile_level = quantile_level;
    out.times = t_grid;
    out.replicas = replicas;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        std::vector<double> col(replicas);
        for (std::uint64_t i = 0; i < replicas; ++i) col[i] = per_replica[i][k];
        out.quantiles.push_back(quantile(std::move(col), quantile_level));
    }
    const auto fit = fit_loglog(out.times, out.quantiles);
    out.slope = fit.slope;
    out.slope_stderr = fit.slope_stderr;
    return out;
}

/// Scaling of A_t for alpha <= 1: (alpha+1)/(2 alpha) in d = 1, upper bound d/(2 alpha) otherwise.
inline ScalingEstimate scaling_exponent_estimate(double alpha, int dim, const std::vector<double>& t_grid,
                                                 std::uint64_t replicas, double quantile_level, std::uint64_t seed,
                                                 int jobs = 1) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("scaling_exponent_estimate: requires 0 < alpha <= 1");
    auto est = scaling_exponent_estimate_with(
        [&](std::uint64_t i) { return SceneryField(alpha, dim, derive_seed(seed, i, StreamTag::Field)); }, t_grid,
        replicas, quantile_level, seed, jobs);
    est.target = dim == 1 ? (alpha + 1.0) / (2.0 * alpha) : dim / (2.0 * alpha);
    est.one_sided = dim >= 2;
    return est;
}

// ---------------------------------------------------------------------------
// Polynomial-regime tails

struct TailModel {
    enum class Kind { RWRS, RCM };
    Kind kind = Kind::RWRS;
    double rho = 1.0;    // RWRS: event A_t >= t^rho
    double delta = 0.0;  // RCM: event X_t = t^delta e_1 + t^gamma e_2
    double gamma = 0.0;

    static TailModel rwrs(double rho) { return {Kind::RWRS, rho, 0.0, 0.0}; }
    static TailModel rcm(double delta, double gamma) { return {Kind::RCM, 0.0, delta, gamma}; }
};

struct TailScan {
    std::vector<TailEstimate> estimates;
    std::vector<double> times;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double slope_stderr = std::numeric_limits<double>::quiet_NaN();
    double floor_exponent = 0.0;
    bool above_floor = true;  // every CI lower bound exceeds t^-floor_exponent
};

/// Throws RefusedError unless the model sits in a polynomial regime.
inline void require_polynomial_regime(const TailModel& model, double alpha, int dim) {
    if (model.kind == TailModel::Kind::RWRS) {
        if (model.rho <= 1.0) return;
        const auto p = p_exponent(alpha, model.rho, dim);
        if (p.regime == Regime::Polynomial || p.regime == Regime::BoundaryZero) return;
        throw RefusedError("tail_prob_scan: rho = " + std::to_string(model.rho) + " is in the " + to_string(p.regime) +
                           " p-regime (stretched-exponential); use strategy_lower_bound instead");
    }
    const auto q = q_closed_form(alpha, model.delta, dim);
    if (q.regime == Regime::First && model.gamma <= 0.5) return;
    throw RefusedError("tail_prob_scan: (delta, gamma) = (" + std::to_string(model.delta) + ", " +
                       std::to_string(model.gamma) +
                       ") is outside the polynomial regime; use strategy_lower_bound and the exponent algebra instead");
}

/// OLS slope of log p on log t over the points with p > 0. The reported
/// stderr is the larger of the residual-based one and the one propagated from
/// the binomial errors of log p.
inline void fit_tail_slope(TailScan& scan) {
    std::vector<double> xs, ys, vars;
    for (std::size_t k = 0; k < scan.estimates.size(); ++k) {
        const auto& e = scan.estimates[k];
        if (!(e.probability > 0.0)) continue;
        xs.push_back(std::log(scan.times[k]));
        ys.push_back(std::log(e.probability));
        vars.push_back((1.0 - e.probability) / (static_cast<double>(e.replicas) * e.probability));
    }
    if (xs.size() < 2) return;
    const auto fit = fit_line(xs, ys);
    double mx = 0.0;
    for (double x : xs) mx += x;
    mx /= static_cast<double>(xs.size());
    double sxx = 0.0, prop = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        prop += (xs[i] - mx) * (xs[i] - mx) * vars[i];
    }
    scan.slope = fit.slope;
    scan.slope_stderr = std::max(fit.slope_stderr, std::sqrt(prop) / sxx);
}

/// Direct frequencies of the event at each t for the quenched field `field`
/// (RWRS: scenery on Z^d; RCM: layered conductances on Z^{1+d}).
template <Scenery F>
TailScan tail_prob_scan_with(const F& field, const TailModel& model, double alpha, const std::vector<double>& t_grid,
                             std::uint64_t replicas, std::uint64_t seed, double floor_exponent, int jobs = 1) {
    const int dim = field.dim();
    require_polynomial_regime(model, alpha, dim);
    if (t_grid.empty()) throw std::domain_error("tail_prob_scan: empty time grid");
    if (replicas == 0) throw std::domain_error("tail_prob_scan: need at least one replica");
    std::vector<double> times = t_grid;
    std::sort(times.begin(), times.end());
    const std::size_t nt = times.size();
    if (nt > 64) throw std::domain_error("tail_prob_scan: at most 64 times");
    // hits[i] has bit k set when the event occurred at times[k] in replica i.
    const auto hits = run_replicas(replicas, jobs, [&](std::uint64_t i) -> std::uint64_t {
        std::uint64_t mask = 0;
        if (model.kind == TailModel::Kind::RWRS) {
            RngStream rng(seed, i, StreamTag::Walk);
            const auto a = additive_at_times(field, 1.0, times, rng);
            for (std::size_t k = 0; k < nt; ++k)
                if (a[k] >= std::pow(times[k], model.rho)) mask |= std::uint64_t{1} << k;
            return mask;
        }
        for (std::size_t k = 0; k < nt; ++k) {
            RngStream tr(seed, i * nt + k, StreamTag::Transverse);
            RngStream vr(seed, i * nt + k, StreamTag::Vertical);
            const Site x = sample_time_changed(field, times[k], tr, vr);
            if (x == displacement_target(dim, times[k], model.delta, model.gamma)) mask |= std::uint64_t{1} << k;
        }
        return mask;
    });
    TailScan scan;
    scan.times = times;
    scan.floor_exponent = floor_exponent;
    for (std::size_t k = 0; k < nt; ++k) {
        std::uint64_t count = 0;
        for (auto m : hits) count += (m >> k) & 1U;
        scan.estimates.push_back(make_tail_estimate(count, replicas, times[k]));
        if (!(scan.estimates.back().ci_low > std::pow(times[k], -floor_exponent))) scan.above_floor = false;
    }
    fit_tail_slope(scan);
    return scan;
}

/// Tail scan for the Pareto scenery with seed derived from `seed`.
inline TailScan tail_prob_scan(const TailModel& model, double alpha, int dim, const std::vector<double>& t_grid,
                               std::uint64_t replicas, std::uint64_t seed, double floor_exponent, int jobs = 1) {
    const SceneryField field(alpha, dim, derive_seed(seed, 0, StreamTag::Field));
    return tail_prob_scan_with(field, model, alpha, t_grid, replicas, seed, floor_exponent, jobs);
}

struct SlopeStability {
    TailScan base;
    TailScan doubled;  // replicas 0..2n-1, sharing the first n with `base`
    double drift = 0.0;
    bool stable = false;  // |drift| < 2 * stderr of the doubled slope
};

inline SlopeStability tail_slope_stability(const TailModel& model, double alpha, int dim,
                                           const std::vector<double>& t_grid, std::uint64_t replicas,
                                           std::uint64_t seed, double floor_exponent, int jobs = 1) {
    SlopeStability s;
    s.base = tail_prob_scan(model, alpha, dim, t_grid, replicas, seed, floor_exponent, jobs);
    s.doubled = tail_prob_scan(model, alpha, dim, t_grid, 2 * replicas, seed, floor_exponent, jobs);
    s.drift = s.doubled.slope - s.base.slope;
    if (std::isfinite(s.drift))
        s.stable = s.drift == 0.0 || std::abs(s.drift) < 2.0 * s.doubled.slope_stderr;
    return s;
}

// ---------------------------------------------------------------------------
// Strategy lower bound

/// Split of [0, t] used by the strategy: travel to x during [0, tau], collect
/// the local time at x within [tau, tau + window], then (bridge only) return
/// to 0 by time t. Both are fractions of t.
struct StrategySplit {
    double tau = 0.25;
    double window = 0.25;
};

/// The split (1/4, 1/4) plus a coarse grid of others; any split
/// gives a valid lower bound, so the best one is reported.
inline std::vector<StrategySplit> default_strategy_splits() {
    std::vector<StrategySplit> out;
    for (double tau : {0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875})
        for (double w : {0.0625, 0.125, 0.25})
            if (tau + w < 1.0) out.push_back({tau, w});
    return out;
}

/// One evaluated candidate: site, split and the three log factors.
struct StrategyTerm {
    double log_prob = -std::numeric_limits<double>::infinity();
    double travel_log = 0.0;      // log p_tau(0, x)
    double occupation_log = 0.0;  // log of the local-time factor at x
    double return_log = 0.0;      // log of the return factor (bridge only)
    Site site;
    double z = 1.0;
    StrategySplit split;
};

struct StrategyBound {
    StrategyTerm direct;  // lower bound on log P_0(A_t >= t^rho)
    StrategyTerm bridge;  // lower bound on log P_0(A_t >= t^rho, S_t = 0)
    Regime regime = Regime::First;
    double p_value = 0.0;  // p(alpha, rho)
    double t = 0.0;
    std::size_t candidates = 0;

    double log_prob() const { return direct.log_prob; }
    /// log(-log P) / log t, the empirical counterpart of p(alpha, rho).
    double exponent() const { return std::log(-direct.log_prob) / std::log(t); }
    double bridge_exponent() const { return std::log(-bridge.log_prob) / std::log(t); }
    bool within_tolerance(double eps_tol) const { return direct.log_prob >= -std::pow(t, p_value + eps_tol); }
};

/// Lower bounds on log P_0(A_t >= t^rho) and on the bridge probability
/// log P_0(A_t >= t^rho, S_t = 0) for the walk with total rate `total_rate`,
/// from the strategy: be at x at time tau, collect local time
/// s = t^rho / z(x) at x within [tau, tau + w], and for the bridge be back at
/// 0 at time t.
///
/// Second regime: stay at x throughout the window (factor e^{-rate w}, needs
/// z(x) w >= t^rho), return factor p_{t - tau - w}(x, 0). First regime: in
/// d = 1 the exact tail of the local time is used, for d >= 2 the
/// uninterrupted stay e^{-rate s}; the local time is reached at a random
/// time, so the return factor is the minimum of p_u(x, 0) over
/// u in [t - tau - w, t - tau], attained at an endpoint by unimodality.
///
/// Candidates are the record sites of z scanned shell by shell outward; the
/// scan stops once travel (and return) alone cost more than the best bounds.
template <Scenery F>
StrategyBound strategy_lower_bound_with(const F& field, double alpha, double rho, double t, double total_rate = 1.0,
                                        const std::vector<StrategySplit>& splits = default_strategy_splits(),
                                        double site_budget = kDefaultSiteBudget) {
    const int dim = field.dim();
    const auto p = p_exponent(alpha, rho, dim);
    if (p.regime != Regime::First && p.regime != Regime::Second)
        throw std::domain_error("strategy_lower_bound: rho must lie in the first or second p-regime, got " +
                                to_string(p.regime));
    if (!(t > 0.0)) throw std::domain_error("strategy_lower_bound: t must be positive");
    if (splits.empty()) throw std::domain_error("strategy_lower_bound: no splits");
    for (const auto& sp : splits)
        if (!(sp.tau > 0.0 && sp.window > 0.0 && sp.tau + sp.window < 1.0))
            throw std::domain_error("strategy_lower_bound: splits need tau, w > 0 and tau + w < 1");
    const bool second = p.regime == Regime::Second;
    const double need = std::pow(t, rho);
    StrategyBound best;
    best.regime = p.regime;
    best.p_value = p.value;
    best.t = t;
    best.direct.site = best.bridge.site = Site::origin(dim);

    auto evaluate = [&](const Site& x, double z) {
        for (const auto& sp : splits) {
            const double tau = sp.tau * t, w = sp.window * t;
            const double s = need / z;
            if (s > w) continue;
            StrategyTerm term;
            term.site = x;
            term.z = z;
            term.split = sp;
            term.travel_log = log_transition_prob(total_rate, tau, x);
            if (second) {
                term.occupation_log = -total_rate * w;
                term.return_log = log_transition_prob(total_rate, t - tau - w, x);
            } else {
                term.occupation_log = dim == 1 ? log_local_time_tail(total_rate, w, s) : -total_rate * s;
                term.return_log = std::min(log_transition_prob(total_rate, t - tau - w, x),
                                           log_transition_prob(total_rate, t - tau, x));
            }
            ++best.candidates;
            const double direct = term.travel_log + term.occupation_log;
            const double bridge = direct + term.return_log;
            if (direct > best.direct.log_prob) {
                best.direct = term;
                best.direct.log_prob = direct;
                best.direct.return_log = 0.0;
            }
            if (bridge > best.bridge.log_prob) {
                best.bridge = term;
                best.bridge.log_prob = bridge;
            }
        }
    };

    // Largest travel (and travel-plus-return) weight of any site at l_inf radius r.
    auto reach = [&](std::int64_t r) {
        Site axis(dim);
        axis.c[0] = r;
        double travel = kNegInf, round_trip = kNegInf;
        for (const auto& sp : splits) {
            const double tau = sp.tau * t, w = sp.window * t;
            const double go = log_transition_prob(total_rate, tau, axis);
            const double back = std::max(log_transition_prob(total_rate, t - tau - w, axis),
                                         log_transition_prob(total_rate, t - tau, axis));
            travel = std::max(travel, go);
            round_trip = std::max(round_trip, go + back);
        }
        return std::pair{travel, round_trip};
    };

    double record = 0.0;
    double scanned = 0.0;
    for (std::int64_t r = 0;; ++r) {
        const auto [travel, round_trip] = reach(r);
        if (travel < best.direct.log_prob && round_trip < best.bridge.log_prob) break;
        if (travel == kNegInf) break;
        scanned += box_site_count(dim, r) - (r > 0 ? box_site_count(dim, r - 1) : 0.0);
        if (scanned > site_budget) throw ResourceError("strategy_lower_bound: candidate scan exceeds the site budget");
        Site shell_best(dim);
        double shell_max = 0.0;
        for_each_on_shell(dim, r, [&](const Site& x) {
            const double z = field.value(x);
            if (z > shell_max) {
                shell_max = z;
                shell_best = x;
            }
        });
        if (shell_max > record) {
            record = shell_max;
            evaluate(shell_best, shell_max);
        }
    }
    return best;
}

inline StrategyBound strategy_lower_bound(double alpha, int dim, double rho, double t, std::uint64_t field_seed,
                                          double total_rate = 1.0,
                                          const std::vector<StrategySplit>& splits = default_strategy_splits()) {
    return strategy_lower_bound_with(SceneryField(alpha, dim, field_seed), alpha, rho, t, total_rate, splits);
}

// ---------------------------------------------------------------------------
// Non-asymptotic local-time tail bound and moment bound

struct ChenParams {
    double lambda = 1.0;
    double a_value = 1.0;  // a(t / b(t))
    double b_value = 2.0;
};

/// 2^{1/2} e^{1/(24(b-1))} (lambda e / 4)^{-b+1}.
inline double chen_bound(const ChenParams& p) {
    if (!(p.b_value > 1.0)) throw std::domain_error("chen_bound: requires b > 1");
    if (!(p.lambda > 0.0)) throw std::domain_error("chen_bound: requires lambda > 0");
    const double log_bound = 0.5 * std::log(2.0) + 1.0 / (24.0 * (p.b_value - 1.0)) -
                             (p.b_value - 1.0) * std::log(p.lambda * std::exp(1.0) / 4.0);
    return std::exp(log_bound);
}

/// Samples of l_u(0) for walks from the origin with total rate 1, at each of the sorted times.
inline std::vector<std::vector<double>> origin_local_times(int dim, const std::vector<double>& times,
                                                           std::uint64_t replicas, std::uint64_t seed, StreamTag tag,
                                                           int jobs) {
    return run_replicas(replicas, jobs, [&](std::uint64_t i) {
        RngStream rng(seed, i, tag);
        std::vector<double> out(times.size(), 0.0);
        CompensatedSum acc;
        std::size_t next = 0;
        walk_srw(Site::origin(dim), 1.0, times.back(), rng, [&](const Site& x, double from, double to) {
            const bool home = x.is_origin();
            while (next < times.size() && times[next] <= to) {
                out[next] = acc.value() + (home ? times[next] - from : 0.0);
                ++next;
            }
            if (home) acc.add(to - from);
        });
        return out;
    });
}

struct ChenCheck {
    double lambda = 0.0;
    double mc_probability = 0.0;
    TailEstimate estimate;
    double bound = 0.0;
    bool violated = false;
};

struct ChenReport {
    double t = 0.0;
    double b_value = 0.0;
    double a_value = 0.0;  // MC estimate of E_0 l_{t/b}(0) plus 3 stderr, at least 1
    std::vector<ChenCheck> checks;
    std::uint64_t replicas = 0;

    bool any_violation() const {
        return std::any_of(checks.begin(), checks.end(), [](const ChenCheck& c) { return c.violated; });
    }
};

/// a(t/b) for f = 1_{0}: MC mean of l_{t/b}(0) with a 3 sigma margin, clamped to >= 1.
inline double chen_a_value(int dim, double t, double b_value, std::uint64_t replicas, std::uint64_t seed, int jobs) {
    const auto samples = origin_local_times(dim, {t / b_value}, replicas, seed, StreamTag::Auxiliary, jobs);
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& s : samples) xs.push_back(s[0]);
    const auto sum = summarize(xs);
    return std::max(1.0, sum.mean + 3.0 * sum.std_error);
}

/// Frequencies of {l_t(0) >= lambda a b} from `samples` (l_t(0) per replica) against the bound.
inline ChenReport chen_check_samples(const std::vector<double>& samples, double t, double b_value, double a_value,
                                     const std::vector<double>& lambdas) {
    if (!(b_value > 1.0)) throw std::domain_error("chen_verify: requires b > 1");
    ChenReport rep;
    rep.t = t;
    rep.b_value = b_value;
    rep.a_value = a_value;
    rep.replicas = samples.size();
    for (double lambda : lambdas) {
        const double level = lambda * a_value * b_value;
        std::uint64_t k = 0;
        for (double l : samples) k += l >= level ? 1 : 0;
        ChenCheck c;
        c.lambda = lambda;
        c.estimate = make_tail_estimate(k, samples.size(), t);
        c.mc_probability = c.estimate.probability;
        c.bound = chen_bound({lambda, a_value, b_value});
        c.violated = c.mc_probability > c.bound;
        rep.checks.push_back(c);
    }
    return rep;
}

inline std::vector<double> default_chen_lambdas() { return {0.5, 1.0, 4.0 / std::exp(1.0), 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0}; }

/// chen_verify for f = 1_{0}: a from `a_replicas` auxiliary walks, the tail from `replicas` walks.
inline ChenReport chen_verify(int dim, double t, double b_value, std::uint64_t replicas, std::uint64_t seed,
                              const std::vector<double>& lambdas = default_chen_lambdas(), int jobs = 1,
                              std::uint64_t a_replicas = 100000) {
    if (!(b_value > 1.0)) throw std::domain_error("chen_verify: requires b > 1");
    if (replicas == 0) throw std::domain_error("chen_verify: need at least one replica");
    const double a = chen_a_value(dim, t, b_value, a_replicas, seed, jobs);
    const auto lt = origin_local_times(dim, {t}, replicas, seed, StreamTag::Walk, jobs);
    std::vector<double> samples;
    samples.reserve(lt.size());
    for (const auto& s : lt) samples.push_back(s[0]);
    return chen_check_samples(samples, t, b_value, a, lambdas);
}

struct KhasminskiiReport {
    int m = 1;
    double t = 0.0;
    double lhs = 0.0;        // sup over support of MC E_x[(int f)^m]
    double first_moment = 0.0;  // sup over support of MC E_x[int f]
    double rhs_raw = 0.0;    // m! first_moment^m
    double rhs = 0.0;        // rhs_raw (1 + 3 relative stderr)
    double slack = 0.0;      // rhs / lhs
    bool violated = false;
    std::uint64_t replicas = 0;
};

/// Moment bound from samples of int_0^t f(S_u) du started at a single site.
inline KhasminskiiReport khasminskii_check_samples(const std::vector<double>& samples, int m, double t) {
    if (m < 1 || m > 4) throw std::domain_error("khasminskii_verify: requires 1 <= m <= 4");
    if (samples.empty()) throw std::domain_error("khasminskii_verify: empty sample");
    std::vector<double> powers(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) powers[i] = std::pow(samples[i], m);
    const auto first = summarize(samples);
    const auto mth = summarize(powers);
    KhasminskiiReport r;
    r.m = m;
    r.t = t;
    r.replicas = samples.size();
    r.lhs = mth.mean;
    r.first_moment = first.mean;
    double fact = 1.0;
    for (int k = 2; k <= m; ++k) fact *= k;
    r.rhs_raw = fact * std::pow(first.mean, m);
    const double rel = first.mean > 0.0 ? first.std_error / first.mean : 0.0;
    r.rhs = r.rhs_raw * (1.0 + 3.0 * rel);
    r.slack = r.lhs > 0.0 ? r.rhs / r.lhs : INFINITY;
    r.violated = r.lhs > r.rhs;
    return r;
}

/// Occupation of `support` by walks started at `x` up to each sorted time.
inline std::vector<std::vector<double>> support_occupation(const std::vector<Site>& support, const Site& x,
                                                           const std::vector<double>& times, std::uint64_t replicas,
                                                           std::uint64_t seed, int jobs) {
    return run_replicas(replicas, jobs, [&](std::uint64_t i) {
        RngStream rng(seed, i, StreamTag::Walk);
        std::vector<double> out(times.size(), 0.0);
        CompensatedSum acc;
        std::size_t next = 0;
        walk_srw(x, 1.0, times.back(), rng, [&](const Site& y, double from, double to) {
            const bool in = std::find(support.begin(), support.end(), y) != support.end();
            while (next < times.size() && times[next] <= to) {
                out[next] = acc.value() + (in ? times[next] - from : 0.0);
                ++next;
            }
            if (in) acc.add(to - from);
        });
        return out;
    });
}

/// khasminskii_verify for f = indicator of `support`; the supremum runs over the support sites.
inline KhasminskiiReport khasminskii_verify(int dim, double t, int m, std::uint64_t replicas, std::uint64_t seed,
                                            std::vector<Site> support = {}, int jobs = 1) {
    if (support.empty()) support.push_back(Site::origin(dim));
    KhasminskiiReport worst;
    bool first = true;
    for (std::size_t j = 0; j < support.size(); ++j) {
        const auto occ = support_occupation(support, support[j], {t}, replicas, derive_seed(seed, j), jobs);
        std::vector<double> samples;
        samples.reserve(occ.size());
        for (const auto& o : occ) samples.push_back(o[0]);
        auto r = khasminskii_check_samples(samples, m, t);
        if (first) {
            worst = r;
            first = false;
        } else {
            worst.lhs = std::max(worst.lhs, r.lhs);
            if (r.first_moment > worst.first_moment) {
                worst.first_moment = r.first_moment;
                worst.rhs_raw = r.rhs_raw;
                worst.rhs = r.rhs;
            }
        }
    }
    worst.slack = worst.lhs > 0.0 ? worst.rhs / worst.lhs : INFINITY;
    worst.violated = worst.lhs > worst.rhs;
    return worst;
}

// ---------------------------------------------------------------------------
// Occupation of high level sets

/// sup over start sites y in {z >= threshold} with ||y||_inf <= box_radius of
/// the MC mean of l_horizon({z >= threshold}) under P_y. Starting points
/// outside the level set cannot do better (strong Markov at the hitting time),
/// so the sup over the whole box equals the sup over the level set. Returns 0
/// for an empty level set.
template <Scenery F>
double mean_occupation_sup(const F& field, double threshold, std::int64_t box_radius, double horizon,
                           std::uint64_t replicas, std::uint64_t seed, int jobs = 1) {
    if (replicas == 0) throw std::domain_error("level_mean_occupation: need at least one replica");
    const LevelSet h = level_set(field, box_radius, threshold);
    double sup = 0.0;
    for (std::size_t j = 0; j < h.sites.size(); ++j) {
        const auto occ = run_replicas(replicas, jobs, [&](std::uint64_t i) {
            RngStream rng(derive_seed(seed, j, StreamTag::Auxiliary), i, StreamTag::Walk);
            CompensatedSum acc;
            auto run = [&](auto&& z) {
                walk_srw(h.sites[j], 1.0, horizon, rng, [&](const Site& x, double from, double to) {
                    if (z(x) >= threshold) acc.add(to - from);
                });
            };
            if (field.dim() == 1) {
                LineCache<F> cache(field);
                run([&](const Site& x) { return cache.value(x.c[0]); });
            } else {
                run([&](const Site& x) { return field.value(x); });
            }
            return acc.value();
        });
        CompensatedSum total;
        for (double o : occ) total.add(o);
        sup = std::max(sup, total.value() / static_cast<double>(replicas));
    }
    return sup;
}

struct LevelOccupationPoint {
    double t = 0.0;
    double mean_sup = 0.0;  // average over seeds of the sup over start sites
    std::int64_t box_radius = 0;
};

struct LevelOccupationReport {
    double eta = 1.0;
    double k_eps = 0.0;
    std::vector<LevelOccupationPoint> points;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double slope_stderr = 0.0;
    double reference_slope = 0.0;  // eta/2 for d = 1
};

inline void check_level_hypothesis(double alpha, int dim, double eta, double k_eps) {
    if (!(eta > 0.0)) throw std::domain_error("level_mean_occupation: eta must be positive");
    const double lower = dim == 1 ? eta / (2.0 * alpha) : eta / alpha;
    if (!(k_eps > lower))
        throw std::domain_error("level_mean_occupation: requires k*eps > " + std::string(dim == 1 ? "eta/(2 alpha)" : "eta/alpha") +
                                " = " + std::to_string(lower));
}

/// Mean occupation of H_k = {z >= t^{k eps}} in time t^eta, sup over starts in
/// the box of radius ceil(t^box_mu), averaged over `seeds` fields.
inline LevelOccupationPoint level_mean_occupation(double alpha, int dim, double eta, double k_eps, double t,
                                                  std::uint64_t seeds, std::uint64_t replicas, std::uint64_t seed,
                                                  double box_mu = 1.0, int jobs = 1) {
    check_level_hypothesis(alpha, dim, eta, k_eps);
    if (seeds == 0) throw std::domain_error("level_mean_occupation: need at least one seed");
    const auto radius = static_cast<std::int64_t>(std::ceil(std::pow(t, box_mu)));
    const double threshold = std::pow(t, k_eps);
    const double horizon = std::pow(t, eta);
    CompensatedSum acc;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        const SceneryField field(alpha, dim, derive_seed(seed, s, StreamTag::Field));
        acc.add(mean_occupation_sup(field, threshold, radius, horizon, replicas, derive_seed(seed, s), jobs));
    }
    return {t, acc.value() / static_cast<double>(seeds), radius};
}

inline LevelOccupationReport level_occupation_scaling(double alpha, int dim, double eta, double k_eps,
                                                      const std::vector<double>& t_grid, std::uint64_t seeds,
                                                      std::uint64_t replicas, std::uint64_t seed, double box_mu = 1.0,
                                                      int jobs = 1) {
    check_level_hypothesis(alpha, dim, eta, k_eps);
    LevelOccupationReport rep;
    rep.eta = eta;
    rep.k_eps = k_eps;
    rep.reference_slope = dim == 1 ? eta / 2.0 : 0.0;
    std::vector<double> xs, ys;
    for (double t : t_grid) {
        rep.points.push_back(level_mean_occupation(alpha, dim, eta, k_eps, t, seeds, replicas, seed, box_mu, jobs));
        if (rep.points.back().mean_sup > 0.0) {
            xs.push_back(t);
            ys.push_back(rep.points.back().mean_sup);
        }
    }
    if (xs.size() >= 2) {
        const auto fit = fit_loglog(xs, ys);
        rep.slope = fit.slope;
        rep.slope_stderr = fit.slope_stderr;
    }
    return rep;
}

}  // namespace scenerywalk

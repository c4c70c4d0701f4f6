#pragma once

// Named verification suites behind `scenerywalk verify`. Each suite returns a
// deterministic JSON report (no timings) so reruns can be diffed byte by byte.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scenerywalk/chemdist.hpp"
#include "scenerywalk/ctrw.hpp"
#include "scenerywalk/exponents.hpp"
#include "scenerywalk/io/report.hpp"
#include "scenerywalk/montecarlo.hpp"
#include "scenerywalk/scenery.hpp"
#include "scenerywalk/stats.hpp"
#include "scenerywalk/verify/oracles.hpp"

namespace scenerywalk::verify {

enum class Scale { Quick, Full };

inline std::string to_string(Scale s) { return s == Scale::Quick ? "quick" : "full"; }

inline Scale scale_from_string(const std::string& s) {
    if (s == "quick") return Scale::Quick;
    if (s == "full") return Scale::Full;
    throw std::invalid_argument("unknown scale '" + s + "' (expected quick or full)");
}

class UnknownSuiteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    Scale scale = Scale::Full;
    int jobs = 1;
    Calibration calibration;
};

struct Check {
    std::string name;
    double value;
    std::string relation;  // "<=", ">=", "=="
    double bound;
    bool passed;
};

struct SuiteReport {
    SuiteReport(std::string suite, SuiteOptions opts) : name(std::move(suite)), options(std::move(opts)) {}

    std::string name;
    SuiteOptions options;
    std::vector<Check> checks;
    nlohmann::json details = nlohmann::json::object();

    bool passed() const {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }

    void expect(const std::string& check, double value, const std::string& relation, double bound) {
        bool ok = false;
        if (relation == "<=") ok = value <= bound;
        else if (relation == ">=") ok = value >= bound;
        else if (relation == "==") ok = value == bound;
        else throw std::invalid_argument("SuiteReport::expect: unknown relation " + relation);
        checks.push_back({check, value, relation, bound, ok});
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["suite"] = name;
        j["passed"] = passed();
        j["scale"] = to_string(options.scale);
        j["seed"] = options.seed;
        j["calibration"] = options.calibration.provenance;
        auto arr = nlohmann::json::array();
        for (const auto& c : checks)
            arr.push_back({{"name", c.name},
                           {"value", io::number(c.value)},
                           {"relation", c.relation},
                           {"bound", io::number(c.bound)},
                           {"passed", c.passed}});
        j["checks"] = arr;
        j["details"] = details;
        return j;
    }
};

namespace detail {

inline bool full(const SuiteOptions& o) { return o.scale == Scale::Full; }

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

/// All-pairs distances inside `box` (row-major by Box::index).
template <Scenery F>
std::vector<std::vector<double>> all_pairs(const F& field, const Box& box) {
    const auto n = static_cast<std::size_t>(box.site_count());
    std::vector<std::vector<double>> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = box_distances(field, box, box.site(i));
    return d;
}

}  // namespace detail

inline SuiteReport suite_variational(const SuiteOptions& o) {
    SuiteReport r("variational", o);
    const int n = detail::full(o) ? 200 : 40;
    const auto alphas = detail::linspace(0.05, 5.0, n);
    const auto deltas = detail::linspace(0.0, 4.0, n);
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d)
        for (double a : alphas)
            for (double x : deltas) worst = std::max(worst, std::abs(q_variational(a, x, d) - q_closed_form(a, x, d).value));
    r.details["grid"] = n;
    r.expect("max_abs_difference", worst, "<=", 1e-9);
    return r;
}

inline SuiteReport suite_continuity(const SuiteOptions& o) {
    SuiteReport r("continuity", o);
    double worst_q = 0.0, worst_p = 0.0;
    std::uint64_t points = 0;
    for (int d = 1; d <= 3; ++d) {
        for (double a : detail::linspace(0.05, 6.0, 100)) {
            for (const auto& b : boundary_branches(DiagramKind::P, a, d)) {
                worst_p = std::max({worst_p, std::abs(b.left_value - 1.0), std::abs(b.right_value - 1.0)});
                ++points;
            }
            for (const auto& b : boundary_branches(DiagramKind::Q, a, d)) {
                const double v = q_closed_form(a, b.x, d).value;
                worst_q = std::max({worst_q, std::abs(b.left_value - b.right_value), std::abs(v - b.left_value)});
                ++points;
            }
        }
    }
    r.details["boundary_points"] = points;
    r.expect("boundary_points", static_cast<double>(points), ">=", 1000.0);
    r.expect("p_max_branch_gap", worst_p, "<=", 1e-12);
    r.expect("q_max_branch_gap", worst_q, "<=", 1e-12);
    return r;
}

inline SuiteReport suite_lln(const SuiteOptions& o) {
    SuiteReport r("lln", o);
    const double t = detail::full(o) ? 1e4 : 1e3;
    const std::uint64_t n = detail::full(o) ? 1000 : 200;
    const auto res = lln_check(2.0, 1, t, n, o.seed, o.jobs);
    r.details = {{"alpha", 2.0}, {"dim", 1},           {"t", t},          {"replicas", n},
                 {"mean", res.mean}, {"std_error", res.std_error}, {"target", res.target}};
    r.expect("abs_z_score", std::abs(res.z_score()), "<=", 3.0);
    return r;
}

inline SuiteReport suite_scaling(const SuiteOptions& o) {
    SuiteReport r("scaling", o);
    const auto grid = geometric_grid(1e2, detail::full(o) ? 1e5 : 1e4, detail::full(o) ? 7 : 5);
    const std::uint64_t n = detail::full(o) ? 10000 : 1000;
    const auto est = scaling_exponent_estimate(0.8, 1, grid, n, 0.5, o.seed, o.jobs);
    r.details = {{"alpha", 0.8}, {"dim", 1}, {"replicas", n}, {"slope", est.slope},
                 {"slope_stderr", est.slope_stderr}, {"target", est.target}};
    r.expect("abs_slope_error", std::abs(est.slope - est.target), "<=", o.calibration.slope_slack);
    return r;
}

inline SuiteReport suite_polynomial(const SuiteOptions& o) {
    SuiteReport r("polynomial", o);
    const auto grid = geometric_grid(1e2, detail::full(o) ? 1e4 : 1e3, detail::full(o) ? 5 : 3);
    const std::uint64_t n = detail::full(o) ? 10000 : 1000;
    const double floor_exp = o.calibration.polynomial_floor_exponent;
    const auto st = tail_slope_stability(TailModel::rwrs(1.2), 0.5, 1, grid, n, o.seed, floor_exp, o.jobs);
    double margin = INFINITY;  // min over t of log ci_low + floor log t
    auto rows = nlohmann::json::array();
    for (const auto& e : st.doubled.estimates) {
        margin = std::min(margin, (e.ci_low > 0.0 ? std::log(e.ci_low) : -INFINITY) + floor_exp * e.log_t);
        rows.push_back({{"log_t", e.log_t}, {"probability", e.probability}, {"ci_low", e.ci_low}});
    }
    r.details = {{"alpha", 0.5},
                 {"rho", 1.2},
                 {"replicas", n},
                 {"floor_exponent", floor_exp},
                 {"estimates", rows},
                 {"slope", io::number(st.doubled.slope)},
                 {"slope_stderr", io::number(st.doubled.slope_stderr)},
                 {"drift", io::number(st.drift)}};
    r.expect("min_log_margin_over_floor", margin, ">=", 0.0);
    r.expect("slope_finite", std::isfinite(st.doubled.slope) ? 1.0 : 0.0, "==", 1.0);
    r.expect("abs_drift_over_2_stderr", st.doubled.slope_stderr > 0.0 ? std::abs(st.drift) / (2.0 * st.doubled.slope_stderr)
                                                                    : (st.drift == 0.0 ? 0.0 : INFINITY),
             "<=", 1.0);
    return r;
}

inline SuiteReport suite_strategy(const SuiteOptions& o) {
    SuiteReport r("strategy", o);
    const std::uint64_t seeds = detail::full(o) ? 50 : 10;
    const double eps = o.calibration.strategy_eps_tol;
    std::uint64_t ok = 0;
    auto exps = nlohmann::json::array();
    for (std::uint64_t s = 0; s < seeds; ++s) {
        const auto b = strategy_lower_bound(1.0, 1, 1.5, 1e3, derive_seed(o.seed, s, StreamTag::Field));
        ok += b.within_tolerance(eps) ? 1 : 0;
        exps.push_back(b.exponent());
    }
    r.details = {{"alpha", 1.0}, {"rho", 1.5}, {"t", 1e3}, {"eps_tol", eps}, {"exponents", exps}};
    r.expect("fraction_within_tolerance", static_cast<double>(ok) / static_cast<double>(seeds), ">=", 0.9);
    return r;
}

inline SuiteReport suite_chemdist(const SuiteOptions& o) {
    SuiteReport r("chemdist", o);
    const auto grid = geometric_grid(1e2, detail::full(o) ? 1e5 : 1e4, detail::full(o) ? 7 : 5);
    const std::uint64_t nseeds = detail::full(o) ? 20 : 5;
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < nseeds; ++s) seeds.push_back(derive_seed(o.seed, s, StreamTag::Field));
    const auto fit = chemdist_scaling(1.0, 1, 1.0, 0.0, grid, seeds, o.jobs);
    const double target = chemdist_exponent(1.0, 1.0, 0.0, 1);
    r.details["slope"] = fit.slope;
    r.details["slope_stderr"] = fit.slope_stderr;
    r.details["target"] = target;
    r.expect("abs_slope_error", std::abs(fit.slope - target), "<=", 0.1);

    std::uint64_t mismatches = 0, pairs = 0;
    const std::uint64_t box_seeds = detail::full(o) ? 20 : 3;
    for (int total_dim = 2; total_dim <= 3; ++total_dim) {
        for (const auto& box : oracle::small_boxes(total_dim, 12)) {
            for (std::uint64_t s = 0; s < box_seeds; ++s) {
                const SceneryField field(0.7, total_dim - 1, derive_seed(o.seed, 1000 + s, StreamTag::Field));
                const auto fast = detail::all_pairs(field, box);
                const auto n = static_cast<std::size_t>(box.site_count());
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        const double slow = oracle::brute_force_distance(field, box, box.site(i), box.site(j));
                        ++pairs;
                        if (std::abs(fast[i][j] - slow) > 1e-12 * std::max(1.0, slow)) ++mismatches;
                    }
            }
        }
    }
    r.details["oracle_pairs"] = pairs;
    r.expect("oracle_mismatches", static_cast<double>(mismatches), "==", 0.0);
    return r;
}

inline SuiteReport suite_metric(const SuiteOptions& o) {
    SuiteReport r("metric", o);
    const std::uint64_t seeds = detail::full(o) ? 100 : 10;
    const Box box{Site{-2, -2}, Site{2, 2}};
    const auto n = static_cast<std::size_t>(box.site_count());
    std::uint64_t identity = 0, positivity = 0, symmetry = 0, triangle = 0, l1 = 0;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        const SceneryField field(0.5, 1, derive_seed(o.seed, s, StreamTag::Field));
        const auto d = detail::all_pairs(field, box);
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][i] != 0.0) ++identity;
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && !(d[i][j] > 0.0)) ++positivity;
                if (std::abs(d[i][j] - d[j][i]) > 1e-12 * std::max(1.0, d[i][j])) ++symmetry;  // summation order
                if (d[i][j] > static_cast<double>(l1_distance(box.site(i), box.site(j))) + 1e-12) ++l1;
                for (std::size_t k = 0; k < n; ++k)
                    if (d[i][k] > d[i][j] + d[j][k] + 1e-12) ++triangle;
            }
        }
    }
    r.details["seeds"] = seeds;
    r.expect("identity_violations", static_cast<double>(identity), "==", 0.0);
    r.expect("positivity_violations", static_cast<double>(positivity), "==", 0.0);
    r.expect("symmetry_violations", static_cast<double>(symmetry), "==", 0.0);
    r.expect("triangle_violations", static_cast<double>(triangle), "==", 0.0);
    r.expect("l1_bound_violations", static_cast<double>(l1), "==", 0.0);
    return r;
}

/// Endpoint histograms of the direct layered walk and of the time-changed construction.
template <Scenery F>
std::pair<std::map<Site, std::uint64_t>, std::map<Site, std::uint64_t>> timechange_histograms(
    const F& field, double t, std::uint64_t replicas, std::uint64_t seed, int jobs) {
    const auto direct = run_replicas(replicas, jobs, [&](std::uint64_t i) {
        RngStream rng(seed, i, StreamTag::Walk);
        Site end(field.dim() + 1);
        walk_vsrw(
            field, Site::origin(field.dim() + 1), t, rng, [&](const Site& x, double, double) { end = x; },
            [](double, const Site&) {});
        return end;
    });
    const auto composed = run_replicas(replicas, jobs, [&](std::uint64_t i) {
        RngStream tr(seed, i, StreamTag::Transverse), vr(seed, i, StreamTag::Vertical);
        return sample_time_changed(field, t, tr, vr);
    });
    std::map<Site, std::uint64_t> a, b;
    for (const auto& x : direct) ++a[x];
    for (const auto& x : composed) ++b[x];
    return {a, b};
}

inline SuiteReport suite_timechange(const SuiteOptions& o) {
    SuiteReport r("timechange", o);
    const std::uint64_t n = detail::full(o) ? 100000 : 10000;
    const SceneryField field(2.0, 1, derive_seed(o.seed, 0, StreamTag::Field));
    const auto [a, b] = timechange_histograms(field, 50.0, n, o.seed, o.jobs);
    const auto chi = chi_square_two_sample(a, b);
    r.details = {{"alpha", 2.0}, {"t", 50.0}, {"replicas", n}, {"statistic", chi.statistic},
                 {"degrees_of_freedom", chi.degrees_of_freedom}};
    r.expect("p_value", chi.p_value, ">=", 0.01);
    return r;
}

inline SuiteReport suite_appendix(const SuiteOptions& o) {
    SuiteReport r("appendix", o);
    const std::uint64_t n = detail::full(o) ? 1000000 : 20000;
    const std::uint64_t na = detail::full(o) ? 100000 : 10000;
    const std::vector<double> times{100.0, 400.0};
    const auto lt = origin_local_times(1, times, n, o.seed, StreamTag::Walk, o.jobs);
    std::uint64_t chen_violations = 0, kh_violations = 0;
    double min_kh_slack = INFINITY;
    auto cells = nlohmann::json::array();
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> samples(lt.size());
        for (std::size_t i = 0; i < lt.size(); ++i) samples[i] = lt[i][k];
        for (double b : {3.0, 5.0, 11.0}) {
            const double a = chen_a_value(1, times[k], b, na, derive_seed(o.seed, k), o.jobs);
            const auto rep = chen_check_samples(samples, times[k], b, a, default_chen_lambdas());
            for (const auto& c : rep.checks) chen_violations += c.violated ? 1 : 0;
            cells.push_back({{"kind", "chen"}, {"t", times[k]}, {"b", b}, {"a", a}});
        }
        for (int m : {2, 3}) {
            const auto kh = khasminskii_check_samples(samples, m, times[k]);
            kh_violations += kh.violated ? 1 : 0;
            min_kh_slack = std::min(min_kh_slack, kh.slack);
            cells.push_back({{"kind", "khasminskii"}, {"t", times[k]}, {"m", m}, {"lhs", kh.lhs}, {"rhs", kh.rhs}});
        }
    }
    r.details = {{"replicas", n}, {"cells", cells}, {"min_khasminskii_slack", min_kh_slack}};
    r.expect("chen_violations", static_cast<double>(chen_violations), "==", 0.0);
    r.expect("khasminskii_violations", static_cast<double>(kh_violations), "==", 0.0);
    return r;
}

inline SuiteReport suite_fieldlaw(const SuiteOptions& o) {
    SuiteReport r("fieldlaw", o);
    const std::uint64_t n = detail::full(o) ? 1000000 : 100000;
    const double ks_bound = 0.002 * std::sqrt(1e6 / static_cast<double>(n));
    for (double alpha : {0.5, 1.0, 2.0}) {
        const SceneryField field(alpha, 1, derive_seed(o.seed, static_cast<std::uint64_t>(alpha * 4), StreamTag::Field));
        std::vector<double> cdf(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            const double z = field.value(Site{static_cast<std::int64_t>(i)});
            cdf[i] = -std::expm1(-alpha * std::log(z));
        }
        r.expect("ks_alpha_" + io::format_number(alpha), ks_statistic(std::move(cdf)), "<=", ks_bound);
    }
    const std::uint64_t fields = detail::full(o) ? 100000 : 10000;
    const double alpha = 1.0, s = 10.0;
    const std::int64_t radius = 2;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < fields; ++i)
        hits += box_max(SceneryField(alpha, 1, derive_seed(o.seed, i, StreamTag::Auxiliary)), radius).value >= s ? 1 : 0;
    const double p = exceedance_prob(alpha, 1, radius, s);
    const double mc = static_cast<double>(hits) / static_cast<double>(fields);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(fields));
    r.details = {{"exceedance_exact", p}, {"exceedance_mc", mc}, {"fields", fields}};
    r.expect("exceedance_abs_z", std::abs(mc - p) / se, "<=", 3.0);
    return r;
}

inline SuiteReport suite_level(const SuiteOptions& o) {
    SuiteReport r("level", o);
    const auto grid = geometric_grid(1e2, detail::full(o) ? 1e4 : 1e3, detail::full(o) ? 5 : 3);
    const std::uint64_t seeds = detail::full(o) ? 10 : 3;
    const std::uint64_t n = detail::full(o) ? 200 : 50;
    const auto rep = level_occupation_scaling(1.0, 1, 1.0, 0.75, grid, seeds, n, o.seed, 1.0, o.jobs);
    auto pts = nlohmann::json::array();
    for (const auto& p : rep.points) pts.push_back({{"t", p.t}, {"mean_sup", p.mean_sup}});
    r.details = {{"eta", 1.0}, {"k_eps", 0.75}, {"points", pts}, {"slope_stderr", rep.slope_stderr}};
    r.expect("slope", std::isfinite(rep.slope) ? rep.slope : INFINITY, "<=", rep.reference_slope + 0.1);
    return r;
}

using SuiteFn = SuiteReport (*)(const SuiteOptions&);

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> reg{
        {"variational", suite_variational}, {"continuity", suite_continuity}, {"lln", suite_lln},
        {"scaling", suite_scaling},         {"polynomial", suite_polynomial}, {"strategy", suite_strategy},
        {"chemdist", suite_chemdist},       {"metric", suite_metric},         {"timechange", suite_timechange},
        {"appendix", suite_appendix},       {"fieldlaw", suite_fieldlaw},     {"level", suite_level},
    };
    return reg;
}

inline std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& [n, f] : suite_registry()) out.push_back(n);
    return out;
}

inline SuiteReport run_suite(const std::string& name, const SuiteOptions& o) {
    for (const auto& [n, f] : suite_registry())
        if (n == name) return f(o);
    throw UnknownSuiteError("unknown suite '" + name + "'");
}

}  // namespace scenerywalk::verify

#pragma once

// Command-line front end. Kept in a header so the tool stays a one-line main.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 refused.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scenerywalk/chemdist.hpp"
#include "scenerywalk/exponents.hpp"
#include "scenerywalk/io/report.hpp"
#include "scenerywalk/montecarlo.hpp"
#include "scenerywalk/verify/suites.hpp"

#ifndef SCENERYWALK_CALIBRATION_FILE
#define SCENERYWALK_CALIBRATION_FILE ""
#endif

namespace scenerywalk::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kRefused = 3 };

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Strict decimal parse; the whole string must be consumed.
inline double parse_number(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw UsageError("not a number: '" + std::string(s) + "'");
    return v;
}

/// "v", "v1,v2,...", or "lo:hi:n" (n points, linear or geometric). Empty input gives an empty grid.
inline std::vector<double> parse_grid(const std::string& spec, bool geometric) {
    std::vector<double> out;
    if (spec.find_first_not_of(' ') == std::string::npos) return out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw UsageError("range grid must be lo:hi:n, got '" + spec + "'");
        const double lo = parse_number(parts[0]), hi = parse_number(parts[1]), n = parse_number(parts[2]);
        if (n < 0 || n != std::floor(n)) throw UsageError("grid point count must be a nonnegative integer");
        if (n == 0) return out;
        if (geometric) {
            if (!(lo > 0.0 && hi > 0.0)) throw UsageError("geometric grid needs positive ends");
            if (n == 1) return {lo};
            return geometric_grid(lo, hi, static_cast<int>(n));
        }
        for (int i = 0; i < static_cast<int>(n); ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
        return out;
    }
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p));
    return out;
}

/// Parameters shared by the subcommands, validated before any compute.
struct RunConfig {
    std::string alpha = "1";
    int dim = 1;
    std::string rho = "1.5";
    std::string delta = "1";
    double gamma = 0.0;
    std::string t_grid = "1000";
    std::uint64_t replicas = 1000;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string format = "csv";
    int jobs = 1;
    std::string calibration = SCENERYWALK_CALIBRATION_FILE;

    // exponents
    std::string which = "p";
    // simulate
    std::string task = "lln";
    double quantile = 0.5;
    double b_value = 5.0;
    int moment = 2;
    double eta = 1.0;
    double k_eps = 0.75;
    std::uint64_t fields = 1;
    // verify
    std::vector<std::string> suites;
    std::string scale = "full";
};

inline Calibration calibration_for(const RunConfig& c) {
    if (c.calibration.empty() || !std::filesystem::exists(c.calibration)) return Calibration{};
    return load_calibration(c.calibration);
}

inline double single(const std::vector<double>& grid, const char* what) {
    if (grid.size() != 1) throw UsageError(std::string(what) + " must be a single value for this command");
    return grid.front();
}

inline std::vector<double> nonempty(std::vector<double> grid, const char* what) {
    if (grid.empty()) throw UsageError(std::string("empty grid for ") + what);
    return grid;
}

/// Trailing provenance columns carried by every simulate row.
inline std::vector<std::string> with_provenance(std::vector<std::string> cells, const io::Provenance& p) {
    cells.push_back(std::to_string(p.master_seed));
    cells.push_back(std::to_string(p.replicas));
    cells.push_back(io::provenance_string());
    return cells;
}

inline std::vector<std::string> with_provenance_header(std::vector<std::string> cells) {
    for (const char* h : {"seed", "replicas", "provenance"}) cells.emplace_back(h);
    return cells;
}

inline void emit(const RunConfig& c, const io::Provenance& prov, const io::CsvTable& table, nlohmann::json body,
                 std::ostream& out) {
    std::string content;
    if (c.format == "csv") {
        content = table.str(&prov);
    } else {
        nlohmann::json j = prov.to_json();
        j["results"] = std::move(body);
        content = io::dump(j);
    }
    io::write_once(c.out, content, out);
}

inline std::string F(double v) { return io::format_number(v); }

inline int cmd_exponents(const RunConfig& c, const io::Provenance& prov, std::ostream& out) {
    const DiagramKind kind = diagram_kind_from_string(c.which);
    const auto alphas = nonempty(parse_grid(c.alpha, false), "alpha");
    const auto xs = nonempty(parse_grid(kind == DiagramKind::P ? c.rho : c.delta, false),
                             kind == DiagramKind::P ? "rho" : "delta");
    const auto rows = phase_diagram(alphas, xs, kind, c.dim, c.gamma);
    const std::string xname = kind == DiagramKind::P ? "rho" : "delta";
    const std::string vname = kind == DiagramKind::P ? "p" : kind == DiagramKind::Q ? "q" : "exponent";
    io::CsvTable table({"alpha", xname, vname, "regime"});
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        table.add_row({F(r.alpha), F(r.x), F(r.value), r.regime});
        arr.push_back({{"alpha", r.alpha}, {xname, r.x}, {vname, io::number(r.value)}, {"regime", r.regime}});
    }
    nlohmann::json body = {{"which", to_string(kind)}, {"dim", c.dim}, {"rows", arr}};
    if (kind == DiagramKind::Displacement) body["gamma"] = c.gamma;
    emit(c, prov, table, body, out);
    return kOk;
}

inline int cmd_simulate(const RunConfig& c, const io::Provenance& prov, std::ostream& out) {
    if (c.replicas == 0) throw UsageError("replicas must be positive");
    if (c.jobs < 1) throw UsageError("jobs must be positive");
    const auto times = nonempty(parse_grid(c.t_grid, true), "t-grid");
    const auto alphas = nonempty(parse_grid(c.alpha, false), "alpha");
    const double alpha = single(alphas, "alpha");
    const Calibration cal = calibration_for(c);
    auto hdr = [](std::vector<std::string> h) { return io::CsvTable(with_provenance_header(std::move(h))); };

    if (c.task == "lln") {
        const auto r = lln_check(alpha, c.dim, single(times, "t-grid"), c.replicas, c.seed, c.jobs);
        auto table = hdr({"t", "mean", "std_error", "ci_low", "ci_high", "target", "z_score"});
        table.add_row(with_provenance({F(times[0]), F(r.mean), F(r.std_error), F(r.ci_low), F(r.ci_high), F(r.target),
                                       F(r.z_score())},
                                      prov));
        emit(c, prov, table,
             {{"task", "lln"}, {"alpha", alpha}, {"dim", c.dim}, {"t", times[0]}, {"mean", r.mean},
              {"std_error", r.std_error}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}, {"target", r.target},
              {"z_score", io::number(r.z_score())}},
             out);
        return kOk;
    }
    if (c.task == "scaling") {
        if (times.size() < 5) throw UsageError("scaling needs a t-grid with at least 5 points");
        const auto e = scaling_exponent_estimate(alpha, c.dim, times, c.replicas, c.quantile, c.seed, c.jobs);
        auto table = hdr({"t", "quantile_A_t", "slope", "slope_stderr", "target", "one_sided"});
        auto arr = nlohmann::json::array();
        for (std::size_t k = 0; k < e.times.size(); ++k) {
            table.add_row(with_provenance({F(e.times[k]), F(e.quantiles[k]), F(e.slope), F(e.slope_stderr), F(e.target),
                                           e.one_sided ? "true" : "false"},
                                          prov));
            arr.push_back({{"t", e.times[k]}, {"quantile", e.quantiles[k]}});
        }
        emit(c, prov, table,
             {{"task", "scaling"}, {"alpha", alpha}, {"dim", c.dim}, {"quantile_level", e.quantile_level},
              {"points", arr}, {"slope", e.slope}, {"slope_stderr", e.slope_stderr}, {"target", e.target},
              {"one_sided", e.one_sided}},
             out);
        return kOk;
    }
    if (c.task == "tail-rwrs" || c.task == "tail-rcm") {
        const bool rwrs = c.task == "tail-rwrs";
        const TailModel model = rwrs ? TailModel::rwrs(single(nonempty(parse_grid(c.rho, false), "rho"), "rho"))
                                     : TailModel::rcm(single(nonempty(parse_grid(c.delta, false), "delta"), "delta"), c.gamma);
        const auto scan =
            tail_prob_scan(model, alpha, c.dim, times, c.replicas, c.seed, cal.polynomial_floor_exponent, c.jobs);
        auto table = hdr({"t", "probability", "ci_low", "ci_high", "successes", "slope", "slope_stderr",
                          "floor_exponent", "above_floor"});
        auto arr = nlohmann::json::array();
        for (std::size_t k = 0; k < scan.times.size(); ++k) {
            const auto& e = scan.estimates[k];
            table.add_row(with_provenance({F(scan.times[k]), F(e.probability), F(e.ci_low), F(e.ci_high),
                                           std::to_string(e.successes), F(scan.slope), F(scan.slope_stderr),
                                           F(scan.floor_exponent), scan.above_floor ? "true" : "false"},
                                          prov));
            arr.push_back({{"t", scan.times[k]}, {"probability", e.probability}, {"ci_low", e.ci_low},
                           {"ci_high", e.ci_high}, {"successes", e.successes}});
        }
        emit(c, prov, table,
             {{"task", c.task}, {"alpha", alpha}, {"dim", c.dim}, {"estimates", arr}, {"slope", io::number(scan.slope)},
              {"slope_stderr", io::number(scan.slope_stderr)}, {"floor_exponent", scan.floor_exponent},
              {"above_floor", scan.above_floor}, {"calibration", cal.provenance}},
             out);
        return kOk;
    }
    if (c.task == "strategy") {
        const double rho = single(nonempty(parse_grid(c.rho, false), "rho"), "rho");
        const double t = single(times, "t-grid");
        auto table = hdr({"field", "t", "rho", "p", "regime", "log_prob", "exponent", "bridge_log_prob",
                          "bridge_exponent", "within_tolerance", "x_max", "z", "tau", "window"});
        auto arr = nlohmann::json::array();
        for (std::uint64_t f = 0; f < c.fields; ++f) {
            const auto b = strategy_lower_bound(alpha, c.dim, rho, t, derive_seed(c.seed, f, StreamTag::Field));
            std::ostringstream site;
            site << b.direct.site;
            const bool ok = b.within_tolerance(cal.strategy_eps_tol);
            table.add_row(with_provenance({std::to_string(f), F(t), F(rho), F(b.p_value), to_string(b.regime),
                                           F(b.direct.log_prob), F(b.exponent()), F(b.bridge.log_prob),
                                           F(b.bridge_exponent()), ok ? "true" : "false", site.str(), F(b.direct.z),
                                           F(b.direct.split.tau), F(b.direct.split.window)},
                                          prov));
            arr.push_back({{"field", f}, {"log_prob", b.direct.log_prob}, {"exponent", io::number(b.exponent())},
                           {"bridge_log_prob", b.bridge.log_prob}, {"within_tolerance", ok}});
        }
        emit(c, prov, table,
             {{"task", "strategy"}, {"alpha", alpha}, {"dim", c.dim}, {"rho", rho}, {"t", t},
              {"eps_tol", cal.strategy_eps_tol}, {"bounds", arr}, {"calibration", cal.provenance}},
             out);
        return kOk;
    }
    if (c.task == "chen") {
        const double t = single(times, "t-grid");
        const auto rep = chen_verify(c.dim, t, c.b_value, c.replicas, c.seed, default_chen_lambdas(), c.jobs);
        auto table = hdr({"t", "b", "a", "lambda", "probability", "ci_low", "ci_high", "bound", "violated"});
        auto arr = nlohmann::json::array();
        for (const auto& k : rep.checks) {
            table.add_row(with_provenance({F(t), F(rep.b_value), F(rep.a_value), F(k.lambda), F(k.mc_probability),
                                           F(k.estimate.ci_low), F(k.estimate.ci_high), F(k.bound),
                                           k.violated ? "true" : "false"},
                                          prov));
            arr.push_back({{"lambda", k.lambda}, {"probability", k.mc_probability}, {"bound", k.bound},
                           {"violated", k.violated}});
        }
        emit(c, prov, table,
             {{"task", "chen"}, {"dim", c.dim}, {"t", t}, {"b", rep.b_value}, {"a", rep.a_value}, {"checks", arr}}, out);
        return rep.any_violation() ? kVerificationFailed : kOk;
    }
    if (c.task == "khasminskii") {
        const double t = single(times, "t-grid");
        const auto r = khasminskii_verify(c.dim, t, c.moment, c.replicas, c.seed, {}, c.jobs);
        auto table = hdr({"t", "m", "lhs", "first_moment", "rhs_raw", "rhs", "slack", "violated"});
        table.add_row(with_provenance({F(t), std::to_string(r.m), F(r.lhs), F(r.first_moment), F(r.rhs_raw), F(r.rhs),
                                       F(r.slack), r.violated ? "true" : "false"},
                                      prov));
        emit(c, prov, table,
             {{"task", "khasminskii"}, {"dim", c.dim}, {"t", t}, {"m", r.m}, {"lhs", r.lhs},
              {"first_moment", r.first_moment}, {"rhs_raw", r.rhs_raw}, {"rhs", r.rhs}, {"slack", io::number(r.slack)},
              {"violated", r.violated}},
             out);
        return r.violated ? kVerificationFailed : kOk;
    }
    if (c.task == "level") {
        const auto rep = level_occupation_scaling(alpha, c.dim, c.eta, c.k_eps, times, c.fields, c.replicas, c.seed,
                                                  1.0, c.jobs);
        auto table = hdr({"t", "mean_sup", "box_radius", "slope", "slope_stderr", "reference_slope"});
        auto arr = nlohmann::json::array();
        for (const auto& p : rep.points) {
            table.add_row(with_provenance({F(p.t), F(p.mean_sup), std::to_string(p.box_radius), F(rep.slope),
                                           F(rep.slope_stderr), F(rep.reference_slope)},
                                          prov));
            arr.push_back({{"t", p.t}, {"mean_sup", p.mean_sup}, {"box_radius", p.box_radius}});
        }
        emit(c, prov, table,
             {{"task", "level"}, {"alpha", alpha}, {"dim", c.dim}, {"eta", c.eta}, {"k_eps", c.k_eps}, {"points", arr},
              {"slope", io::number(rep.slope)}, {"slope_stderr", io::number(rep.slope_stderr)},
              {"reference_slope", rep.reference_slope}},
             out);
        return kOk;
    }
    if (c.task == "timechange") {
        const double t = single(times, "t-grid");
        const SceneryField field(alpha, c.dim, derive_seed(c.seed, 0, StreamTag::Field));
        const auto [a, b] = verify::timechange_histograms(field, t, c.replicas, c.seed, c.jobs);
        const auto chi = chi_square_two_sample(a, b);
        auto table = hdr({"t", "statistic", "degrees_of_freedom", "p_value"});
        table.add_row(with_provenance({F(t), F(chi.statistic), std::to_string(chi.degrees_of_freedom), F(chi.p_value)},
                                      prov));
        emit(c, prov, table,
             {{"task", "timechange"}, {"alpha", alpha}, {"dim", c.dim}, {"t", t}, {"statistic", chi.statistic},
              {"degrees_of_freedom", chi.degrees_of_freedom}, {"p_value", io::number(chi.p_value)}},
             out);
        return kOk;
    }
    throw UsageError("unknown task '" + c.task +
                     "' (lln, scaling, tail-rwrs, tail-rcm, strategy, chen, khasminskii, level, timechange)");
}

inline int cmd_chemdist(const RunConfig& c, const io::Provenance& prov, std::ostream& out) {
    if (c.replicas == 0) throw UsageError("replicas (number of fields) must be positive");
    const auto times = nonempty(parse_grid(c.t_grid, true), "t-grid");
    const double alpha = single(nonempty(parse_grid(c.alpha, false), "alpha"), "alpha");
    const double delta = single(nonempty(parse_grid(c.delta, false), "delta"), "delta");
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < c.replicas; ++s) seeds.push_back(derive_seed(c.seed, s, StreamTag::Field));
    io::CsvTable table(with_provenance_header({"t", "field", "distance", "target_exponent"}));
    const double target = chemdist_exponent(alpha, delta, c.gamma, c.dim);
    nlohmann::json body = {{"alpha", alpha}, {"dim", c.dim}, {"delta", delta}, {"gamma", c.gamma},
                           {"target_exponent", target}};
    auto arr = nlohmann::json::array();
    std::vector<ChemdistPoint> points;
    if (times.size() >= 2) {
        const auto fit = chemdist_scaling(alpha, c.dim, delta, c.gamma, times, seeds, c.jobs);
        points = fit.points;
        body["slope"] = fit.slope;
        body["slope_stderr"] = fit.slope_stderr;
        table.add_footer("slope=" + F(fit.slope) + " slope_stderr=" + F(fit.slope_stderr));
    } else {
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            const SceneryField field(alpha, c.dim, seeds[s]);
            points.push_back({times[0], seeds[s],
                              layered_distance(field, Site::origin(c.dim + 1),
                                               displacement_target(c.dim, times[0], delta, c.gamma))});
        }
    }
    for (const auto& p : points) {
        const auto idx = static_cast<std::size_t>(std::find(seeds.begin(), seeds.end(), p.seed) - seeds.begin());
        table.add_row(with_provenance({F(p.t), std::to_string(idx), F(p.distance), F(target)}, prov));
        arr.push_back({{"t", p.t}, {"field", idx}, {"distance", p.distance}});
    }
    body["points"] = arr;
    emit(c, prov, table, body, out);
    return kOk;
}

inline int cmd_verify(const RunConfig& c, const io::Provenance& prov, std::ostream& out) {
    verify::SuiteOptions o;
    o.seed = c.seed;
    o.jobs = c.jobs;
    o.scale = verify::scale_from_string(c.scale);
    o.calibration = calibration_for(c);
    std::vector<std::string> names = c.suites.empty() ? verify::suite_names() : c.suites;
    const auto known = verify::suite_names();
    for (const auto& n : names)
        if (std::find(known.begin(), known.end(), n) == known.end())
            throw verify::UnknownSuiteError("unknown suite '" + n + "'");
    bool all = true;
    io::CsvTable table({"suite", "check", "value", "relation", "bound", "passed"});
    auto arr = nlohmann::json::array();
    for (const auto& n : names) {
        const auto rep = verify::run_suite(n, o);
        all = all && rep.passed();
        for (const auto& k : rep.checks)
            table.add_row({n, k.name, F(k.value), k.relation, F(k.bound), k.passed ? "true" : "false"});
        arr.push_back(rep.to_json());
    }
    emit(c, prov, table, {{"passed", all}, {"suites", arr}}, out);
    return all ? kOk : kVerificationFailed;
}

inline void add_common(CLI::App* sub, RunConfig& c) {
    sub->add_option("--alpha", c.alpha, "tail index: value, list a,b,c or range lo:hi:n");
    sub->add_option("--dim", c.dim, "transverse dimension d")->check(CLI::Range(1, kMaxDim - 1));
    sub->add_option("--seed", c.seed, "master seed (fallback: SCENERYWALK_SEED)");
    sub->add_option("--out", c.out, "output path, '-' for stdout; existing files are never replaced");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", c.jobs, "worker threads");
    sub->add_option("--calibration", c.calibration, "calibration JSON with pilot-run slack constants");
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Random walk in heavy-tailed random scenery: exponents, simulation and verification", "scenerywalk"};
    app.set_version_flag("--version", io::provenance_string());
    app.set_config("--config", "", "TOML config file; command-line flags win");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    RunConfig c;

    auto* ex = app.add_subcommand("exponents", "tabulate p, q or the displacement exponent over grids");
    add_common(ex, c);
    ex->add_option("--which", c.which, "p, q or displacement")->check(CLI::IsMember({"p", "q", "displacement"}));
    ex->add_option("--rho", c.rho, "rho grid (which=p)");
    ex->add_option("--delta", c.delta, "delta grid (which=q, displacement)");
    ex->add_option("--gamma", c.gamma, "gamma (which=displacement)");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimators");
    add_common(sim, c);
    sim->add_option("--task", c.task,
                    "lln, scaling, tail-rwrs, tail-rcm, strategy, chen, khasminskii, level or timechange");
    sim->add_option("--rho", c.rho, "rho for tail-rwrs and strategy");
    sim->add_option("--delta", c.delta, "delta for tail-rcm");
    sim->add_option("--gamma", c.gamma, "gamma for tail-rcm");
    sim->add_option("--t-grid", c.t_grid, "times: list or geometric range lo:hi:n");
    sim->add_option("--replicas", c.replicas, "walks per estimate");
    sim->add_option("--quantile", c.quantile, "quantile level for scaling")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--b", c.b_value, "b for chen");
    sim->add_option("--m", c.moment, "moment order for khasminskii")->check(CLI::Range(1, 4));
    sim->add_option("--eta", c.eta, "eta for level");
    sim->add_option("--k-eps", c.k_eps, "k*epsilon for level");
    sim->add_option("--fields", c.fields, "independent fields for strategy and level")->check(CLI::PositiveNumber);

    auto* cd = app.add_subcommand("chemdist", "chemical distance to t^delta e_1 + t^gamma e_2");
    add_common(cd, c);
    cd->add_option("--delta", c.delta, "delta");
    cd->add_option("--gamma", c.gamma, "gamma");
    cd->add_option("--t-grid", c.t_grid, "times: list or geometric range lo:hi:n");
    cd->add_option("--replicas", c.replicas, "number of fields");

    auto* ver = app.add_subcommand("verify", "run named verification suites");
    add_common(ver, c);
    ver->add_option("--suite", c.suites, "suite names (default: all)")->delimiter(',');
    ver->add_option("--scale", c.scale, "quick or full")->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--seed") == 0) {
        if (const char* env = std::getenv("SCENERYWALK_SEED")) {
            const std::string_view s(env);
            const auto res = std::from_chars(s.data(), s.data() + s.size(), c.seed);
            if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
                err << "error: SCENERYWALK_SEED must be a nonnegative integer\n";
                return kUsage;
            }
        }
    }

    std::string command = chosen->get_name();
    if (chosen == sim) command += ":" + c.task;
    std::uint64_t replicas = c.replicas;
    if (chosen == ex || chosen == ver) replicas = 0;
    if (chosen == sim && c.task == "strategy") replicas = c.fields;
    const io::Provenance prov{c.seed, replicas, command};
    try {
        if (chosen == ex) return cmd_exponents(c, prov, out);
        if (chosen == sim) return cmd_simulate(c, prov, out);
        if (chosen == cd) return cmd_chemdist(c, prov, out);
        return cmd_verify(c, prov, out);
    } catch (const RefusedError& e) {
        err << "refused: " << e.what() << '\n';
        return kRefused;
    } catch (const io::OutputExistsError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace scenerywalk::cli

#include <catch2/catch_amalgamated.hpp>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <vector>

#include "scenerywalk/montecarlo.hpp"

using namespace scenerywalk;

TEST_CASE("law of large numbers", "[montecarlo]") {
    auto r = lln_check(2.0, 1, 1e4, 1000, 50);
    CHECK(r.target == 2.0);
    CHECK(std::abs(r.mean - 2.0) <= 3.0 * r.std_error);

    auto one = lln_check_with([](std::uint64_t) { return ConstantField(1, 1.0); }, 1.0, 100.0, 50, 51);
    CHECK(one.mean == Catch::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(lln_check(1.0, 1, 10.0, 10, 1), std::domain_error);
    CHECK_THROWS_AS(lln_check(2.0, 1, 10.0, 0, 1), std::domain_error);
}

TEST_CASE("replica results do not depend on the number of jobs", "[montecarlo]") {
    auto a = lln_check(1.5, 2, 200.0, 300, 52, 1);
    auto b = lln_check(1.5, 2, 200.0, 300, 52, 3);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("scaling exponent of the functional", "[montecarlo]") {
    const auto grid = geometric_grid(1e2, 1e4, 5);
    auto flat = scaling_exponent_estimate_with([](std::uint64_t) { return ConstantField(1, 1.0); }, grid, 20, 0.5, 53);
    CHECK(flat.slope == Catch::Approx(1.0).epsilon(1e-12));

    auto d2 = scaling_exponent_estimate(0.8, 2, grid, 2000, 0.5, 54);
    CHECK(d2.one_sided);
    CHECK(d2.target == Catch::Approx(2.0 / 1.6));
    CHECK(d2.slope <= 1.35);

    auto d1 = scaling_exponent_estimate(0.8, 1, grid, 10, 0.5, 55);
    CHECK_FALSE(d1.one_sided);
    CHECK(d1.target == Catch::Approx(1.8 / 1.6));
    CHECK_THROWS_AS(scaling_exponent_estimate(1.5, 1, grid, 10, 0.5, 1), std::domain_error);
}

TEST_CASE("tail scan in the trivial and refused regimes", "[montecarlo]") {
    auto scan = tail_prob_scan(TailModel::rwrs(0.9), 0.5, 1, {10.0, 100.0}, 200, 56, 6.0);
    for (const auto& e : scan.estimates) CHECK(e.probability == 1.0);
    CHECK(scan.above_floor);

    CHECK_THROWS_AS(tail_prob_scan(TailModel::rwrs(1.5), 1.0, 1, {10.0}, 10, 1, 6.0), RefusedError);
    CHECK_THROWS_AS(tail_prob_scan(TailModel::rcm(1.0, 0.0), 1.0, 1, {10.0}, 10, 1, 6.0), RefusedError);
    CHECK_NOTHROW(require_polynomial_regime(TailModel::rwrs(1.2), 0.5, 1));
}

TEST_CASE("Wilson intervals cover at the nominal rate", "[montecarlo]") {
    const double p = 0.01;
    const int batches = 1000, n = 1000;
    int covered = 0;
    for (int b = 0; b < batches; ++b) {
        RngStream rng(57, static_cast<std::uint64_t>(b));
        std::uint64_t k = 0;
        for (int i = 0; i < n; ++i) k += rng.bernoulli(p) ? 1 : 0;
        const auto ci = wilson_interval(k, n);
        if (ci.low <= p && p <= ci.high) ++covered;
    }
    CHECK(covered >= 930);
}

TEST_CASE("strategy bound without travel", "[montecarlo]") {
    const double t = 10.0, rho = 2.5;
    ConstantField f(1, 1e4);
    const std::vector<StrategySplit> splits{{0.25, 0.25}, {0.5, 0.125}};
    auto b = strategy_lower_bound_with(f, 1.0, rho, t, 1.0, splits);
    CHECK(b.regime == Regime::Second);
    CHECK(b.direct.site == Site{0});
    double expect = -INFINITY;
    for (const auto& sp : splits) {
        const double tau = sp.tau * t, w = sp.window * t;
        const double stay_home = std::log(std::exp(-tau) * boost::math::cyl_bessel_i(0, tau));
        expect = std::max(expect, stay_home - w);
    }
    CHECK(b.direct.log_prob == Catch::Approx(expect).epsilon(1e-10));
    CHECK(b.direct.occupation_log == -b.direct.split.window * t);
    CHECK(b.bridge.log_prob <= b.direct.log_prob);

    CHECK_THROWS_AS(strategy_lower_bound(1.0, 1, 1.0, 100.0, 1), std::domain_error);
}

TEST_CASE("strategy bound in the first regime", "[montecarlo]") {
    int within = 0;
    const double p = p_exponent(1.0, 1.5, 1).value;
    CHECK(p == Catch::Approx(0.5));
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto b = strategy_lower_bound(1.0, 1, 1.5, 1e3, derive_seed(58, s, StreamTag::Field));
        REQUIRE(std::isfinite(b.direct.log_prob));
        if (b.exponent() <= p + 0.15) ++within;
    }
    CHECK(within >= 45);
}

TEST_CASE("local-time tail bound", "[montecarlo]") {
    CHECK(chen_bound({4.0 / std::exp(1.0), 1.0, 2.0}) == Catch::Approx(std::sqrt(2.0) * std::exp(1.0 / 24)));
    CHECK(chen_bound({4.0 / std::exp(1.0), 1.0, 2.0}) > 1.0);
    CHECK(chen_bound({4.0, 1.0, 11.0}) == Catch::Approx(std::sqrt(2.0) * std::exp(1.0 / 240 - 10.0)));
    CHECK(chen_bound({4.0, 1.0, 11.0}) == Catch::Approx(6.4e-5).epsilon(0.01));
    CHECK(chen_bound({1e8, 1.0, 3.0}) < 1e-15);
    CHECK_THROWS_AS(chen_bound({1.0, 1.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(chen_verify(1, 100.0, 1.0, 10, 1), std::domain_error);

    auto rep = chen_verify(1, 400.0, 5.0, 100000, 59, {1.0, 6.0}, 1, 20000);
    CHECK_FALSE(rep.any_violation());
    CHECK(rep.checks[0].bound >= 1.0);
}

TEST_CASE("moment bound", "[montecarlo]") {
    const std::vector<double> samples{1.0, 2.0, 4.5, 0.0};
    auto m1 = khasminskii_check_samples(samples, 1, 10.0);
    CHECK(m1.lhs == Catch::Approx(m1.rhs_raw));

    const double c = 0.7, t = 20.0;
    const std::vector<double> flat(100, c * t);
    for (int m = 1; m <= 4; ++m) {
        auto r = khasminskii_check_samples(flat, m, t);
        CHECK(r.lhs == Catch::Approx(std::pow(c * t, m)));
        CHECK(r.rhs == Catch::Approx(std::tgamma(m + 1.0) * std::pow(c * t, m)));
        CHECK_FALSE(r.violated);
    }
    CHECK_THROWS_AS(khasminskii_check_samples(flat, 5, t), std::domain_error);

    auto mc = khasminskii_verify(1, 100.0, 3, 20000, 60);
    CHECK_FALSE(mc.violated);
    CHECK(mc.slack >= 1.0);
}

TEST_CASE("occupation of level sets", "[montecarlo]") {
    SceneryField f(1.0, 1, 61);
    const double above = box_max(f, 5).value + 1.0;
    CHECK(mean_occupation_sup(f, above, 5, 50.0, 20, 1) == 0.0);
    CHECK(mean_occupation_sup(f, 1.0, 5, 50.0, 20, 1) == Catch::Approx(50.0).epsilon(1e-12));
    CHECK_THROWS_AS(level_mean_occupation(1.0, 1, 1.0, 0.4, 100.0, 1, 1, 1), std::domain_error);
    auto pt = level_mean_occupation(1.0, 1, 1.0, 0.75, 100.0, 3, 50, 62);
    CHECK(pt.box_radius == 100);
    CHECK(pt.mean_sup >= 0.0);
    CHECK(pt.mean_sup <= 100.0);
}

TEST_CASE("calibration file", "[montecarlo]") {
    const auto c = load_calibration(SCENERYWALK_CALIBRATION_FILE);
    CHECK(c.polynomial_floor_exponent > 0.0);
    CHECK(c.strategy_eps_tol > 0.0);
    CHECK(c.slope_slack > 0.0);
    CHECK_FALSE(c.provenance.empty());
    CHECK_THROWS(load_calibration("/nonexistent/calibration.json"));
}

#include <catch2/catch_amalgamated.hpp>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <map>
#include <vector>

#include "scenerywalk/ctrw.hpp"
#include "scenerywalk/kernel.hpp"

using namespace scenerywalk;

namespace {

struct Moments {
    double mean, var;
};

template <class Sample>
Moments moments(int n, Sample&& sample) {
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = sample(i);
        s += x;
        s2 += x * x;
    }
    const double m = s / n;
    return {m, (s2 - n * m * m) / (n - 1)};
}

}  // namespace

TEST_CASE("walk with a vanishing horizon does not move", "[ctrw]") {
    RngStream rng(1);
    auto p = simulate_srw(2, 1.0, 1e-12, rng);
    CHECK(p.events.empty());
    CHECK(p.position_at(1e-12) == Site::origin(2));
    ConstantField f(1, 3.0);
    auto v = simulate_vsrw(f, 1e-12, rng);
    CHECK(v.events.empty());
    CHECK_THROWS_AS(simulate_srw(1, 1.0, 0.0, rng), std::domain_error);
}

TEST_CASE("jump count of the simple walk is Poisson", "[ctrw]") {
    auto m = moments(10000, [](int i) {
        RngStream rng(21, static_cast<std::uint64_t>(i));
        return static_cast<double>(simulate_srw(1, 1.0, 100.0, rng).jump_count());
    });
    CHECK(std::abs(m.mean - 100.0) <= 3.0);
    CHECK(std::abs(m.mean - 100.0) <= 3.0 * std::sqrt(100.0 / 10000));
}

TEST_CASE("variance of the simple walk grows like rate times t", "[ctrw]") {
    const double t = 1e4;
    auto m = moments(4000, [&](int i) {
        RngStream rng(22, static_cast<std::uint64_t>(i));
        Site end = Site::origin(1);
        walk_srw(end, 1.0, t, rng, [](const Site&, double, double) {}, [&](double, const Site& x) { end = x; });
        return static_cast<double>(end.c[0]);
    });
    CHECK(std::abs(m.var / t - 1.0) <= 0.05);
}

TEST_CASE("variable speed walk with unit field is the simple walk", "[ctrw]") {
    ConstantField f(1, 1.0);
    const int n = 10000;
    auto m = moments(n, [&](int i) {
        RngStream rng(23, static_cast<std::uint64_t>(i));
        return static_cast<double>(simulate_vsrw(f, 100.0, rng).jump_count());
    });
    CHECK(std::abs(m.mean - 400.0) <= 3.0 * std::sqrt(400.0 / n));
}

TEST_CASE("fraction of vertical jumps in a constant field", "[ctrw]") {
    for (int d : {1, 2}) {
        const double c = 3.0;
        ConstantField f(d, c);
        std::uint64_t vertical = 0, total = 0;
        for (int i = 0; i < 2000; ++i) {
            RngStream rng(24, static_cast<std::uint64_t>(i));
            auto p = simulate_vsrw(f, 50.0, rng);
            REQUIRE(is_valid_path(p));
            Site prev = p.start;
            for (const auto& e : p.events) {
                if (e.site.c[0] != prev.c[0]) ++vertical;
                prev = e.site;
            }
            total += p.jump_count();
        }
        const double q = c / (c + d);
        const double frac = static_cast<double>(vertical) / static_cast<double>(total);
        CHECK(std::abs(frac - q) <= 3.0 * std::sqrt(q * (1 - q) / static_cast<double>(total)));
    }
}

TEST_CASE("generated paths satisfy the trajectory invariants", "[ctrw]") {
    SceneryField f(0.6, 2, 8);
    for (std::uint64_t s = 0; s < 200; ++s) {
        RngStream rng(25, s);
        REQUIRE(is_valid_path(simulate_srw(static_cast<int>(1 + s % 3), 1.0 + static_cast<double>(s % 4), 30.0, rng)));
        REQUIRE(is_valid_path(simulate_vsrw(f, 20.0, rng)));
    }
    WalkPath bad(Site{0}, 1.0);
    bad.events.push_back({0.5, Site{2}});
    CHECK_FALSE(is_valid_path(bad));
    WalkPath late(Site{0}, 1.0);
    late.events.push_back({1.5, Site{1}});
    CHECK_FALSE(is_valid_path(late));
}

TEST_CASE("time change with the identity clock", "[ctrw]") {
    ConstantField one(1, 1.0);
    RngStream a(26), b(27);
    auto s2 = simulate_srw(1, 2.0, 10.0, a);
    auto s1 = simulate_srw(1, 2.0, 10.0, b);
    auto clk = clock(one, s2);
    CHECK(clk.value_at(10.0) == Catch::Approx(10.0));
    const Site x = time_change_compose(s1, clk, s2, 10.0);
    CHECK(x.c[0] == s1.position_at(10.0).c[0]);
    CHECK(x.c[1] == s2.position_at(10.0).c[0]);
}

TEST_CASE("time change with a frozen transverse walk", "[ctrw]") {
    TableField f(1, {{Site{0}, 5.0}});
    WalkPath frozen(Site{0}, 2.0);
    auto clk = clock(f, frozen);
    CHECK(clk.value_at(2.0) == 10.0);
    RngStream r(28);
    auto longv = simulate_srw(1, 2.0, 10.0, r);
    CHECK_NOTHROW(time_change_compose(longv, clk, frozen, 2.0));
    auto shortv = simulate_srw(1, 2.0, 9.0, r);
    CHECK_THROWS_AS(time_change_compose(shortv, clk, frozen, 2.0), InsufficientHorizonError);
}

TEST_CASE("heat-kernel envelope", "[ctrw]") {
    HKConstants k{2.0, 1.0, 3.0, 0.5};
    auto e0 = hk_envelope(100.0, Site{0, 0}, k);
    CHECK(e0.lower == Catch::Approx(std::log(2.0) - std::log(100.0)));
    CHECK(e0.upper == Catch::Approx(std::log(3.0) - std::log(100.0)));

    auto edge = hk_envelope(5.0, Site{5}, k);
    CHECK(edge.gaussian_branch);
    CHECK_FALSE(hk_envelope(5.0, Site{6}, k).gaussian_branch);

    auto e = hk_envelope(100.0, Site{20}, HKConstants{1, 1, 1, 1});
    const double expect = -0.5 * std::log(100.0) - 4.0;
    CHECK(e.lower == Catch::Approx(expect));
    CHECK(e.upper == Catch::Approx(expect));

    CHECK_THROWS_AS(hk_envelope(0.5, Site{0}, k), std::domain_error);
    CHECK_THROWS_AS(hk_envelope(2.0, Site{0}, HKConstants{0, 1, 1, 1}), std::domain_error);
}

TEST_CASE("transition probability against the Bessel series", "[ctrw]") {
    const double exact = std::exp(-1.0) * boost::math::cyl_bessel_i(0, 1.0);
    CHECK(exact == Catch::Approx(0.4658).margin(1e-4));
    CHECK(std::exp(log_transition_prob(1.0, 1.0, Site{0})) == Catch::Approx(exact).epsilon(1e-12));
    CHECK(std::exp(log_transition_prob(1.0, 3.0, Site{2})) ==
          Catch::Approx(std::exp(-3.0) * boost::math::cyl_bessel_i(2, 3.0)).epsilon(1e-12));

    auto est = transition_prob_mc(1, 1.0, 1.0, Site{0}, 100000, 29);
    CHECK(std::abs(est.probability - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / 1e5));

    CHECK(transition_prob_mc(1, 1.0, 1e-9, Site{0}, 1000, 30).probability == 1.0);
    CHECK(transition_prob_mc(1, 1.0, 1e-9, Site{1}, 1000, 30).probability == 0.0);
}

TEST_CASE("transition probabilities are symmetric", "[ctrw]") {
    for (std::int64_t x : {1, 3, 6}) {
        auto p = transition_prob_mc(1, 1.0, 10.0, Site{x}, 40000, 31);
        auto q = transition_prob_mc(1, 1.0, 10.0, Site{-x}, 40000, 32);
        const double se = std::hypot(p.binomial_stderr(), q.binomial_stderr());
        CHECK(std::abs(p.probability - q.probability) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("fitted envelope contains fresh kernel estimates", "[ctrw]") {
    auto samples = [](std::uint64_t seed) {
        std::vector<KernelSample> out;
        const std::uint64_t n = 40000;
        for (double t : {10.0, 100.0}) {
            std::map<std::int64_t, std::uint64_t> hist;
            for (std::uint64_t i = 0; i < n; ++i) {
                RngStream rng(seed, i);
                Site end = Site::origin(1);
                walk_srw(end, 1.0, t, rng, [](const Site&, double, double) {}, [&](double, const Site& x) { end = x; });
                ++hist[end.c[0]];
            }
            const auto r = static_cast<std::int64_t>(2 * t);
            for (std::int64_t x = -r; x <= r; ++x) out.push_back({t, Site{x}, make_tail_estimate(hist[x], n, t)});
        }
        return out;
    };
    const auto k = fit_hk_constants(samples(33));
    int checked = 0;
    for (const auto& s : samples(34)) {
        if (!(s.estimate.ci_low > 0.0)) continue;
        const auto env = hk_envelope(s.t, s.x, k);
        ++checked;
        CHECK(std::log(s.estimate.ci_high) >= env.lower);
        CHECK(std::log(s.estimate.ci_low) <= env.upper);
    }
    CHECK(checked > 40);
}

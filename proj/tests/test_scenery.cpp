#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "scenerywalk/scenery.hpp"
#include "scenerywalk/stats.hpp"

using namespace scenerywalk;

TEST_CASE("inverse CDF of the Pareto law", "[scenery]") {
    CHECK(pareto_from_uniform(1.0, 1.0) == 1.0);
    CHECK(pareto_from_uniform(1.0, 0.3) == 1.0);
    CHECK(pareto_from_uniform(0.25, 1.0) == Catch::Approx(4.0).epsilon(1e-15));
    CHECK(pareto_from_uniform(0.25, 2.0) == Catch::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("field values are deterministic and at least one", "[scenery]") {
    SceneryField f(0.7, 2, 123);
    std::vector<double> first;
    for_each_in_box(2, 5, [&](const Site& x) { first.push_back(f.value(x)); });
    std::vector<double> second;
    std::vector<Site> sites;
    for_each_in_box(2, 5, [&](const Site& x) { sites.push_back(x); });
    std::reverse(sites.begin(), sites.end());
    for (const auto& x : sites) second.push_back(SceneryField(0.7, 2, 123).value(x));
    std::reverse(second.begin(), second.end());
    CHECK(first == second);
    for (double v : first) {
        CHECK(v >= 1.0);
        CHECK(std::isfinite(v));
    }
    CHECK(f.value(Site{1, 2}) != SceneryField(0.7, 2, 124).value(Site{1, 2}));
    CHECK_THROWS_AS(SceneryField(0.0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(SceneryField(1.0, 0, 1), std::domain_error);
}

TEST_CASE("marginal law matches the Pareto tail", "[scenery]") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        SceneryField f(alpha, 1, 99);
        std::vector<double> cdf;
        cdf.reserve(200000);
        for (std::int64_t i = 0; i < 200000; ++i) cdf.push_back(1.0 - std::pow(f.value(Site{i}), -alpha));
        // the 0.002 bound at 1e6 sites scaled to 2e5
        CHECK(ks_statistic(cdf) < 0.002 * std::sqrt(1e6 / 2e5));
    }
}

TEST_CASE("box maximum", "[scenery]") {
    SceneryField f(1.0, 2, 5);
    auto m0 = box_max(f, 0);
    CHECK(m0.value == f.value(Site::origin(2)));
    CHECK(m0.argmax == Site::origin(2));

    TableField t(1, {{Site{-1}, 4.0}, {Site{0}, 2.0}, {Site{1}, 9.0}});
    auto m = box_max(t, 1);
    CHECK(m.value == 9.0);
    CHECK(m.argmax == Site{1});

    TableField tie(1, {{Site{-1}, 9.0}, {Site{1}, 9.0}});
    CHECK(box_max(tie, 1).argmax == Site{-1});
    CHECK_THROWS_AS(box_max(f, -1), std::domain_error);
}

TEST_CASE("box maximum grows like the number of sites for alpha = 1", "[scenery]") {
    for (std::int64_t n : {1000, 10000, 100000, 1000000}) {
        std::vector<double> ratios;
        const std::uint64_t seeds = n < 1000000 ? 201 : 41;
        for (std::uint64_t seed = 0; seed < seeds; ++seed) {
            SceneryField f(1.0, 1, derive_seed(77, seed, StreamTag::Field));
            ratios.push_back(std::log(box_max(f, n).value) / std::log(2.0 * n + 1.0));
        }
        const auto mid = ratios.begin() + static_cast<std::ptrdiff_t>(seeds / 2);
        std::nth_element(ratios.begin(), mid, ratios.end());
        CHECK(std::abs(*mid - 1.0) <= 0.1);
    }
}

TEST_CASE("exceedance probability", "[scenery]") {
    CHECK(exceedance_prob(1.0, 1, 0, 2.0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(exceedance_prob(1.0, 3, 4, 1.0) == 1.0);
    CHECK(exceedance_prob(2.0, 1, 1, 10.0) == Catch::Approx(0.029701).epsilon(1e-12));
    CHECK_THROWS_AS(exceedance_prob(1.0, 1, 1, 0.5), std::domain_error);
}

TEST_CASE("exceedance probability agrees with sampled fields", "[scenery]") {
    const int fields = 100000;
    const double s = 10.0;
    int hits = 0;
    for (int i = 0; i < fields; ++i) {
        SceneryField f(1.0, 1, derive_seed(3, static_cast<std::uint64_t>(i), StreamTag::Field));
        if (box_max(f, 2).value >= s) ++hits;
    }
    const double p = exceedance_prob(1.0, 1, 2, s);
    const double se = std::sqrt(p * (1 - p) / fields);
    CHECK(std::abs(static_cast<double>(hits) / fields - p) <= 3 * se);
}

TEST_CASE("level sets", "[scenery]") {
    SceneryField f(0.8, 2, 17);
    CHECK(level_set(f, 3, 1.0).sites.size() == 49);
    CHECK(level_set(f, 3, box_max(f, 3).value + 1.0).sites.empty());

    TableField t(1, {{Site{-1}, 4.0}, {Site{0}, 2.0}, {Site{1}, 9.0}});
    auto ls = level_set(t, 1, 3.0);
    CHECK(ls.sites == std::vector<Site>{Site{-1}, Site{1}});
    CHECK(ls.contains(Site{1}));
    CHECK_FALSE(ls.contains(Site{0}));

    const auto low = level_set(f, 10, 2.0);
    const auto high = level_set(f, 10, 5.0);
    for (const auto& x : high.sites) CHECK(low.contains(x));

    CHECK_THROWS_AS(level_set(f, 100, 2.0, 1000.0), ResourceError);
    CHECK_THROWS_AS(level_set(f, 1, 0.5), std::domain_error);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "scenerywalk/chemdist.hpp"
#include "scenerywalk/verify/oracles.hpp"

using namespace scenerywalk;

TEST_CASE("edge weight", "[chemdist]") {
    CHECK(edge_weight(4.0) == 0.5);
    CHECK(edge_weight(1.0) == 1.0);
    CHECK(edge_weight(0.25) == 1.0);
    CHECK_THROWS_AS(edge_weight(0.0), std::domain_error);
    CHECK_THROWS_AS(edge_weight(-1.0), std::domain_error);
}

TEST_CASE("hand-computed distances", "[chemdist]") {
    TableField f(1, {{Site{0}, 4.0}, {Site{1}, 1.0}});
    const Box box{Site{-3, -3}, Site{3, 3}};
    CHECK(chemical_distance(f, box, Site{0, 0}, Site{0, 0}).distance == 0.0);
    // one vertical edge at z = 4 and one transverse edge
    CHECK(chemical_distance(f, box, Site{0, 0}, Site{1, 1}).distance == Catch::Approx(1.5));
    CHECK(chemical_distance(f, box, Site{0, 0}, Site{2, 0}).distance == Catch::Approx(1.0));
    CHECK(chemical_distance(f, box, Site{0, 1}, Site{2, 1}).distance == Catch::Approx(2.0));
    CHECK(layered_distance(f, Site{0, 0}, Site{1, 1}) == Catch::Approx(1.5));

    ConstantField one(2, 1.0);
    const Box cube{Site{0, 0, 0}, Site{0, 7, 0}};
    CHECK(chemical_distance(one, cube, Site{0, 0, 0}, Site{0, 7, 0}).distance == 7.0);
}

TEST_CASE("search agrees with path enumeration on small boxes", "[chemdist]") {
    for (int total : {2, 3}) {
        const auto boxes = oracle::small_boxes(total, 12);
        REQUIRE(!boxes.empty());
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            const auto& box = boxes[b];
            SceneryField f(0.5, total - 1, derive_seed(40, b, StreamTag::Field));
            const auto n = static_cast<std::size_t>(box.site_count());
            for (std::size_t i = 0; i < n; ++i) {
                const Site x = box.site(i);
                const auto dist = box_distances(f, box, x);
                for (std::size_t j = 0; j < n; ++j) {
                    const Site y = box.site(j);
                    REQUIRE(dist[j] == Catch::Approx(oracle::brute_force_distance(f, box, x, y)).epsilon(1e-12));
                    REQUIRE(dist[j] <= static_cast<double>(l1_distance(x, y)) + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("layered search matches the box search on sufficient boxes", "[chemdist]") {
    for (int d : {1, 2}) {
        for (std::uint64_t s = 0; s < 40; ++s) {
            SceneryField f(0.6, d, derive_seed(41, s, StreamTag::Field));
            RngStream rng(41, s);
            Site x(d + 1), y(d + 1);
            for (int i = 0; i <= d; ++i) {
                x.c[i] = static_cast<std::int64_t>(rng.below(9)) - 4;
                y.c[i] = static_cast<std::int64_t>(rng.below(9)) - 4;
            }
            const Box box = sufficient_box(x, y);
            REQUIRE(box_is_sufficient(box, x, y));
            const auto r = chemical_distance(f, box, x, y);
            CHECK_FALSE(r.box_warning);
            CHECK(layered_distance(f, x, y) == Catch::Approx(r.distance).epsilon(1e-12));
        }
    }
}

TEST_CASE("small boxes raise the warning flag", "[chemdist]") {
    ConstantField f(1, 1.0);
    const Site x{0, 0}, y{8, 0};
    const auto tight = bounding_box(x, y, 0);
    CHECK_FALSE(box_is_sufficient(tight, x, y));
    CHECK(chemical_distance(f, tight, x, y).box_warning);
    CHECK_THROWS_AS(chemical_distance(f, tight, x, Site{9, 0}), std::domain_error);
}

TEST_CASE("metric axioms on 5 x 5 boxes", "[chemdist]") {
    const Box box{Site{0, 0}, Site{4, 4}};
    const auto n = static_cast<std::size_t>(box.site_count());
    for (std::uint64_t s = 0; s < 100; ++s) {
        SceneryField f(0.5, 1, derive_seed(42, s, StreamTag::Field));
        std::vector<std::vector<double>> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = box_distances(f, box, box.site(i));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                REQUIRE((d[i][j] == 0.0) == (i == j));
                REQUIRE(std::abs(d[i][j] - d[j][i]) <= 1e-12 * d[i][j]);
                for (std::size_t k = 0; k < n; ++k) REQUIRE(d[i][k] <= d[i][j] + d[j][k] + 1e-12);
            }
    }
}

TEST_CASE("displacement targets round to the closest lattice point", "[chemdist]") {
    CHECK(displacement_target(1, 100.0, 1.0, 0.5) == Site{100, 10});
    CHECK(displacement_target(1, 6.25, 0.5, 0.0) == Site{3, 1});  // 2.5 rounds away from zero
    CHECK(displacement_target(2, 10.0, 0.6, 0.0) == Site{4, 1, 0});
}

TEST_CASE("scaling in the unit field is pure l1 geometry", "[chemdist]") {
    const auto grid = geometric_grid(1e2, 1e5, 7);
    const auto fit = chemdist_scaling_with([](std::uint64_t) { return ConstantField(1, 1.0); }, 1, 1.0, 0.5, grid, {1});
    std::vector<double> ts, l1;
    for (double t : grid) {
        ts.push_back(t);
        l1.push_back(static_cast<double>(l1_norm(displacement_target(1, t, 1.0, 0.5))));
    }
    CHECK(fit.slope == Catch::Approx(fit_loglog(ts, l1).slope).epsilon(1e-12));
    const auto straight = chemdist_scaling_with([](std::uint64_t) { return ConstantField(1, 1.0); }, 1, 1.0, 0.0, grid, {1});
    CHECK(std::abs(straight.slope - 1.0) < 0.005);
    CHECK_THROWS_AS(chemdist_scaling(1.0, 1, 0.5, 0.0, grid, {1}), std::domain_error);
}

TEST_CASE("scaling exponent in a Pareto field", "[chemdist]") {
    const auto grid = geometric_grid(1e2, 1e5, 7);
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(derive_seed(43, s, StreamTag::Field));
    const auto vertical = chemdist_scaling(1.0, 1, 1.0, 0.0, grid, seeds);
    CHECK(std::abs(vertical.slope - 2.0 / 3.0) <= 0.1);
    const auto transverse = chemdist_scaling(1.0, 1, 1.0, 0.9, grid, seeds);
    CHECK(std::abs(transverse.slope - 0.9) <= 0.1);
}

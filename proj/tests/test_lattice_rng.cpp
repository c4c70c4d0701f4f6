#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "scenerywalk/lattice.hpp"
#include "scenerywalk/rng.hpp"

using namespace scenerywalk;

TEST_CASE("derive_seed is a pure function of its arguments", "[rng]") {
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    CHECK(derive_seed(7, 3, StreamTag::Field) == derive_seed(7, 3, StreamTag::Field));
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 10; ++m)
        for (std::uint64_t i = 0; i < 100; ++i)
            for (auto tag : {StreamTag::Walk, StreamTag::Field, StreamTag::Vertical})
                seen.insert(derive_seed(m, i, tag));
    CHECK(seen.size() == 3000);
}

TEST_CASE("streams with different tags are uncorrelated", "[rng]") {
    RngStream a(11, 0, StreamTag::Vertical), b(11, 0, StreamTag::Transverse);
    const int n = 200000;
    double sa = 0, sb = 0, sab = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform(), y = b.uniform();
        sa += x;
        sb += y;
        sab += x * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    // sd of the sample covariance of independent U(0,1) is 1/(12 sqrt(n))
    CHECK(std::abs(cov) < 4.0 / (12.0 * std::sqrt(n)));
    CHECK(std::abs(sa / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("uniform variates respect their ranges", "[rng]") {
    RngStream r(5);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        const double v = r.uniform_open();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(v > 0.0);
        REQUIRE(v <= 1.0);
        REQUIRE(r.below(6) < 6u);
    }
}

TEST_CASE("exponential variates have the requested mean", "[rng]") {
    RngStream r(9);
    const int n = 200000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.exponential(4.0);
    CHECK(std::abs(s / n - 0.25) < 4.0 * 0.25 / std::sqrt(n));
}

TEST_CASE("box and shell enumeration counts", "[lattice]") {
    for (int d = 1; d <= 3; ++d)
        for (std::int64_t r = 0; r <= 3; ++r) {
            std::size_t box = 0, shell = 0;
            for_each_in_box(d, r, [&](const Site& x) {
                ++box;
                REQUIRE(linf_norm(x) <= r);
            });
            for_each_on_shell(d, r, [&](const Site& x) {
                ++shell;
                REQUIRE(linf_norm(x) == r);
            });
            const double expect_box = std::pow(2.0 * r + 1, d);
            const double expect_shell = r == 0 ? 1.0 : expect_box - std::pow(2.0 * r - 1, d);
            CHECK(box == static_cast<std::size_t>(expect_box));
            CHECK(shell == static_cast<std::size_t>(expect_shell));
        }
}

TEST_CASE("norms, steps and the transverse projection", "[lattice]") {
    Site x{3, -4, 1};
    CHECK(l1_norm(x) == 8);
    CHECK(linf_norm(x) == 4);
    CHECK(euclidean_norm(x) == Catch::Approx(std::sqrt(26.0)));
    CHECK(transverse(x) == Site{-4, 1});
    for (unsigned k = 0; k < 6; ++k) {
        Site y = x;
        step(y, k);
        CHECK(l1_distance(x, y) == 1);
    }
    CHECK_THROWS_AS(Site(0), std::invalid_argument);
    CHECK(Site::origin(2).is_origin());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetfront/constant_coeff.hpp"

using namespace hetfront;

namespace {
constexpr double kSqrt2Over3 = 0.47140452079103168293;
}

TEST_CASE("interface value basics") {
    CHECK(vstar(0.0, 1.0) == 0.0);
    CHECK(vstar(1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
    for (double c : {0.1, 0.83, 2.0, 7.5}) {
        CHECK(vstar(-c, 1.0) == doctest::Approx(-vstar(c, 1.0)).epsilon(1e-15));
        CHECK(std::abs(vstar(c, 1.0)) < 1.0);
        // derivative against central difference
        const double h = 1e-6;
        const double fd = (vstar(c + h, 1.0) - vstar(c - h, 1.0)) / (2.0 * h);
        CHECK(vstar_dc(c, 1.0) == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK(vstar(1e9, 2.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("speed relation and its roots on the single branch") {
    SpeedRoots r = speed_roots(0.5, 0.2, 1.0);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.regime == SpeedRegime::Single);
    CHECK(r.roots[0] == doctest::Approx(0.831405912154).epsilon(1e-10));
    CHECK(std::abs(speed_relation(r.roots[0], {0.5, 0.2, 1.0})) < 1e-10);
}

TEST_CASE("triple regime of the mixed-feedback example") {
    SpeedRoots r = speed_roots(2.5, 0.2, 1.0);
    REQUIRE(r.roots.size() == 3);
    CHECK(r.regime == SpeedRegime::Triple);
    CHECK(r.roots[0] == doctest::Approx(-4.40453405319).epsilon(1e-9));
    CHECK(r.roots[1] == doctest::Approx(-0.260370691577).epsilon(1e-9));
    CHECK(r.roots[2] == doctest::Approx(5.3971061665).epsilon(1e-9));
    for (double c : r.roots) CHECK(std::abs(speed_relation(c, {2.5, 0.2, 1.0})) < 1e-10);
    // sorted ascending
    CHECK(r.roots[0] < r.roots[1]);
    CHECK(r.roots[1] < r.roots[2]);
}

TEST_CASE("degenerate and linear special cases") {
    // gamma = 0: c = 0 is always a root (odd F)
    SpeedRoots r0 = speed_roots(0.3, 0.0, 1.0);
    bool has_zero = false;
    for (double c : r0.roots)
        if (std::abs(c) < 1e-12) has_zero = true;
    CHECK(has_zero);

    // alpha = 0: the relation is linear, c = 3 gamma / sqrt(2)
    SpeedRoots rl = speed_roots(0.0, 0.2, 1.0);
    REQUIRE(rl.roots.size() == 1);
    CHECK(rl.roots[0] == doctest::Approx(0.2 / kSqrt2Over3).epsilon(1e-12));
}

TEST_CASE("fold of the speed relation") {
    BifurcationPoint bp = bifurcation_point(0.2, 1.0);
    CHECK(bp.c_bp == doctest::Approx(-std::cbrt(2.4 / std::sqrt(2.0))).epsilon(1e-12));
    CHECK(bp.c_bp == doctest::Approx(-1.19279391422).epsilon(1e-9));
    CHECK(bp.alpha_bp == doctest::Approx(1.48820927164).epsilon(1e-9));
    CHECK(bp.alpha_bp == doctest::Approx(1.489).epsilon(1e-3));

    // double root: both F and F' vanish at (c_bp, alpha_bp)
    ModelParams p{bp.alpha_bp, 0.2, 1.0};
    CHECK(std::abs(speed_relation(bp.c_bp, p)) < 1e-8);
    CHECK(std::abs(bp.alpha_bp * vstar_dc(bp.c_bp, 1.0) - kSqrt2Over3) < 1e-8);

    CHECK_THROWS(bifurcation_point(0.0, 1.0));
    CHECK_THROWS(bifurcation_point(-0.2, 1.0));
}

TEST_CASE("root count switches exactly at the fold") {
    BifurcationPoint bp = bifurcation_point(0.2, 1.0);
    CHECK(speed_roots(bp.alpha_bp - 0.05, 0.2, 1.0).roots.size() == 1);
    CHECK(speed_roots(bp.alpha_bp + 0.05, 0.2, 1.0).roots.size() == 3);
    // just past the fold two roots sit near c_bp
    SpeedRoots r = speed_roots(bp.alpha_bp + 1e-4, 0.2, 1.0);
    REQUIRE(r.roots.size() == 3);
    CHECK(std::abs(r.roots[0] - bp.c_bp) < 0.05);
    CHECK(std::abs(r.roots[1] - bp.c_bp) < 0.05);
}

TEST_CASE("roots move continuously through an alpha sweep") {
    double prev = speed_roots(2.0, 0.2, 1.0).roots.front();
    for (double a = 2.01; a <= 3.0; a += 0.01) {
        const double cur = speed_roots(a, 0.2, 1.0).roots.front();
        CHECK(std::abs(cur - prev) < 0.05);
        prev = cur;
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetfront/background.hpp"
#include "hetfront/config.hpp"

using namespace hetfront;

namespace {
const HeterogeneitySpec kZero = HeterogeneitySpec::zero();
}

TEST_CASE("homogeneous background is the constant state") {
    const GridSpec grid = GridSpec::over(-10.0, 10.0, 0.05);
    BackgroundState plus = background_state(+1, kZero, kZero, grid);
    BackgroundState minus = background_state(-1, kZero, kZero, grid);
    for (std::size_t i = 0; i < grid.n; i += 11) {
        CHECK(plus.v.values[i] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(plus.q.values[i]) < 1e-10);
        CHECK(minus.v.values[i] == doctest::Approx(-1.0).epsilon(1e-10));
    }
}

TEST_CASE("plus and minus states are pointwise negatives when f1 = 0") {
    const GridSpec grid = GridSpec::over(-8.0, 8.0, 0.02);
    const HeterogeneitySpec f2 = example_preset("ex1").f2;
    BackgroundState plus = background_state(+1, kZero, f2, grid);
    BackgroundState minus = background_state(-1, kZero, f2, grid);
    for (std::size_t i = 0; i < grid.n; i += 7) {
        CHECK(plus.v.values[i] == doctest::Approx(-minus.v.values[i]).epsilon(1e-13));
        CHECK(plus.q.values[i] == doctest::Approx(-minus.q.values[i]).epsilon(1e-13));
    }
    // positivity of the (+) state: inf(1 + f2) > 0 for this profile
    for (double v : plus.v.values) CHECK(v > 0.0);
}

TEST_CASE("frozen gradient values for the five-bump profile") {
    const HeterogeneitySpec f2 = example_preset("ex1").f2;
    auto q = make_q_minus(f2);
    auto v = make_v_minus(f2);
    CHECK(q(0.0) == doctest::Approx(-0.00673599795470411).epsilon(1e-9));
    CHECK(q(0.38) == doctest::Approx(0.100927215258879).epsilon(1e-9));
    CHECK(v(0.38) == doctest::Approx(-1.06526409132878).epsilon(1e-9));
    // far from the support the minus state settles to -1, gradient 0
    CHECK(v(30.0) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(q(30.0)) < 1e-9);

    // grid version agrees with the continuous evaluators
    const GridSpec grid = GridSpec::over(-8.0, 8.0, 0.01);
    BackgroundState bg = background_state(-1, kZero, f2, grid);
    for (double x : {-1.3, 0.0, 0.38, 0.9, 2.4}) {
        CHECK(eval_cubic(bg.v, x) == doctest::Approx(v(x)).epsilon(1e-8));
        CHECK(eval_cubic(bg.q, x) == doctest::Approx(q(x)).epsilon(1e-7));
    }
}

TEST_CASE("reflection symmetry for even heterogeneity") {
    HeterogeneitySpec f2 = HeterogeneitySpec::gaussian_sum(0.0, {{0.4, 0.0, 1.5}});
    const GridSpec grid = GridSpec::over(-9.0, 9.0, 0.01);
    BackgroundState bg = background_state(-1, kZero, f2, grid);
    const std::size_t n = grid.n;
    for (std::size_t i = 0; i < n / 2; i += 13) {
        CHECK(bg.v.values[i] == doctest::Approx(bg.v.values[n - 1 - i]).epsilon(1e-10));
        CHECK(bg.q.values[i] == doctest::Approx(-bg.q.values[n - 1 - i]).epsilon(1e-9));
    }
}

TEST_CASE("riccati slopes: constant coefficients") {
    const GridSpec grid = GridSpec::over(-5.0, 5.0, 0.05);
    RiccatiSlopes s0 = riccati_slopes(kZero, grid);
    for (std::size_t i = 0; i < grid.n; i += 17) {
        CHECK(s0.a_u.values[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s0.a_s.values[i] == doctest::Approx(-1.0).epsilon(1e-12));
    }
    RiccatiSlopes sk = riccati_slopes(HeterogeneitySpec::constant(0.44), grid);
    for (std::size_t i = 0; i < grid.n; i += 17)
        CHECK(sk.a_u.values[i] == doctest::Approx(std::sqrt(1.44)).epsilon(1e-12));
}

TEST_CASE("riccati slopes: linear response to a small bump") {
    const GridSpec grid = GridSpec::over(-12.0, 12.0, 0.02);
    const auto dev = [&](double d) {
        RiccatiSlopes s = riccati_slopes(HeterogeneitySpec::gaussian_sum(0.0, {{d, 0.0, 1.0}}), grid);
        double m = 0.0;
        for (double a : s.a_u.values) m = std::max(m, std::abs(a - 1.0));
        return m;
    };
    const double d1 = dev(0.02), d2 = dev(0.01);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("riccati slopes stay bounded away from zero and satisfy the equation") {
    const GridSpec grid = GridSpec::over(-10.0, 10.0, 0.01);
    HeterogeneitySpec f1 = HeterogeneitySpec::gaussian_sum(0.0, {{0.8, 1.0, 0.7}, {-0.3, -2.0, 1.1}});
    RiccatiSlopes s = riccati_slopes(f1, grid);
    for (std::size_t i = 2; i + 2 < grid.n; i += 41) {
        CHECK(s.a_u.values[i] > 0.0);
        CHECK(s.a_s.values[i] < 0.0);
        // centered derivative vs 1 + f1 - a^2
        const double x = grid.x(i);
        const double da = (s.a_u.values[i + 1] - s.a_u.values[i - 1]) / (2.0 * grid.dx);
        const double rhs = 1.0 + f1(x) - s.a_u.values[i] * s.a_u.values[i];
        CHECK(da == doctest::Approx(rhs).epsilon(5e-4));
    }
    // seeds below the dichotomy threshold are rejected
    CHECK_THROWS(riccati_slopes(HeterogeneitySpec::constant(-1.5), grid));
}

TEST_CASE("robin boundary-value path satisfies its discrete equation") {
    const GridSpec grid = GridSpec::over(-10.0, 10.0, 0.01);
    HeterogeneitySpec f1 = HeterogeneitySpec::gaussian_sum(0.0, {{0.6, 0.5, 0.9}});
    HeterogeneitySpec f2 = example_preset("ex1").f2;
    BackgroundState bg = background_state(-1, f1, f2, grid);
    const double idx2 = 1.0 / (grid.dx * grid.dx);
    double rmax = 0.0;
    for (std::size_t i = 1; i + 1 < grid.n; ++i) {
        const double x = grid.x(i);
        const double lap =
            (bg.v.values[i - 1] - 2.0 * bg.v.values[i] + bg.v.values[i + 1]) * idx2;
        rmax = std::max(rmax, std::abs(lap - (1.0 + f1(x)) * bg.v.values[i] + (1.0 + f2(x)) * (-1.0)));
    }
    CHECK(rmax < 1e-8);

    // constant f1: the BVP result must match the closed form -(1+f2)/(1+f1)
    BackgroundState flat =
        background_state(-1, HeterogeneitySpec::constant(0.5), kZero, grid);
    for (std::size_t i = 0; i < grid.n; i += 101)
        CHECK(flat.v.values[i] == doctest::Approx(-1.0 / 1.5).epsilon(1e-9));
}

TEST_CASE("stationary front positions for the bistable example") {
    const ExamplePreset ex = example_preset("ex1"); // alpha=-2, gamma=-0.2
    StationaryFrontSet set =
        stationary_front_positions(ex.params, kZero, ex.f2, {-6.0, 6.0});
    REQUIRE(set.fronts.size() == 2);
    CHECK(!set.degenerate);
    CHECK(set.fronts[0].x0 == doctest::Approx(0.3757684748).epsilon(1e-6));
    CHECK(set.fronts[1].x0 == doctest::Approx(0.898830920562).epsilon(1e-6));
    CHECK(set.fronts[0].stability == FrontStability::Unstable);
    CHECK(set.fronts[1].stability == FrontStability::Stable);
    CHECK(set.fronts[0].q_slope > 0.0);
    CHECK(set.fronts[1].q_slope < 0.0);

    // each root satisfies the pinning condition q^-(x0) = gamma/alpha
    auto q = make_q_minus(ex.f2);
    for (const auto& f : set.fronts)
        CHECK(q(f.x0) == doctest::Approx(ex.params.gamma / ex.params.alpha).epsilon(1e-7));
}

TEST_CASE("no stationary fronts when the level is never attained") {
    const ExamplePreset ex = example_preset("ex0"); // gamma/alpha = 0.4
    StationaryFrontSet set =
        stationary_front_positions(ex.params, kZero, ex.f2, {-5.0, 15.0});
    CHECK(set.fronts.empty());
    CHECK(!set.degenerate);
}

TEST_CASE("translation-invariant case reports degeneracy") {
    ModelParams p{-1.0, 0.0, 1.0};
    StationaryFrontSet set = stationary_front_positions(p, kZero, kZero, {-3.0, 3.0});
    CHECK(set.degenerate);
    // alpha = 0 with nonzero gamma: the pinning condition holds nowhere
    StationaryFrontSet none = stationary_front_positions({0.0, 0.1, 1.0}, kZero, kZero, {-3.0, 3.0});
    CHECK(none.fronts.empty());
    CHECK(!none.degenerate);
}

TEST_CASE("interface value reduces to -q for f1 = 0 and closes the pinning relation") {
    const ExamplePreset ex = example_preset("ex1");
    const GridSpec grid = GridSpec::over(-8.0, 8.0, 0.01);
    BackgroundState bg = background_state(-1, kZero, ex.f2, grid);
    RiccatiSlopes slopes = riccati_slopes(kZero, grid);
    auto q = make_q_minus(ex.f2);
    for (double x0 : {0.2, 0.38, 0.9, 1.6})
        CHECK(v_sf(x0, bg, slopes) == doctest::Approx(-q(x0)).epsilon(1e-6));

    StationaryFrontSet set = stationary_front_positions(ex.params, kZero, ex.f2, {-6.0, 6.0});
    for (const auto& f : set.fronts)
        CHECK(std::abs(ex.params.alpha * v_sf(f.x0, bg, slopes) + ex.params.gamma) < 1e-6);

    // homogeneous symmetric case: identically zero
    BackgroundState hom = background_state(-1, kZero, kZero, grid);
    CHECK(std::abs(v_sf(0.3, hom, slopes)) < 1e-10);
}

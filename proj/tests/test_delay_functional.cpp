#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetfront/config.hpp"
#include "hetfront/constant_coeff.hpp"
#include "hetfront/delay_functional.hpp"

using namespace hetfront;

namespace {
const HeterogeneitySpec kZero = HeterogeneitySpec::zero();
const ModelParams kUnit{1.0, 0.0, 1.0};

FrontHistory linear(double c) { return FrontHistory::constant_speed_tail(0.0, 0.0, c); }
}

TEST_CASE("motionless history contributes nothing") {
    FrontHistory h = linear(0.0);
    WEstimate q = delay_w_quadrature(h, 0.0, 0.0, kUnit, kZero);
    CHECK(q.value == 0.0);

    Rng rng(11);
    McBlock blk = McBlock::draw(20000, rng);
    WEstimate m = delay_w_mc(h, 0.0, 0.0, kUnit, kZero, blk);
    CHECK(m.value == 0.0);
    CHECK(m.stderr_est == 0.0);
}

TEST_CASE("vanishing medium factor contributes nothing") {
    FrontHistory h = linear(0.7);
    HeterogeneitySpec dead = HeterogeneitySpec::constant(-1.0);
    CHECK(delay_w_quadrature(h, 0.0, 0.0, kUnit, dead).value == 0.0);
    Rng rng(12);
    McBlock blk = McBlock::draw(20000, rng);
    CHECK(delay_w_mc(h, 0.0, 0.0, kUnit, dead, blk).value == 0.0);
}

TEST_CASE("steady-state identity: tauhat W equals the interface value on straight paths") {
    // the decisive arbiter for the kernel normalisation
    for (int k = 0; k < 9; ++k) {
        const double c = -1.0 + 0.25 * k;
        WEstimate q = delay_w_quadrature(linear(c), 0.0, 0.0, kUnit, kZero);
        CHECK(q.value == doctest::Approx(vstar(c, 1.0)).epsilon(1e-6));
        CHECK(q.trunc_bound < 1e-10);
    }
    // and for a relaxation time away from 1
    ModelParams slow{1.0, 0.0, 2.5};
    for (double c : {-0.4, 0.83}) {
        WEstimate q = delay_w_quadrature(linear(c), 0.0, 0.0, slow, kZero);
        CHECK(2.5 * q.value == doctest::Approx(vstar(c, 2.5)).epsilon(1e-6));
    }
}

TEST_CASE("monte carlo agrees with quadrature on straight paths") {
    for (double c : {-0.3, 0.5, 0.83}) {
        FrontHistory h = linear(c);
        const double wq = delay_w_quadrature(h, 0.0, 0.0, kUnit, kZero).value;
        Rng rng(20240);
        McBlock blk = McBlock::draw(100000, rng);
        WEstimate m = delay_w_mc(h, 0.0, 0.0, kUnit, kZero, blk);
        CHECK(m.stderr_est < 2e-3);
        CHECK(std::abs(m.value - wq) < 3.0 * std::max(m.stderr_est, 1e-12));
    }
}

TEST_CASE("same block gives bit-identical estimates") {
    FrontHistory h(0.0, 0.0, 0.4);
    h.append_segment(-0.2, 1.5);
    Rng r1(999), r2(999);
    McBlock b1 = McBlock::draw(50000, r1);
    McBlock b2 = McBlock::draw(50000, r2);
    WEstimate e1 = delay_w_mc(h, 0.1, 2.0, kUnit, kZero, b1);
    WEstimate e2 = delay_w_mc(h, 0.1, 2.0, kUnit, kZero, b2);
    CHECK(e1.value == e2.value);
    CHECK(e1.stderr_est == e2.stderr_est);
}

TEST_CASE("control variate shrinks the error bars") {
    FrontHistory h = linear(0.83);
    Rng rng(31);
    McBlock blk = McBlock::draw(100000, rng);
    WEstimate raw = delay_w_mc(h, 0.0, 0.0, kUnit, kZero, blk, 0.0);
    WEstimate ctl = delay_w_mc(h, 0.0, 0.0, kUnit, kZero, blk, 0.9);
    CHECK(ctl.stderr_est < 0.5 * raw.stderr_est);
}

TEST_CASE("unbiasedness across seeds on a kinked path in a structured medium") {
    const HeterogeneitySpec f2 = example_preset("ex1").f2;
    FrontHistory h(0.0, -0.5, 0.3);
    h.append_segment(0.6, 1.0);
    h.append_segment(-0.1, 2.0);
    const ModelParams p{-2.0, -0.2, 1.0};
    const double wq = delay_w_quadrature(h, 0.05, 2.5, p, f2).value;

    int hits = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(1000 + seed);
        McBlock blk = McBlock::draw(100000, rng);
        WEstimate m = delay_w_mc(h, 0.05, 2.5, p, f2, blk);
        if (std::abs(m.value - wq) <= 3.0 * m.stderr_est) ++hits;
    }
    CHECK(hits >= 95);
}

TEST_CASE("truncation bound tracks the cutoff") {
    FrontHistory h = linear(0.5);
    WEstimate tight = delay_w_quadrature(h, 0.0, 0.0, kUnit, kZero, 40.0);
    WEstimate loose = delay_w_quadrature(h, 0.0, 0.0, kUnit, kZero, 10.0);
    CHECK(tight.trunc_bound < loose.trunc_bound);
    CHECK(loose.trunc_bound == doctest::Approx(0.5 * std::exp(-10.0)).epsilon(1e-6));
    // a 10 tauhat cutoff still loses less than e^{-10}
    CHECK(std::abs(loose.value - tight.value) < 5e-5);
}

TEST_CASE("evaluation before the end of history is rejected") {
    FrontHistory h(0.0, 0.0, 0.5);
    h.append_segment(0.5, 1.0);
    CHECK_THROWS_AS(delay_w_quadrature(h, 0.0, 0.5, kUnit, kZero), std::domain_error);
    Rng rng(1);
    McBlock blk = McBlock::draw(100, rng);
    CHECK_THROWS_AS(delay_w_mc(h, 0.0, 0.5, kUnit, kZero, blk), std::domain_error);
}

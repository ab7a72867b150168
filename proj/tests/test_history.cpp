#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "hetfront/history.hpp"

using namespace hetfront;

TEST_CASE("pure tail evaluates linearly") {
    FrontHistory h = FrontHistory::constant_speed_tail(0.0, -2.5, 0.83);
    CHECK(h.eval(0.0) == doctest::Approx(-2.5));
    CHECK(h.eval(-5.0) == doctest::Approx(-2.5 - 5.0 * 0.83));
    CHECK(h.slope_at(-5.0) == doctest::Approx(0.83));
    CHECK(h.last_time() == 0.0);
    CHECK(h.last_slope() == doctest::Approx(0.83));
}

TEST_CASE("segments accumulate and interpolate") {
    FrontHistory h(0.0, 1.0, 0.5);
    h.append_segment(1.0, 2.0);  // z: 1 -> 3
    h.append_segment(-0.5, 4.0); // z: 3 -> 2
    CHECK(h.segment_count() == 2);
    CHECK(h.eval(2.0) == doctest::Approx(3.0));
    CHECK(h.eval(3.0) == doctest::Approx(2.5));
    CHECK(h.eval(4.0) == doctest::Approx(2.0));
    CHECK(h.last_position() == doctest::Approx(2.0));
    // interior slope comes from the containing segment
    CHECK(h.slope_at(1.5) == doctest::Approx(1.0));
    CHECK(h.slope_at(3.7) == doctest::Approx(-0.5));
}

TEST_CASE("breakpoint slope is the left limit") {
    FrontHistory h(0.0, 0.0, 2.0);
    h.append_segment(1.0, 1.0);
    h.append_segment(3.0, 2.0);
    CHECK(h.slope_at(0.0) == doctest::Approx(2.0)); // tail slope at the anchor
    CHECK(h.slope_at(1.0) == doctest::Approx(1.0)); // end of first segment
    CHECK(h.slope_at(2.0) == doctest::Approx(3.0));
}

TEST_CASE("continuity across breakpoints under refinement") {
    FrontHistory h(-1.0, 0.3, -0.7);
    h.append_segment(0.9, 0.5);
    h.append_segment(-1.2, 1.25);
    h.append_segment(0.0, 2.0);
    for (double b : {-1.0, 0.5, 1.25}) {
        double step = 1e-3;
        for (int k = 0; k < 6; ++k) {
            const double jump = h.eval(b + step) - h.eval(b - step);
            CHECK(std::abs(jump) <= 2.0 * step * 1.3); // |slope| <= 1.2 plus slack
            step *= 0.5;
        }
    }
}

TEST_CASE("evaluation beyond the last breakpoint throws; the extension covers it") {
    FrontHistory h(0.0, 0.0, 1.0);
    h.append_segment(2.0, 1.0);
    CHECK_THROWS_AS(h.eval(1.5), std::domain_error);
    CHECK_THROWS_AS(h.eval_extended(0.0, 0.5), std::domain_error);

    // z[a](s) = z_N + (slope_N + a)(s - s_N)
    CHECK(h.eval_extended(0.0, 1.0) == doctest::Approx(h.eval(1.0)));
    CHECK(h.eval_extended(1.0, 3.0) == doctest::Approx(2.0 + 3.0 * 2.0));
    CHECK(h.eval_extended(-2.0, 7.0) == doctest::Approx(2.0)); // frozen position
    // at s_N every extension agrees with eval, for any a
    for (double a : {-3.0, -0.5, 0.0, 0.4, 2.0})
        CHECK(h.eval_extended(a, 1.0) == doctest::Approx(h.eval(1.0)));
}

TEST_CASE("from_breakpoints validates the continuity identity") {
    using S = FrontHistory::Segment;
    FrontHistory h = FrontHistory::from_breakpoints({{0.0, 1.0, 0.5}, {2.0, 3.0, 1.0}});
    CHECK(h.tail_speed() == doctest::Approx(0.5));
    CHECK(h.eval(1.0) == doctest::Approx(2.0));

    // z mismatch: 1 + 1*(2-0) = 3 != 3.5
    CHECK_THROWS(FrontHistory::from_breakpoints({S{0.0, 1.0, 0.5}, S{2.0, 3.5, 1.0}}));
    // non-increasing times
    CHECK_THROWS(FrontHistory::from_breakpoints({S{0.0, 1.0, 0.5}, S{0.0, 1.0, 1.0}}));
}

TEST_CASE("append rejects non-advancing time") {
    FrontHistory h(0.0, 0.0, 0.0);
    h.append_segment(1.0, 1.0);
    CHECK_THROWS(h.append_segment(1.0, 1.0));
    CHECK_THROWS(h.append_segment(1.0, 0.5));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hetfront/rng.hpp"

using namespace hetfront;

TEST_CASE("identical seeds reproduce the stream bit for bit") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform(), ub = b.uniform(), uc = c.uniform();
        all_equal = all_equal && (ua == ub);
        any_diff = any_diff || (ua != uc);
    }
    CHECK(all_equal);
    CHECK(any_diff);

    Rng n1(7), n2(7);
    for (int i = 0; i < 1000; ++i) CHECK(n1.normal() == n2.normal());
}

TEST_CASE("uniform ranges") {
    Rng r(1);
    double lo = 1.0, hi = 0.0, lop = 1.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = r.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        lop = std::min(lop, r.uniform_pos());
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(lop > 0.0); // (0,1]: the log of it is always finite
}

TEST_CASE("normal and exponential moments") {
    Rng r(2024);
    const int m = 200000;
    double sn = 0.0, sn2 = 0.0, se = 0.0;
    for (int i = 0; i < m; ++i) {
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
        se += r.exponential();
    }
    CHECK(std::abs(sn / m) < 0.01);
    CHECK(sn2 / m == doctest::Approx(1.0).epsilon(0.02));
    CHECK(se / m == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("heavy-tail draws: degenerate scale and scale family") {
    Rng r(5);
    CHECK(sample_levy(0.0, r) == 0.0);
    CHECK_THROWS(sample_levy(-1.0, r));

    Rng r1(77), r2(77);
    for (int i = 0; i < 500; ++i) {
        const double a = sample_levy(0.35, r1);
        const double b = 0.35 * sample_levy(1.0, r2);
        CHECK(a == doctest::Approx(b).epsilon(1e-14));
    }
}

TEST_CASE("heavy-tail draws match the analytic law") {
    // one-sided stable with CDF erfc(sqrt(c / (2 r)))
    const double c = 0.7;
    const int m = 100000;
    Rng r(314159);
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = sample_levy(c, r);
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < m; ++i) {
        const double F = std::erfc(std::sqrt(c / (2.0 * x[i])));
        const double lo = static_cast<double>(i) / m;
        const double hi = static_cast<double>(i + 1) / m;
        d = std::max(d, std::max(std::abs(F - lo), std::abs(hi - F)));
    }
    // Kolmogorov-Smirnov at level 0.01: 1.628 / sqrt(m)
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(m)));
    // all draws positive
    CHECK(x.front() > 0.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetfront/config.hpp"
#include "hetfront/pde.hpp"

using namespace hetfront;

TEST_CASE("front extraction") {
    GridSpec g = GridSpec::over(-5.0, 10.0, 0.05);
    GridProfile U(g);
    for (std::size_t i = 0; i < g.n; ++i)
        U.values[i] = std::tanh((g.x(i) - 3.0) / (std::sqrt(2.0) * 0.1));
    CHECK(extract_front_position(U) == doctest::Approx(3.0).epsilon(1e-4));

    // a locally linear crossing is recovered exactly at the half cell
    GridProfile lin(GridSpec{0.0, 1.0, 5});
    lin.values = {-2.0, -1.0, 1.0, 3.0, 5.0};
    CHECK(extract_front_position(lin) == doctest::Approx(1.5).epsilon(1e-14));

    GridProfile flat(g);
    std::fill(flat.values.begin(), flat.values.end(), 1.0);
    CHECK_THROWS(extract_front_position(flat));

    GridProfile wiggle(GridSpec{0.0, 1.0, 5});
    wiggle.values = {-1.0, 1.0, -1.0, 1.0, 1.0};
    CHECK_THROWS(extract_front_position(wiggle));
}

TEST_CASE("velocity estimation") {
    Trajectory t;
    for (int i = 0; i <= 100; ++i) {
        const double s = 0.01 * i;
        t.samples.push_back({s, 2.0 * s, 0.0});
    }
    Trajectory v = estimate_velocity(t);
    for (const auto& smp : v.samples) CHECK(smp.dz_ds == doctest::Approx(2.0).epsilon(1e-12));

    Trajectory sq;
    for (int i = 0; i <= 1000; ++i) {
        const double s = 0.001 * i;
        sq.samples.push_back({s, s * s, 0.0});
    }
    Trajectory vq = estimate_velocity(sq);
    for (std::size_t i = 10; i + 10 < vq.samples.size(); i += 97)
        CHECK(vq.samples[i].dz_ds == doctest::Approx(2.0 * vq.samples[i].s).epsilon(1e-4));
}

TEST_CASE("config validation") {
    PdeConfig cfg;
    cfg.eps = 0.1;
    cfg.dx = 0.1; // > eps/8
    CHECK_THROWS(cfg.validate());
    cfg.dx = 0.0;
    cfg.s_end = -1.0;
    CHECK_THROWS(cfg.validate());
    cfg.s_end = 1.0;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("odd symmetry pins the front at the origin") {
    PdeConfig cfg;
    cfg.params = {0.5, 0.0, 1.0};
    cfg.eps = 0.1;
    cfg.domain = {-10.0, 10.0};
    cfg.s_end = 3.0;
    PdeState ic = make_ic_relax_shift(cfg, 0.0, {0.5});
    PdeResult r = run_pde(cfg, ic);
    REQUIRE(r.status == PdeStatus::Ok);
    for (const auto& s : r.traj.samples) CHECK(std::abs(s.z) < 1e-6);
}

TEST_CASE("medium-entry run: positive fluctuating speed and clean interface") {
    ExamplePreset ex = example_preset("ex0");
    PdeConfig cfg = ex.pde;
    cfg.domain = {-10.0, 14.0};
    cfg.s_end = 9.0;
    cfg.thin = 5;
    PdeState ic = make_ic_relax_shift(cfg, ex.z0); // z0 = -2.5
    PdeResult r = run_pde(cfg, ic);
    REQUIRE(r.status == PdeStatus::Ok);

    // speed near the homogeneous value before the support, positive inside
    Trajectory v = estimate_velocity(r.traj);
    bool entered = false;
    for (const auto& s : v.samples) {
        if (s.z < 2.5) {
            if (s.s > 0.5) CHECK(s.dz_ds == doctest::Approx(0.8314).epsilon(0.02));
        } else {
            entered = true;
            CHECK(s.dz_ds > 0.0);
        }
    }
    CHECK(entered);

    // interface stays monotone in the window around the front
    const auto& U = r.final_state.U;
    const double z = extract_front_position(U);
    for (std::size_t i = 1; i < U.grid.n; ++i) {
        const double x = U.grid.x(i);
        if (std::abs(x - z) < 3.0 * cfg.eps) CHECK(U.values[i] > U.values[i - 1]);
    }
    // pinned boundary rows never move
    CHECK(U.values.front() == -1.0);
    CHECK(U.values.back() == 1.0);
}

TEST_CASE("ordered data stays ordered for attracting feedback") {
    ExamplePreset ex = example_preset("ex1"); // alpha = -2
    PdeConfig cfg = ex.pde;
    cfg.domain = {-12.0, 12.0};
    cfg.s_end = 4.0;
    PdeState ic = make_ic_relax_shift(cfg, 0.6, {0.5, 0.3});
    PdeResult r = run_pde(cfg, ic);
    REQUIRE(r.status == PdeStatus::Ok);
    double umax = 0.0;
    for (double u : r.final_state.U.values) umax = std::max(umax, std::abs(u));
    CHECK(umax <= 1.0 + 0.05); // between the eps-corrected uniform states
}

TEST_CASE("front near the boundary aborts with domain exhausted") {
    ExamplePreset ex = example_preset("ex0");
    PdeConfig cfg = ex.pde;
    cfg.domain = {-4.0, 2.0}; // the front travels right at ~0.83 and hits the wall
    cfg.s_end = 10.0;
    PdeState ic = make_ic_relax_shift(cfg, 0.0, {0.3});
    PdeResult r = run_pde(cfg, ic);
    CHECK(r.status == PdeStatus::DomainExhausted);
    CHECK(r.traj.samples.back().s < 10.0);
}

TEST_CASE("snapshot cadence and thinning") {
    PdeConfig cfg;
    cfg.params = {0.5, 0.2, 1.0};
    cfg.eps = 0.1;
    cfg.domain = {-8.0, 8.0};
    cfg.s_end = 1.0;
    cfg.snapshot_ds = 0.25;
    cfg.thin = 10;
    PdeState ic = make_ic_relax_shift(cfg, 0.0, {0.3});
    PdeResult r = run_pde(cfg, ic);
    REQUIRE(r.status == PdeStatus::Ok);
    CHECK(r.snapshots.size() >= 4);
    for (std::size_t k = 1; k < r.snapshots.size(); ++k)
        CHECK(r.snapshots[k].s > r.snapshots[k - 1].s + 0.2);
    CHECK(r.traj.samples.size() < static_cast<std::size_t>(r.steps) / 5 + 3);
}

TEST_CASE("relax-shift initial state with a nonuniform relaxation rate") {
    // exercises the quasi-static slow-field solve (f1 != 0)
    PdeConfig cfg;
    cfg.params = {0.94, 0.0, 1.0};
    cfg.eps = 0.15;
    cfg.f1 = HeterogeneitySpec::gaussian_sum(4.0, {{1.0, 5.0, 1.0}});
    cfg.f2 = HeterogeneitySpec::constant(3.0);
    cfg.domain = {-6.0, 14.0};
    cfg.s_end = 0.5;
    PdeState ic = make_ic_relax_shift(cfg, 4.0, {0.2, 0.1});
    CHECK(extract_front_position(ic.U) == doctest::Approx(4.0).epsilon(1e-3));
    // quasi-static slow field: roughly (1+f2)/(1+f1) scaled by the front sign
    const GridSpec g = cfg.make_grid();
    double vmax = 0.0;
    for (double v : ic.V.values) vmax = std::max(vmax, std::abs(v));
    CHECK(vmax < 1.2);
    CHECK(eval_cubic(ic.V, 12.0) == doctest::Approx(4.0 / 5.0).epsilon(0.05));
    PdeResult r = run_pde(cfg, ic);
    CHECK(r.status == PdeStatus::Ok);
}

TEST_CASE("grid convergence of the tracked position") {
    ExamplePreset ex = example_preset("ex0");
    PdeConfig coarse = ex.pde;
    coarse.domain = {-8.0, 14.0};
    coarse.s_end = 10.0;
    PdeState ic = make_ic_relax_shift(coarse, ex.z0);
    PdeResult rc = run_pde(coarse, ic);
    REQUIRE(rc.status == PdeStatus::Ok);

    PdeConfig fine = coarse;
    fine.dx = coarse.eps / 16.0;
    fine.rtol = coarse.rtol * 0.1;
    fine.atol = coarse.atol * 0.1;
    PdeState icf = make_ic_relax_shift(fine, ex.z0);
    PdeResult rf = run_pde(fine, icf);
    REQUIRE(rf.status == PdeStatus::Ok);
    CHECK(std::abs(rc.traj.samples.back().z - rf.traj.samples.back().z) < 2e-3);
}

TEST_CASE("direction bisection brackets the pinning position") {
    ExamplePreset ex = example_preset("ex1");
    PdeConfig cfg = ex.pde;
    cfg.domain = {-12.0, 12.0};
    Interval br = bracket_stationary_front(cfg, {0.3, 0.45}, 1.5, 0.04, 3);
    CHECK(br.lo >= 0.3);
    CHECK(br.hi <= 0.45);
    CHECK(br.length() <= 0.08);
    // the leading-order position sits close by
    CHECK(br.lo < 0.42);
    CHECK(br.hi > 0.33);

    CHECK_THROWS(bracket_stationary_front(cfg, {2.0, 2.2}, 0.5, 0.1, 2));
}

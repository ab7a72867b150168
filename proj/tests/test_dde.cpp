#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetfront/background.hpp"
#include "hetfront/config.hpp"
#include "hetfront/constant_coeff.hpp"
#include "hetfront/dde.hpp"

using namespace hetfront;

namespace {

DdeConfig quad_cfg(const ModelParams& p, HeterogeneitySpec f2 = HeterogeneitySpec::zero()) {
    DdeConfig cfg;
    cfg.params = p;
    cfg.f2 = std::move(f2);
    cfg.method = DdeConfig::Method::Quadrature;
    return cfg;
}

} // namespace

TEST_CASE("speed-law defect vanishes at the constant-coefficient root") {
    const ModelParams p{0.5, 0.2, 1.0};
    const double cstar = speed_roots(0.5, 0.2, 1.0).roots[0];
    DdeConfig cfg = quad_cfg(p);
    auto q = make_q_minus(cfg.f2);
    FrontHistory h = FrontHistory::constant_speed_tail(0.0, 0.0, cstar);
    const double e = dde_error(cfg, q, h, 0.0, cfg.ds);
    CHECK(std::abs(e) < 1e-6);

    // MC evaluation of the same defect sits within its error bars
    DdeConfig mc = cfg;
    mc.method = DdeConfig::Method::Mc;
    Rng rng(404);
    McBlock blk = McBlock::draw(100000, rng);
    double se = 0.0, w = 0.0;
    const double em = dde_error(mc, q, h, 0.0, mc.ds, &blk, &se, &w);
    CHECK(std::abs(em) < 3.0 * p.alpha * se + 1e-6);
    CHECK(w == doctest::Approx(vstar(cstar, 1.0)).epsilon(5e-3));
}

TEST_CASE("speed-law defect vanishes at a pinned front") {
    const ExamplePreset ex = example_preset("ex1");
    StationaryFrontSet set =
        stationary_front_positions(ex.params, HeterogeneitySpec::zero(), ex.f2, {-2.0, 2.0});
    REQUIRE(set.fronts.size() == 2);
    const double x0 = set.fronts[1].x0; // the attracting position
    DdeConfig cfg = quad_cfg(ex.params, ex.f2);
    auto q = make_q_minus(ex.f2);
    FrontHistory h = FrontHistory::constant_speed_tail(0.0, x0, 0.0);
    CHECK(std::abs(dde_error(cfg, q, h, 0.0, cfg.ds)) < 1e-6);
}

TEST_CASE("defect is strictly increasing in the slope increment") {
    const ModelParams p{2.5, 0.2, 1.0}; // mixed feedback, the delicate sign case
    DdeConfig cfg = quad_cfg(p);
    auto q = make_q_minus(cfg.f2);
    FrontHistory h = FrontHistory::constant_speed_tail(0.0, 0.0, -0.26);
    double prev = dde_error(cfg, q, h, -1.0, cfg.ds);
    for (double a = -0.8; a <= 1.01; a += 0.2) {
        const double cur = dde_error(cfg, q, h, a, cfg.ds);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("stepper locks onto the constant-coefficient speed") {
    const double cstar = speed_roots(0.5, 0.2, 1.0).roots[0];
    DdeConfig cfg = quad_cfg({0.5, 0.2, 1.0});
    DdeResult r = run_dde_front(cfg, 0.0, 0.0, cstar, 3.0);
    REQUIRE(r.ok);
    for (const auto& s : r.traj.samples) CHECK(s.dz_ds == doctest::Approx(cstar).epsilon(1e-5));

    // same lock under MC stepping, up to the sampling noise amplification
    DdeConfig mc = cfg;
    mc.method = DdeConfig::Method::Mc;
    mc.mc_samples = 100000;
    mc.seed = 7;
    DdeResult rm = run_dde_front(mc, 0.0, 0.0, cstar, 100.0 * mc.ds);
    REQUIRE(rm.ok);
    CHECK(rm.traj.samples.size() >= 100);
    for (const auto& s : rm.traj.samples) CHECK(std::abs(s.dz_ds - cstar) < 0.03);
}

TEST_CASE("stationary front holds under both algorithms") {
    const ExamplePreset ex = example_preset("ex1");
    StationaryFrontSet set =
        stationary_front_positions(ex.params, HeterogeneitySpec::zero(), ex.f2, {-2.0, 2.0});
    const double x0 = set.fronts[1].x0;

    DdeConfig mc;
    mc.params = ex.params;
    mc.f2 = ex.f2;
    mc.method = DdeConfig::Method::Mc;
    mc.mc_samples = 100000;
    mc.seed = 2;
    DdeResult r1 = run_dde_front(mc, 0.0, x0, 0.0, 10.0);
    REQUIRE(r1.ok);
    CHECK(std::abs(r1.traj.samples.back().z - x0) < 1e-2);

    DdeConfig co = mc;
    co.method = DdeConfig::Method::Cosim;
    co.cosim_domain = {-20.0, 20.0};
    DdeResult r2 = run_dde_front(co, 0.0, x0, 0.0, 10.0);
    REQUIRE(r2.ok);
    CHECK(std::abs(r2.traj.samples.back().z - x0) < 1e-4);
}

TEST_CASE("cosim stays on the travelling wave in a uniform medium") {
    const double cstar = speed_roots(0.5, 0.2, 1.0).roots[0];
    DdeConfig co = quad_cfg({0.5, 0.2, 1.0});
    co.method = DdeConfig::Method::Cosim;
    co.cosim_domain = {-25.0, 25.0};
    DdeResult r = run_dde_front(co, 0.0, 0.0, cstar, 3.0);
    REQUIRE(r.ok);
    for (const auto& s : r.traj.samples) CHECK(std::abs(s.dz_ds - cstar) < 2e-3);
}

TEST_CASE("same seed reproduces the trajectory exactly") {
    const ExamplePreset ex = example_preset("ex0");
    DdeConfig cfg = ex.dde;
    cfg.mc_samples = 20000;
    cfg.seed = 31337;
    DdeResult a = run_dde_front(cfg, 0.0, ex.z0, ex.c0, 2.0);
    DdeResult b = run_dde_front(cfg, 0.0, ex.z0, ex.c0, 2.0);
    REQUIRE(a.ok);
    REQUIRE(a.traj.samples.size() == b.traj.samples.size());
    for (std::size_t i = 0; i < a.traj.samples.size(); ++i) {
        CHECK(a.traj.samples[i].z == b.traj.samples[i].z);
        CHECK(a.traj.samples[i].dz_ds == b.traj.samples[i].dz_ds);
    }
    cfg.seed = 31338;
    DdeResult c = run_dde_front(cfg, 0.0, ex.z0, ex.c0, 2.0);
    bool differs = false;
    for (std::size_t i = 0; i < a.traj.samples.size() && i < c.traj.samples.size(); ++i)
        differs = differs || (a.traj.samples[i].z != c.traj.samples[i].z);
    CHECK(differs);
}

TEST_CASE("exhausted slope bracket reports failure with the partial path") {
    DdeConfig cfg = quad_cfg({0.5, 0.2, 1.0});
    cfg.a_max = 1e-6; // cannot reach the root from a resting start
    DdeResult r = run_dde_front(cfg, 0.0, 0.0, 0.0, 1.0);
    CHECK(!r.ok);
    CHECK(!r.message.empty());
}

TEST_CASE("step records expose the committed memory term") {
    DdeConfig cfg = quad_cfg({0.5, 0.2, 1.0});
    const double cstar = speed_roots(0.5, 0.2, 1.0).roots[0];
    DdeResult r = run_dde_front(cfg, 0.0, 0.0, cstar, 1.0);
    REQUIRE(r.ok);
    REQUIRE(!r.step_records.empty());
    for (const auto& rec : r.step_records) {
        CHECK(rec.w == doctest::Approx(vstar(cstar, 1.0)).epsilon(1e-4));
        CHECK(rec.w_stderr == 0.0);
        CHECK(std::abs(rec.a_star) < 1e-4);
    }
    CHECK(r.diag.max_abs_residual < 1e-8);
}

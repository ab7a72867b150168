#include "hetfront/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hetfront/constant_coeff.hpp"

namespace hetfront {

using nlohmann::json;

json to_json(const ModelParams& p) {
    return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"tauhat", p.tauhat}};
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    apply_json(j, p);
    return p;
}

void apply_json(const json& j, ModelParams& p) {
    p.alpha = j.value("alpha", p.alpha);
    p.gamma = j.value("gamma", p.gamma);
    p.tauhat = j.value("tauhat", p.tauhat);
}

json to_json(const HeterogeneitySpec& f) {
    switch (f.kind()) {
    case HeterogeneitySpec::Kind::Zero: return {{"kind", "zero"}};
    case HeterogeneitySpec::Kind::Constant:
        return {{"kind", "constant"}, {"value", f.constant_value()}};
    case HeterogeneitySpec::Kind::GaussianSum: {
        json terms = json::array();
        for (const auto& t : f.gaussian_terms())
            terms.push_back({{"amplitude", t.amplitude}, {"center", t.center}, {"width", t.width}});
        return {{"kind", "gaussian_sum"},
                {"offset", f.gaussian_offset()},
                {"terms", terms},
                {"support", {f.support().lo, f.support().hi}}};
    }
    case HeterogeneitySpec::Kind::PiecewiseCubic:
        return {{"kind", "piecewise_cubic"},
                {"x", f.knots_x()},
                {"y", f.knots_y()},
                {"slopes", f.knot_slopes()},
                {"outside", f.asymptotic_constant()}};
    case HeterogeneitySpec::Kind::Named: return {{"kind", "named"}, {"name", f.name()}};
    }
    throw std::logic_error("to_json: unhandled heterogeneity kind");
}

HeterogeneitySpec heterogeneity_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return HeterogeneitySpec::zero();
    if (kind == "constant") return HeterogeneitySpec::constant(j.at("value").get<double>());
    if (kind == "gaussian_sum") {
        std::vector<HeterogeneitySpec::GaussianTerm> terms;
        for (const auto& t : j.at("terms"))
            terms.push_back({t.at("amplitude").get<double>(), t.at("center").get<double>(),
                             t.at("width").get<double>()});
        std::optional<Interval> support;
        if (j.contains("support")) {
            const auto& s = j.at("support");
            support = Interval{s.at(0).get<double>(), s.at(1).get<double>()};
        }
        return HeterogeneitySpec::gaussian_sum(j.value("offset", 0.0), std::move(terms), support);
    }
    if (kind == "piecewise_cubic")
        return HeterogeneitySpec::piecewise_cubic(
            j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>(),
            j.at("slopes").get<std::vector<double>>(), j.value("outside", 0.0));
    if (kind == "named") return HeterogeneitySpec::named(j.at("name").get<std::string>());
    throw std::invalid_argument("heterogeneity_from_json: unknown kind '" + kind + "'");
}

json to_json(const DdeConfig& cfg) {
    const char* method = cfg.method == DdeConfig::Method::Mc           ? "mc"
                         : cfg.method == DdeConfig::Method::Quadrature ? "quadrature"
                                                                       : "cosim";
    return {{"params", to_json(cfg.params)},
            {"f2", to_json(cfg.f2)},
            {"ds", cfg.ds},
            {"a_max", cfg.a_max},
            {"method", method},
            {"mc_samples", cfg.mc_samples},
            {"seed", cfg.seed},
            {"control_beta", cfg.control_beta},
            {"r_max_factor", cfg.r_max_factor},
            {"quad_tol", cfg.quad_tol},
            {"cosim_domain", {cfg.cosim_domain.lo, cfg.cosim_domain.hi}},
            {"cosim_dx", cfg.cosim_dx},
            {"cosim_substeps", cfg.cosim_substeps},
            {"cosim_preroll", cfg.cosim_preroll}};
}

void apply_json(const json& j, DdeConfig& cfg) {
    if (j.contains("params")) apply_json(j.at("params"), cfg.params);
    if (j.contains("f2")) cfg.f2 = heterogeneity_from_json(j.at("f2"));
    cfg.ds = j.value("ds", cfg.ds);
    cfg.a_max = j.value("a_max", cfg.a_max);
    if (j.contains("method")) {
        const std::string m = j.at("method").get<std::string>();
        if (m == "mc")
            cfg.method = DdeConfig::Method::Mc;
        else if (m == "quadrature")
            cfg.method = DdeConfig::Method::Quadrature;
        else if (m == "cosim")
            cfg.method = DdeConfig::Method::Cosim;
        else
            throw std::invalid_argument("apply_json: unknown dde method '" + m + "'");
    }
    cfg.mc_samples = j.value("mc_samples", cfg.mc_samples);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.control_beta = j.value("control_beta", cfg.control_beta);
    cfg.r_max_factor = j.value("r_max_factor", cfg.r_max_factor);
    cfg.quad_tol = j.value("quad_tol", cfg.quad_tol);
    if (j.contains("cosim_domain")) {
        const auto& d = j.at("cosim_domain");
        cfg.cosim_domain = {d.at(0).get<double>(), d.at(1).get<double>()};
    }
    cfg.cosim_dx = j.value("cosim_dx", cfg.cosim_dx);
    cfg.cosim_substeps = j.value("cosim_substeps", cfg.cosim_substeps);
    cfg.cosim_preroll = j.value("cosim_preroll", cfg.cosim_preroll);
}

json to_json(const PdeConfig& cfg) {
    return {{"params", to_json(cfg.params)},
            {"eps", cfg.eps},
            {"f1", to_json(cfg.f1)},
            {"f2", to_json(cfg.f2)},
            {"domain", {cfg.domain.lo, cfg.domain.hi}},
            {"dx", cfg.dx},
            {"s0", cfg.s0},
            {"s_end", cfg.s_end},
            {"rtol", cfg.rtol},
            {"atol", cfg.atol},
            {"h0", cfg.h0},
            {"snapshot_ds", cfg.snapshot_ds},
            {"thin", cfg.thin}};
}

void apply_json(const json& j, PdeConfig& cfg) {
    if (j.contains("params")) apply_json(j.at("params"), cfg.params);
    cfg.eps = j.value("eps", cfg.eps);
    if (j.contains("f1")) cfg.f1 = heterogeneity_from_json(j.at("f1"));
    if (j.contains("f2")) cfg.f2 = heterogeneity_from_json(j.at("f2"));
    if (j.contains("domain")) {
        const auto& d = j.at("domain");
        cfg.domain = {d.at(0).get<double>(), d.at(1).get<double>()};
    }
    cfg.dx = j.value("dx", cfg.dx);
    cfg.s0 = j.value("s0", cfg.s0);
    cfg.s_end = j.value("s_end", cfg.s_end);
    cfg.rtol = j.value("rtol", cfg.rtol);
    cfg.atol = j.value("atol", cfg.atol);
    cfg.h0 = j.value("h0", cfg.h0);
    cfg.snapshot_ds = j.value("snapshot_ds", cfg.snapshot_ds);
    cfg.thin = j.value("thin", cfg.thin);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

namespace {

// Sample g(x) = (x-3) sin(1 + 14 (x-3)^3) exp(-1.2 (x-3)) at x = 3..9, close
// with a zero knot at x = 10 and interpolate with shape-preserving cubics;
// the interior samples sit near the lobes of the resulting wiggle.
HeterogeneitySpec ex0_f2() {
    std::vector<double> kx, ky;
    for (int k = 3; k <= 9; ++k) {
        const double t = static_cast<double>(k - 3);
        kx.push_back(static_cast<double>(k));
        ky.push_back(t * std::sin(1.0 + 14.0 * t * t * t) * std::exp(-1.2 * t));
    }
    kx.push_back(10.0);
    ky.push_back(0.0);
    return HeterogeneitySpec::make_makima(std::move(kx), std::move(ky), 0.0);
}

HeterogeneitySpec ex1_f2() {
    return HeterogeneitySpec::gaussian_sum(0.0, {{0.3, -0.1, 0.5},
                                                 {0.33, -1.5, 2.0},
                                                 {-0.53, -0.75, 2.0},
                                                 {0.25, 0.1, 4.0},
                                                 {-0.4, 1.0, 3.0}});
}

HeterogeneitySpec ex3_f2() {
    return HeterogeneitySpec::gaussian_sum(0.0, {{-12.0, -11.0, 40.0}, {-12.0, 11.0, 40.0}});
}

// Largest (rightmost) root of the constant-coefficient speed relation; the
// single root when there is only one.
double cc_root(const ModelParams& p, int which) {
    const SpeedRoots r = speed_roots(p.alpha, p.gamma, p.tauhat);
    if (r.roots.empty()) throw std::runtime_error("example_preset: no constant-speed root");
    const int n = static_cast<int>(r.roots.size());
    int i = which < 0 ? 0 : which >= n ? n - 1 : which;
    return r.roots[static_cast<std::size_t>(i)];
}

} // namespace

const std::vector<std::string>& example_ids() {
    static const std::vector<std::string> ids = {"ex0", "ex1", "ex2", "ex3", "fig1"};
    return ids;
}

ExamplePreset example_preset(const std::string& id) {
    ExamplePreset ex;
    ex.id = id;
    if (id == "ex0") {
        ex.params = {0.5, 0.2, 1.0};
        ex.f2 = ex0_f2();
        ex.z0 = -2.5;
        ex.c0 = cc_root(ex.params, 0); // single root ~0.83
        ex.s_end = 20.0;
        ex.pde.domain = {-9.0, 16.0};
    } else if (id == "ex1") {
        ex.params = {-2.0, -0.2, 1.0};
        ex.f2 = ex1_f2();
        ex.z0 = 0.5; // between the stationary positions ~0.38 and ~0.90
        ex.c0 = 0.0; // released from rest
        ex.s_end = 25.0;
        ex.pde.domain = {-5.0, 6.0};
    } else if (id == "ex2") {
        ex.params = {2.5, 0.2, 1.0};
        ex.z0 = 0.0;
        ex.c0 = cc_root(ex.params, 1); // middle root c_0 < 0
        ex.s_end = 12.0;
        ex.pde.domain = {-45.0, 55.0};
    } else if (id == "ex3") {
        ex.params = {2.5, 0.2, 1.0};
        ex.f2 = ex3_f2();
        ex.z0 = 0.0;
        ex.c0 = cc_root(ex.params, 2); // fast rightward root c_p
        ex.s_end = 80.0;
        ex.dde.ds = 1.0 / 40.0;
        ex.dde.mc_samples = 150000;
        ex.pde.domain = {-16.0, 16.0};
    } else if (id == "fig1") {
        ex.params = {0.94, 0.0, 1.0};
        ex.f1 = HeterogeneitySpec::named("fig1.f1");
        ex.f2 = HeterogeneitySpec::named("fig1.f2");
        ex.z0 = 130.0;
        ex.c0 = 0.0;
        ex.s_end = 40.0;
        ex.default_eps = 0.15;
        ex.pde.domain = {0.0, 300.0};
        ex.pde.snapshot_ds = 0.5;
    } else {
        throw std::invalid_argument("example_preset: unknown id '" + id + "'");
    }
    ex.dde.params = ex.params;
    ex.dde.f2 = ex.f2;
    ex.pde.params = ex.params;
    ex.pde.f1 = ex.f1;
    ex.pde.f2 = ex.f2;
    ex.pde.eps = ex.default_eps;
    ex.pde.s_end = ex.s_end;
    return ex;
}

} // namespace hetfront

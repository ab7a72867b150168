#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetfront/background.hpp"
#include "hetfront/config.hpp"
#include "hetfront/constant_coeff.hpp"
#include "hetfront/csv.hpp"
#include "hetfront/harness.hpp"
#include "hetfront/wave_ode.hpp"

namespace fs = std::filesystem;
using namespace hetfront;

namespace {

std::string join_ids() {
    std::string s;
    for (const auto& id : example_ids()) s += (s.empty() ? "" : ", ") + id;
    return s;
}

void print_kv(const char* k, double v) { std::printf("%-28s %.12g\n", k, v); }

struct ParamFlags {
    double alpha = 0.0, gamma = 0.0, tauhat = 1.0;
    std::string example;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "feedback strength");
        cmd->add_option("--gamma", gamma, "constant drive");
        cmd->add_option("--tauhat", tauhat, "slow-field relaxation time");
        cmd->add_option("--example", example, "take parameters from a bundled example");
    }

    ExamplePreset resolve() const {
        if (!example.empty()) return example_preset(example);
        ExamplePreset ex;
        ex.id = "custom";
        ex.params = {alpha, gamma, tauhat};
        ex.dde.params = ex.params;
        ex.pde.params = ex.params;
        return ex;
    }
};

int cmd_example(const std::string& id, std::vector<double> eps, std::string out,
                std::uint64_t seed, const std::string& config_path) {
    if (!config_path.empty()) {
        const auto j = load_json_file(config_path);
        if (j.contains("eps")) eps = j.at("eps").get<std::vector<double>>();
        if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) out = j.at("out").get<std::string>();
    }
    if (out.empty()) out = "out";
    const std::string dir = (fs::path(out) / id).string();
    const ExperimentReport rep = run_example(id, eps, dir, seed);
    std::printf("report: %s\n", (fs::path(dir) / "report.json").string().c_str());
    for (const auto& [k, v] : rep.metrics) print_kv(k.c_str(), v);
    bool all = true;
    for (const auto& [k, ok] : rep.pass_flags) {
        std::printf("%-40s %s\n", k.c_str(), ok ? "pass" : "FAIL");
        all = all && ok;
    }
    return all ? 0 : 2;
}

int cmd_compare(const std::string& file_a, const std::string& file_b, std::vector<double> anchor,
                std::vector<double> window, const std::string& out) {
    Trajectory a = read_trajectory_csv(file_a);
    Trajectory b = read_trajectory_csv(file_b);
    if (!anchor.empty()) {
        if (anchor.size() != 2) throw CLI::ValidationError("--anchor expects z,s");
        a = time_align(a, {anchor[0], anchor[1]});
        b = time_align(b, {anchor[0], anchor[1]});
    }
    Interval win{-1e300, 1e300};
    if (!window.empty()) {
        if (window.size() != 2) throw CLI::ValidationError("--window expects lo,hi");
        win = {window[0], window[1]};
    }
    const TrajectoryMetrics m = compare_trajectories(a, b, win);
    print_kv("sup_z", m.sup_z);
    print_kv("rms_z", m.rms_z);
    print_kv("sup_dz_ds", m.sup_v);
    print_kv("rms_dz_ds", m.rms_v);
    print_kv("sup_dz_ds_of_z", m.sup_v_of_z);
    print_kv("rms_dz_ds_of_z", m.rms_v_of_z);
    print_kv("window_lo", m.window.lo);
    print_kv("window_hi", m.window.hi);
    if (!out.empty()) {
        nlohmann::json j = {{"sup_z", m.sup_z},
                            {"rms_z", m.rms_z},
                            {"sup_dz_ds", m.sup_v},
                            {"rms_dz_ds", m.rms_v},
                            {"sup_dz_ds_of_z", m.sup_v_of_z},
                            {"rms_dz_ds_of_z", m.rms_v_of_z},
                            {"window", {m.window.lo, m.window.hi}}};
        std::ofstream o(out);
        o << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_background(const ParamFlags& pf, std::vector<double> range, const std::string& out) {
    const ExamplePreset ex = pf.resolve();
    double lo, hi, dx = 0.01;
    if (range.size() >= 2) {
        lo = range[0];
        hi = range[1];
        if (range.size() >= 3) dx = range[2];
    } else {
        const Interval sup = ex.f2.support();
        lo = sup.lo - 5.0;
        hi = sup.hi + 5.0;
        if (!(hi > lo)) {
            lo = -10.0;
            hi = 10.0;
        }
    }
    const GridSpec grid = GridSpec::over(lo, hi, dx);
    const BackgroundState bg = background_state(-1, ex.f1, ex.f2, grid);
    std::vector<double> xs(grid.n), vs(grid.n), qs(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        xs[i] = grid.x(i);
        vs[i] = bg.v.values[i];
        qs[i] = bg.q.values[i];
    }
    const std::string path = out.empty() ? "background.csv" : out;
    write_columns_csv(path, "x,v_minus,q_minus", {xs, vs, qs});
    std::printf("wrote %s (%zu rows)\n", path.c_str(), grid.n);
    return 0;
}

int cmd_stationary(const ParamFlags& pf, std::vector<double> search) {
    const ExamplePreset ex = pf.resolve();
    Interval win{-10.0, 10.0};
    if (search.size() == 2) win = {search[0], search[1]};
    const StationaryFrontSet sf = stationary_front_positions(ex.params, ex.f1, ex.f2, win);
    if (sf.degenerate) {
        std::printf("pinning condition holds identically; positions are not isolated\n");
        return 0;
    }
    if (sf.fronts.empty()) {
        std::printf("no stationary front positions in [%g, %g]\n", win.lo, win.hi);
        return 0;
    }
    for (const auto& f : sf.fronts)
        std::printf("x0 = %.10g   d(q_minus)/dx = %+.6g   %s\n", f.x0, f.q_slope,
                    f.stability == FrontStability::Stable     ? "stable"
                    : f.stability == FrontStability::Unstable ? "unstable"
                                                              : "unclassified");
    return 0;
}

int cmd_speeds(double alpha, double gamma, double tauhat) {
    const SpeedRoots r = speed_roots(alpha, gamma, tauhat);
    std::printf("regime: %s\n", r.regime == SpeedRegime::Single   ? "single"
                                : r.regime == SpeedRegime::Triple ? "triple"
                                                                  : "critical");
    for (std::size_t i = 0; i < r.roots.size(); ++i)
        std::printf("c[%zu] = %.12g\n", i, r.roots[i]);
    if (gamma > 0.0) {
        const BifurcationPoint bp = bifurcation_point(gamma, tauhat);
        print_kv("c_bp", bp.c_bp);
        print_kv("alpha_bp", bp.alpha_bp);
    }
    return 0;
}

int cmd_shoot(const ParamFlags& pf, double eps, std::string root, std::vector<double> bracket,
              double tol) {
    const ExamplePreset ex = pf.resolve();
    Interval br{0.0, 0.0};
    if (bracket.size() == 2) br = {bracket[0], bracket[1]};
    const char idx = root.empty() ? '0' : root[0];
    const Interval out = find_speed(eps, ex.params, idx, br, tol);
    print_kv("bracket_lo", out.lo);
    print_kv("bracket_hi", out.hi);
    print_kv("c", 0.5 * (out.lo + out.hi));
    return 0;
}

int cmd_pde_run(const std::string& config_path, std::string out, double z0, double ic_speed,
                bool use_concat) {
    PdeConfig cfg;
    nlohmann::json j;
    if (!config_path.empty()) {
        j = load_json_file(config_path);
        if (j.contains("example")) {
            const ExamplePreset ex = example_preset(j.at("example").get<std::string>());
            cfg = ex.pde;
            if (!j.contains("ic")) z0 = ex.z0;
        }
        apply_json(j, cfg);
        if (j.contains("ic")) {
            const auto& ic = j.at("ic");
            z0 = ic.value("z0", z0);
            if (ic.contains("speed")) {
                ic_speed = ic.at("speed").get<double>();
                use_concat = true;
            }
        }
    }
    if (out.empty()) out = "out/pde";
    fs::create_directories(out);
    const PdeState ic = use_concat ? concatenated_ic(cfg, ic_speed, z0)
                                   : make_ic_relax_shift(cfg, z0);
    const PdeResult res = run_pde(cfg, ic);
    Trajectory traj = res.traj;
    traj.meta["config"] = to_json(cfg);
    write_trajectory_csv((fs::path(out) / "trajectory.csv").string(), traj);
    write_profile_csv((fs::path(out) / "profile.csv").string(), res.final_state);
    if (!res.snapshots.empty())
        write_field_csv((fs::path(out) / "field.csv").string(), res.snapshots, 8);
    std::ofstream meta(fs::path(out) / "meta.json");
    meta << traj.meta.dump(2) << '\n';
    std::printf("%s: %ld steps (%ld rejected), final z = %.10g at s = %.6g\n",
                res.status == PdeStatus::Ok ? "done" : res.message.c_str(), res.steps,
                res.rejected, res.traj.samples.back().z, res.traj.samples.back().s);
    return 0;
}

int cmd_dde_run(const std::string& config_path, std::string out, int algo, double z0, double c0,
                double s_end) {
    DdeConfig cfg;
    nlohmann::json j;
    if (!config_path.empty()) {
        j = load_json_file(config_path);
        if (j.contains("example")) {
            const ExamplePreset ex = example_preset(j.at("example").get<std::string>());
            cfg = ex.dde;
            if (!j.contains("ic")) {
                z0 = ex.z0;
                c0 = ex.c0;
                s_end = ex.s_end;
            }
        }
        apply_json(j, cfg);
        if (j.contains("ic")) {
            const auto& ic = j.at("ic");
            z0 = ic.value("z0", z0);
            c0 = ic.value("c0", c0);
            s_end = ic.value("s_end", s_end);
        }
    }
    if (algo == 2)
        cfg.method = DdeConfig::Method::Cosim;
    else if (algo == 1 && cfg.method == DdeConfig::Method::Cosim)
        cfg.method = DdeConfig::Method::Mc;
    if (out.empty()) out = "out/dde";
    fs::create_directories(out);
    const DdeResult res = run_dde_front(cfg, 0.0, z0, c0, s_end);
    Trajectory traj = res.traj;
    traj.meta["config"] = to_json(cfg);
    write_trajectory_csv((fs::path(out) / "trajectory.csv").string(), traj);
    std::vector<double> s, w, se, a, it;
    for (const auto& r : res.step_records) {
        s.push_back(r.s);
        w.push_back(r.w);
        se.push_back(r.w_stderr);
        a.push_back(r.a_star);
        it.push_back(static_cast<double>(r.iters));
    }
    write_columns_csv((fs::path(out) / "diagnostics.csv").string(), "s,w,stderr,a_star,iterations",
                      {s, w, se, a, it});
    std::ofstream meta(fs::path(out) / "meta.json");
    meta << traj.meta.dump(2) << '\n';
    std::printf("%s: final z = %.10g, slope = %.6g at s = %.6g\n",
                res.ok ? "done" : res.message.c_str(), res.traj.samples.back().z,
                res.traj.samples.back().dz_ds, res.traj.samples.back().s);
    return res.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Travelling fronts in a slow-fast reaction-diffusion system with spatially "
                 "varying coefficients: simulation and analysis toolkit"};
    app.require_subcommand(1);

    // example
    auto* ex_cmd = app.add_subcommand("example", "run a bundled experiment (" + join_ids() + ")");
    std::string ex_id, ex_out, ex_config;
    std::vector<double> ex_eps;
    std::uint64_t ex_seed = 0;
    ex_cmd->add_option("id", ex_id, "experiment id")->required();
    ex_cmd->add_option("--eps", ex_eps, "interface widths, comma separated")->delimiter(',');
    ex_cmd->add_option("--out", ex_out, "output directory root")->envname("HETFRONT_OUT");
    ex_cmd->add_option("--seed", ex_seed, "override the Monte Carlo seed (0: preset)");
    ex_cmd->add_option("--config", ex_config, "JSON file; its keys override the flags");

    // compare
    auto* cp_cmd = app.add_subcommand("compare", "align and compare two trajectory CSVs");
    std::string cp_a, cp_b, cp_out;
    std::vector<double> cp_anchor, cp_window;
    cp_cmd->add_option("a", cp_a, "first trajectory CSV")->required();
    cp_cmd->add_option("b", cp_b, "second trajectory CSV")->required();
    cp_cmd->add_option("--anchor", cp_anchor, "z,s: align both paths through this point")
        ->delimiter(',');
    cp_cmd->add_option("--window", cp_window, "lo,hi: restrict the compared time window")
        ->delimiter(',');
    cp_cmd->add_option("--out", cp_out, "also write the metrics as JSON");

    // background
    auto* bg_cmd = app.add_subcommand("background", "emit the minus background state v, q");
    ParamFlags bg_pf;
    bg_pf.attach(bg_cmd);
    std::vector<double> bg_range;
    std::string bg_out;
    bg_cmd->add_option("--range", bg_range, "lo,hi[,dx] sampling window")->delimiter(',');
    bg_cmd->add_option("--out", bg_out, "output CSV (default background.csv)");

    // stationary-fronts
    auto* sf_cmd = app.add_subcommand("stationary-fronts", "leading-order pinned front positions");
    ParamFlags sf_pf;
    sf_pf.attach(sf_cmd);
    std::vector<double> sf_search;
    sf_cmd->add_option("--search", sf_search, "lo,hi search window")->delimiter(',');

    // speeds
    auto* sp_cmd = app.add_subcommand("speeds", "constant-coefficient front speeds");
    double sp_alpha = 0.0, sp_gamma = 0.0, sp_tauhat = 1.0;
    sp_cmd->add_option("--alpha", sp_alpha)->required();
    sp_cmd->add_option("--gamma", sp_gamma)->required();
    sp_cmd->add_option("--tauhat", sp_tauhat);

    // shoot
    auto* sh_cmd = app.add_subcommand("shoot", "refine a front speed at eps > 0 by shooting");
    ParamFlags sh_pf;
    sh_pf.attach(sh_cmd);
    double sh_eps = 0.1, sh_tol = 1e-4;
    std::string sh_root = "0";
    std::vector<double> sh_bracket;
    sh_cmd->add_option("--eps", sh_eps, "interface width")->required();
    sh_cmd->add_option("--root", sh_root, "which constant-coefficient root seeds it: m, 0 or p");
    sh_cmd->add_option("--bracket", sh_bracket, "lo,hi speed bracket (default: auto)")
        ->delimiter(',');
    sh_cmd->add_option("--tol", sh_tol, "bracket width target");

    // pde-run
    auto* pr_cmd = app.add_subcommand("pde-run", "integrate the full two-component system");
    std::string pr_config, pr_out;
    double pr_z0 = 0.0, pr_speed = 0.0;
    bool pr_concat = false;
    pr_cmd->add_option("--config", pr_config, "JSON config ('example' key or full settings)");
    pr_cmd->add_option("--out", pr_out, "output directory")->envname("HETFRONT_OUT");
    pr_cmd->add_option("--z0", pr_z0, "initial front position");
    pr_cmd->add_option("--ic-speed", pr_speed, "travelling-profile IC at this speed")
        ->each([&](const std::string&) { pr_concat = true; });

    // dde-run
    auto* dr_cmd = app.add_subcommand("dde-run", "march the singular-limit front equation");
    std::string dr_config, dr_out;
    int dr_algo = 1;
    double dr_z0 = 0.0, dr_c0 = 0.0, dr_s_end = 10.0;
    dr_cmd->add_option("--config", dr_config, "JSON config ('example' key or full settings)");
    dr_cmd->add_option("--out", dr_out, "output directory")->envname("HETFRONT_OUT");
    dr_cmd->add_option("--algo", dr_algo, "1: sampled memory term, 2: co-simulated field")
        ->check(CLI::Range(1, 2));
    dr_cmd->add_option("--z0", dr_z0, "initial front position");
    dr_cmd->add_option("--c0", dr_c0, "pre-history slope");
    dr_cmd->add_option("--s-end", dr_s_end, "horizon");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ex_cmd->parsed()) return cmd_example(ex_id, ex_eps, ex_out, ex_seed, ex_config);
        if (cp_cmd->parsed()) return cmd_compare(cp_a, cp_b, cp_anchor, cp_window, cp_out);
        if (bg_cmd->parsed()) return cmd_background(bg_pf, bg_range, bg_out);
        if (sf_cmd->parsed()) return cmd_stationary(sf_pf, sf_search);
        if (sp_cmd->parsed()) return cmd_speeds(sp_alpha, sp_gamma, sp_tauhat);
        if (sh_cmd->parsed()) return cmd_shoot(sh_pf, sh_eps, sh_root, sh_bracket, sh_tol);
        if (pr_cmd->parsed()) return cmd_pde_run(pr_config, pr_out, pr_z0, pr_speed, pr_concat);
        if (dr_cmd->parsed()) return cmd_dde_run(dr_config, dr_out, dr_algo, dr_z0, dr_c0,
                                                 dr_s_end);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

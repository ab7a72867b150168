#include "hetfront/dde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "hetfront/background.hpp"
#include "hetfront/constant_coeff.hpp"
#include "hetfront/grid.hpp"
#include "hetfront/rng.hpp"

namespace hetfront {

namespace {

constexpr double kSqrt2Over3 = 0.47140452079103168293;

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iters = 0;
    bool ok = false;
};

// Brent's method on a sign-changing bracket [a, b].
template <class F>
RootResult brent(F&& f, double a, double b, double fa, double fb, double xtol, int max_iter) {
    RootResult out;
    if (fa == 0.0) return {a, 0.0, 0, true};
    if (fb == 0.0) return {b, 0.0, 0, true};
    if ((fa > 0.0) == (fb > 0.0)) return out;
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 2.22e-16 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return {b, fb, it, true};
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        out.iters = it + 1;
    }
    return {b, fb, max_iter, true}; // bracket exhausted the budget; best point
}

// Bracket the root of E nearest a = 0 within [-amax, amax]; one fourfold
// widening is allowed before giving up.
template <class F>
RootResult solve_slope_increment(F&& E, double a_max, bool* expanded, int max_iter = 80) {
    double amax = a_max;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double e0 = E(0.0);
        if (e0 == 0.0) return {0.0, 0.0, 0, true};
        const double em = E(-amax);
        if ((em > 0.0) != (e0 > 0.0)) {
            auto r = brent(E, -amax, 0.0, em, e0, 1e-12, max_iter);
            if (r.ok) return r;
        }
        const double ep = E(amax);
        if ((ep > 0.0) != (e0 > 0.0)) {
            auto r = brent(E, 0.0, amax, e0, ep, 1e-12, max_iter);
            if (r.ok) return r;
        }
        amax *= 4.0;
        if (expanded) *expanded = true;
    }
    return {};
}

} // namespace

double dde_error(const DdeConfig& cfg, const std::function<double(double)>& q_minus,
                 const FrontHistory& h, double a, double s, const McBlock* block,
                 double* stderr_out, double* w_out) {
    WEstimate w;
    switch (cfg.method) {
    case DdeConfig::Method::Mc:
        if (!block) throw std::invalid_argument("dde_error: MC method needs a sample block");
        w = delay_w_mc(h, a, s, cfg.params, cfg.f2, *block, cfg.control_beta);
        break;
    case DdeConfig::Method::Quadrature:
        w = delay_w_quadrature(h, a, s, cfg.params, cfg.f2, cfg.r_max_factor, cfg.quad_tol);
        break;
    case DdeConfig::Method::Cosim:
        throw std::invalid_argument("dde_error: Cosim advances through run_dde_front only");
    }
    if (stderr_out) *stderr_out = w.stderr_est;
    if (w_out) *w_out = cfg.params.tauhat * w.value;
    const double z_new = (s > h.last_time()) ? h.eval_extended(a, s) : h.eval(s);
    const double v_hat = cfg.params.tauhat * w.value - q_minus(z_new);
    return kSqrt2Over3 * (h.last_slope() + a) - cfg.params.alpha * v_hat - cfg.params.gamma;
}

namespace {

DdeResult run_algo1(const DdeConfig& cfg, double s0, double z0, double c0, double s_end) {
    const auto q_minus = make_q_minus(cfg.f2);
    FrontHistory hist = FrontHistory::constant_speed_tail(s0, z0, c0);
    Rng rng(cfg.seed);

    DdeResult res;
    res.traj.samples.push_back({s0, z0, c0});

    const long nsteps = static_cast<long>(std::ceil((s_end - s0) / cfg.ds - 1e-9));
    for (long i = 0; i < nsteps; ++i) {
        const double s_next = std::min(s0 + static_cast<double>(i + 1) * cfg.ds, s_end);
        McBlock block;
        const McBlock* bp = nullptr;
        if (cfg.method == DdeConfig::Method::Mc) {
            block = McBlock::draw(cfg.mc_samples, rng);
            bp = &block;
        }
        double se = 0.0, w_last = 0.0;
        const auto E = [&](double a) {
            ++res.diag.error_evals;
            return dde_error(cfg, q_minus, hist, a, s_next, bp, &se, &w_last);
        };
        auto root = solve_slope_increment(E, cfg.a_max, &res.diag.bracket_expanded);
        if (!root.ok) {
            res.message = "no sign change of the speed-law defect within the slope bracket";
            return res;
        }
        hist.append_segment(hist.last_slope() + root.x, s_next);
        res.traj.samples.push_back({s_next, hist.last_position(), hist.last_slope()});
        res.step_records.push_back({s_next, w_last, se, root.x, root.iters});
        res.diag.max_abs_residual = std::max(res.diag.max_abs_residual, std::abs(root.fx));
        res.diag.max_stderr = std::max(res.diag.max_stderr, se);
        res.diag.max_root_iters = std::max(res.diag.max_root_iters, root.iters);
    }
    res.ok = true;
    return res;
}

// Crank-Nicolson machinery for the auxiliary field of Algorithm 2.
class CosimField {
public:
    CosimField(const DdeConfig& cfg, double dt)
        : cfg_(cfg), grid_(GridSpec::over(cfg.cosim_domain.lo, cfg.cosim_domain.hi, cfg.cosim_dx)),
          dt_(dt) {
        const auto v_minus = make_v_minus(cfg.f2);
        bc_left_ = v_minus(grid_.x0);
        bc_right_ = -v_minus(grid_.x_last());
        f2v_.resize(grid_.n);
        for (std::size_t i = 0; i < grid_.n; ++i) f2v_[i] = 1.0 + cfg.f2(grid_.x(i));

        // (tauhat/dt - L/2) V^{n+1} = (tauhat/dt + L/2) V^n + (S^n + S^{n+1})/2,
        // L = D2 - I, Dirichlet rows pinned.
        const double r = 0.5 / (grid_.dx * grid_.dx);
        const double tdt = cfg.params.tauhat / dt_;
        lo_ = -r;
        di_ = tdt + 2.0 * r + 0.5;
        up_ = -r;
        exp_di_ = tdt - 2.0 * r - 0.5;
        exp_off_ = r;
    }

    const GridSpec& grid() const { return grid_; }
    double bc_left() const { return bc_left_; }
    double bc_right() const { return bc_right_; }

    void source(double z, std::vector<double>& s) const {
        s.assign(grid_.n, 0.0);
        const double jr = (z - grid_.x0) / grid_.dx;
        const long j = std::lround(jr);
        for (std::size_t i = 0; i < grid_.n; ++i) {
            double w;
            if (static_cast<long>(i) < j)
                w = -1.0;
            else if (static_cast<long>(i) > j)
                w = 1.0;
            else
                w = 2.0 * (static_cast<double>(j) + 0.5 - jr) - 1.0;
            s[i] = f2v_[i] * w;
        }
    }

    // One CN substep from v with the front at z_old -> z_new.
    void advance(std::vector<double>& v, double z_old, double z_new) const {
        const std::size_t n = grid_.n;
        std::vector<double> s_old(n), s_new(n), rhs(n);
        source(z_old, s_old);
        source(z_new, s_new);
        for (std::size_t i = 1; i + 1 < n; ++i)
            rhs[i] = exp_off_ * v[i - 1] + exp_di_ * v[i] + exp_off_ * v[i + 1] +
                     0.5 * (s_old[i] + s_new[i]);
        rhs[0] = bc_left_;
        rhs[n - 1] = bc_right_;

        // Thomas with pinned end rows.
        std::vector<double> cp(n), dp(n);
        cp[0] = 0.0;
        dp[0] = rhs[0];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double m = di_ - lo_ * cp[i - 1];
            cp[i] = up_ / m;
            dp[i] = (rhs[i] - lo_ * dp[i - 1]) / m;
        }
        dp[n - 1] = rhs[n - 1];
        v[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) v[i] = dp[i] - cp[i] * v[i + 1];
    }

private:
    const DdeConfig& cfg_;
    GridSpec grid_;
    double dt_;
    double bc_left_, bc_right_;
    std::vector<double> f2v_;
    double lo_, di_, up_, exp_di_, exp_off_;
};

DdeResult run_algo2(const DdeConfig& cfg, double s0, double z0, double c0, double s_end) {
    if (cfg.cosim_substeps < 1) throw std::invalid_argument("cosim_substeps must be >= 1");
    const double dt = cfg.ds / cfg.cosim_substeps;
    CosimField field(cfg, dt);
    const auto& g = field.grid();

    DdeResult res;
    if (!cfg.cosim_domain.contains(z0)) {
        res.message = "initial front position outside the co-simulation domain";
        return res;
    }

    // Pre-roll: start from a crude profile far in the past and let the field
    // relax onto the moving front; the mismatch decays like exp(-T/tauhat).
    const double preroll = cfg.cosim_preroll >= 0.0 ? cfg.cosim_preroll : 20.0 * cfg.params.tauhat;
    const auto v_minus = make_v_minus(cfg.f2);
    std::vector<double> v(g.n);
    const double z_pre = z0 - c0 * preroll;
    for (std::size_t i = 0; i < g.n; ++i)
        v[i] = -std::tanh(g.x(i) - z_pre) * v_minus(g.x(i));
    v.front() = field.bc_left();
    v.back() = field.bc_right();
    const long pre_steps = std::max(1L, std::lround(preroll / dt));
    for (long k = 0; k < pre_steps; ++k) {
        const double t0 = -preroll + static_cast<double>(k) * dt;
        const double t1 = t0 + dt;
        field.advance(v, z0 + c0 * std::min(t0, 0.0), z0 + c0 * std::min(t1, 0.0));
    }

    FrontHistory hist = FrontHistory::constant_speed_tail(s0, z0, c0);
    res.traj.samples.push_back({s0, z0, c0});
    res.diag.final_front_v = eval_cubic({g, v}, z0);

    const long nsteps = static_cast<long>(std::ceil((s_end - s0) / cfg.ds - 1e-9));
    for (long i = 0; i < nsteps; ++i) {
        const double s_now = hist.last_time();
        const double s_next = std::min(s0 + static_cast<double>(i + 1) * cfg.ds, s_end);
        const double z_now = hist.last_position();
        if (z_now < g.x0 + 3.0 || z_now > g.x_last() - 3.0) {
            res.message = "front reached the co-simulation domain margin";
            res.ok = true;
            return res;
        }
        const double h_step = s_next - s_now;
        const double slope0 = hist.last_slope();

        std::vector<double> v_trial;
        const auto E = [&](double a) {
            ++res.diag.error_evals;
            const double slope = slope0 + a;
            v_trial = v;
            for (int k = 0; k < cfg.cosim_substeps; ++k) {
                const double za = z_now + slope * h_step * k / cfg.cosim_substeps;
                const double zb = z_now + slope * h_step * (k + 1) / cfg.cosim_substeps;
                field.advance(v_trial, za, zb);
            }
            const double v_front = eval_cubic({g, v_trial}, z_now + slope * h_step);
            return kSqrt2Over3 * slope - cfg.params.alpha * v_front - cfg.params.gamma;
        };
        auto root = solve_slope_increment(E, cfg.a_max, &res.diag.bracket_expanded);
        if (!root.ok) {
            res.message = "no sign change of the speed-law defect within the slope bracket";
            return res;
        }
        const double e_final = E(root.x); // recompute so v_trial matches the root
        v = v_trial;
        hist.append_segment(slope0 + root.x, s_next);
        res.traj.samples.push_back({s_next, hist.last_position(), hist.last_slope()});
        res.diag.max_abs_residual = std::max(res.diag.max_abs_residual, std::abs(e_final));
        res.diag.max_root_iters = std::max(res.diag.max_root_iters, root.iters);
        res.diag.final_front_v = eval_cubic({g, v}, hist.last_position());
        res.step_records.push_back({s_next, res.diag.final_front_v, 0.0, root.x, root.iters});
    }
    res.ok = true;
    return res;
}

} // namespace

DdeResult run_dde_front(const DdeConfig& cfg, double s0, double z0, double c0, double s_end) {
    cfg.params.validate();
    if (!(cfg.ds > 0.0)) throw std::invalid_argument("run_dde_front: ds must be positive");
    DdeResult res;
    if (s_end <= s0) {
        res.traj.samples.push_back({s0, z0, c0});
        res.ok = true;
    } else {
        res = (cfg.method == DdeConfig::Method::Cosim) ? run_algo2(cfg, s0, z0, c0, s_end)
                                                       : run_algo1(cfg, s0, z0, c0, s_end);
    }
    res.traj.meta = {{"kind", "front-path"},
                     {"solver", cfg.method == DdeConfig::Method::Cosim        ? "dde-cosim"
                                : cfg.method == DdeConfig::Method::Quadrature ? "dde-quadrature"
                                                                              : "dde-mc"},
                     {"ds", cfg.ds},
                     {"seed", cfg.seed},
                     {"mc_samples", cfg.mc_samples},
                     {"s0", s0},
                     {"z0", z0},
                     {"c0", c0}};
    return res;
}

} // namespace hetfront

#include "hetfront/wave_ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hetfront/constant_coeff.hpp"

namespace hetfront {

WaveState comoving_rhs(const WaveState& w, double c, double eps, const ModelParams& p) {
    WaveState d;
    d.u = w.p;
    d.p = -w.u + w.u * w.u * w.u + eps * (p.alpha * w.v + p.gamma) - eps * c * w.p;
    d.v = eps * w.q;
    d.q = eps * (w.v - w.u - p.tauhat * c * w.q);
    return d;
}

namespace {

WaveState axpy(const WaveState& a, double h, const WaveState& b) {
    return {a.u + h * b.u, a.p + h * b.p, a.v + h * b.v, a.q + h * b.q};
}

// Fixed point near sign * 1: u* - u*^3 = eps (alpha u* + gamma).
double fixed_point_u(int sign, double eps, const ModelParams& p) {
    double u = static_cast<double>(sign);
    for (int it = 0; it < 60; ++it) {
        const double g = u * u * u - u + eps * (p.alpha * u + p.gamma);
        const double dg = 3.0 * u * u - 1.0 + eps * p.alpha;
        const double du = g / dg;
        u -= du;
        if (std::abs(du) < 1e-15) return u;
    }
    throw std::runtime_error("wave_ode: background fixed point did not converge");
}

struct EigenFrame {
    double lambda[4];   // ascending: fast-stable, slow-stable, slow-unstable, fast-unstable
    WaveState vec[4];
};

EigenFrame linearize(double ustar, double c, double eps, const ModelParams& p) {
    Eigen::Matrix4d j;
    j << 0, 1, 0, 0, //
        -1.0 + 3.0 * ustar * ustar, -eps * c, eps * p.alpha, 0, //
        0, 0, 0, eps, //
        -eps, 0, eps, -eps * p.tauhat * c;
    Eigen::EigenSolver<Eigen::Matrix4d> es(j);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("wave_ode: eigensolve failed");
    std::vector<int> order{0, 1, 2, 3};
    for (int k = 0; k < 4; ++k)
        if (std::abs(es.eigenvalues()(k).imag()) > 1e-9)
            throw std::runtime_error("wave_ode: complex eigenvalues in the linearization");
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });
    EigenFrame f;
    for (int k = 0; k < 4; ++k) {
        f.lambda[k] = es.eigenvalues()(order[k]).real();
        const auto col = es.eigenvectors().col(order[k]);
        f.vec[k] = {col(0).real(), col(1).real(), col(2).real(), col(3).real()};
    }
    return f;
}

WaveState scale(const WaveState& w, double s) { return {w.u * s, w.p * s, w.v * s, w.q * s}; }

// Dormand-Prince 5(4) with error control; nm.box is the trapping region.
class Dopri {
public:
    Dopri(double c, double eps, const ModelParams& p, const ShootNumerics& nm, int dir)
        : c_(c), eps_(eps), p_(p), nm_(nm), dir_(dir) {}

    // one adaptive step from (xi, w); returns the accepted step size
    double step(double& xi, WaveState& w, double h_try) {
        double h = h_try;
        for (int rej = 0; rej < 60; ++rej) {
            WaveState y5;
            const double err = attempt(w, h, y5);
            if (err <= 1.0) {
                xi += h;
                w = y5;
                h_next_ = h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-12), -0.2)));
                return h;
            }
            h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
            if (h < 1e-14) throw std::runtime_error("wave_ode: step-size underflow");
        }
        throw std::runtime_error("wave_ode: repeated step rejections");
    }

    double h_next() const { return h_next_; }

    double attempt(const WaveState& w, double h, WaveState& out) const {
        const auto f = [&](const WaveState& y) {
            const WaveState d = comoving_rhs(y, c_, eps_, p_);
            return dir_ > 0 ? d : scale(d, -1.0);
        };
        const WaveState k1 = f(w);
        const WaveState k2 = f(axpy(w, h * (1.0 / 5.0), k1));
        WaveState t = axpy(w, h * (3.0 / 40.0), k1);
        t = axpy(t, h * (9.0 / 40.0), k2);
        const WaveState k3 = f(t);
        t = axpy(w, h * (44.0 / 45.0), k1);
        t = axpy(t, h * (-56.0 / 15.0), k2);
        t = axpy(t, h * (32.0 / 9.0), k3);
        const WaveState k4 = f(t);
        t = axpy(w, h * (19372.0 / 6561.0), k1);
        t = axpy(t, h * (-25360.0 / 2187.0), k2);
        t = axpy(t, h * (64448.0 / 6561.0), k3);
        t = axpy(t, h * (-212.0 / 729.0), k4);
        const WaveState k5 = f(t);
        t = axpy(w, h * (9017.0 / 3168.0), k1);
        t = axpy(t, h * (-355.0 / 33.0), k2);
        t = axpy(t, h * (46732.0 / 5247.0), k3);
        t = axpy(t, h * (49.0 / 176.0), k4);
        t = axpy(t, h * (-5103.0 / 18656.0), k5);
        const WaveState k6 = f(t);
        out = axpy(w, h * (35.0 / 384.0), k1);
        out = axpy(out, h * (500.0 / 1113.0), k3);
        out = axpy(out, h * (125.0 / 192.0), k4);
        out = axpy(out, h * (-2187.0 / 6784.0), k5);
        out = axpy(out, h * (11.0 / 84.0), k6);
        const WaveState k7 = f(out);

        WaveState e = scale(k1, 35.0 / 384.0 - 5179.0 / 57600.0);
        e = axpy(e, 500.0 / 1113.0 - 7571.0 / 16695.0, k3);
        e = axpy(e, 125.0 / 192.0 - 393.0 / 640.0, k4);
        e = axpy(e, -2187.0 / 6784.0 + 92097.0 / 339200.0, k5);
        e = axpy(e, 11.0 / 84.0 - 187.0 / 2100.0, k6);
        e = axpy(e, -1.0 / 40.0, k7);

        double acc = 0.0;
        const double* we = &e.u;
        const double* ww = &w.u;
        const double* wo = &out.u;
        for (int i = 0; i < 4; ++i) {
            const double sc = nm_.atol + nm_.rtol * std::max(std::abs(ww[i]), std::abs(wo[i]));
            const double r = h * we[i] / sc;
            acc += r * r;
        }
        return std::sqrt(acc / 4.0);
    }

private:
    double c_, eps_;
    const ModelParams& p_;
    const ShootNumerics& nm_;
    int dir_;
    double h_next_ = 1e-3;
};

void check_box(const WaveState& w, const ShootNumerics& nm) {
    if (std::abs(w.u) > nm.box_u || std::abs(w.p) > nm.box_p || std::abs(w.v) > nm.box_v ||
        std::abs(w.q) > nm.box_q)
        throw std::runtime_error("wave_ode: orbit escaped the trapping box");
}

struct SectionHit {
    WaveState w;  // u = 0 up to refinement tolerance
    double xi;    // integration time used to reach it
};

// Integrate until u crosses zero (rising for dir=+1 from the minus side,
// falling in backward time for dir=-1 from the plus side). Optionally record
// the orbit samples (integration time, state).
SectionHit run_to_section(WaveState w, double c, double eps, const ModelParams& p,
                          const ShootNumerics& nm, int dir,
                          std::vector<std::pair<double, WaveState>>* samples = nullptr) {
    Dopri solver(c, eps, p, nm, dir);
    double xi = 0.0, h = 1e-3;
    if (samples) samples->push_back({xi, w});
    const auto crossed = [&](double u) { return dir > 0 ? u >= 0.0 : u <= 0.0; };
    if (crossed(w.u)) throw std::runtime_error("wave_ode: seed already past the section");
    while (xi < nm.xi_max) {
        const WaveState w_prev = w;
        const double xi_prev = xi;
        solver.step(xi, w, h);
        h = solver.h_next();
        if (crossed(w.u)) {
            // refine the crossing inside the last step by a secant on the
            // sub-step size (re-stepping from the saved state)
            double hs = (xi - xi_prev) * w_prev.u / (w_prev.u - w.u);
            WaveState wc = w;
            for (int it = 0; it < 40; ++it) {
                WaveState trial;
                solver.attempt(w_prev, hs, trial);
                wc = trial;
                if (std::abs(wc.u) < 1e-13) break;
                const WaveState d = comoving_rhs(wc, c, eps, p);
                const double slope = dir > 0 ? d.u : -d.u;
                hs -= wc.u / slope;
            }
            if (samples) samples->push_back({xi_prev + hs, wc});
            return {wc, xi_prev + hs};
        }
        check_box(w, nm);
        if (samples) samples->push_back({xi, w});
    }
    throw std::runtime_error("wave_ode: no section crossing before xi_max");
}

struct ManifoldProbe {
    WaveState hit_a, hit_b; // section states of the two probe orbits
    double ustar = 0.0;
    double amp_a = 0.0, amp_b = 0.0; // slow-eigenline seed amplitudes used
};

// u on the slow manifold at given (v, q). The bare layer equation
// u^3 - u + eps (alpha v + gamma) = 0 is off the manifold by O(eps^3), whose
// slow-stable transverse part survives to the section and biases the trace,
// so the invariance corrections (from p' + eps c p with p = -eps^2 alpha q /
// D) are kept:
//
//   u^3 - u + eps (alpha v + gamma)
//     + eps^3 alpha (v - u + c q (1 - tauhat)) / D
//     + 6 eps^4 alpha^2 u q^2 / D^3 = 0,   D = 3 u^2 - 1.
double slave_u(double v, double q, double c, double eps, const ModelParams& p, double u_guess) {
    double u = u_guess;
    const double e3 = eps * eps * eps;
    for (int it = 0; it < 60; ++it) {
        const double d = 3.0 * u * u - 1.0;
        const double g = u * u * u - u + eps * (p.alpha * v + p.gamma) +
                         e3 * p.alpha * (v - u + c * q * (1.0 - p.tauhat)) / d +
                         6.0 * e3 * eps * p.alpha * p.alpha * u * q * q / (d * d * d);
        const double du = g / d;
        u -= du;
        if (std::abs(du) < 1e-15) return u;
    }
    throw std::runtime_error("wave_ode: slow-manifold slave did not converge");
}

// Flow restricted to the slow manifold, in slow time t = eps xi:
// dv/dt = q, dq/dt = v - u(v, q) - tauhat c q. The fast modes are slaved
// out, so this reduced system is safe to integrate over long rides (the full
// 4D flow amplifies any fast-unstable roundoff as e^{sqrt(2) xi}).
struct Planar {
    double v, q;
};

Planar planar_rhs(const Planar& w, double c, double eps, const ModelParams& p, double& u_guess) {
    u_guess = slave_u(w.v, w.q, c, eps, p, u_guess);
    return {w.q, w.v - u_guess - p.tauhat * c * w.q};
}

// Ride the 1D slow-unstable (side < 0, forward) or slow-stable (side > 0,
// backward) orbit of the reduced flow from an infinitesimal displacement
// along the eigenline until |v - v*| reaches amp. Seeding at finite amp on
// the eigenline instead misses the orbit's curvature, an O(amp^2) transverse
// error -- and amp is not small here, so that error dominated every kick.
Planar planar_ride(int side, double amp, const WaveState& es, double ustar, double c, double eps,
                   const ModelParams& p) {
    const double amp0 = 1e-4 * amp;
    Planar w{ustar + amp0 * es.v, amp0 * es.q};
    double u_guess = ustar;
    const double dir = side < 0 ? 1.0 : -1.0; // slow-stable grows backward
    const double dt = 0.01;
    const auto rk4 = [&](Planar y, double h) {
        double ug = u_guess;
        const Planar k1 = planar_rhs(y, c, eps, p, ug);
        const Planar k2 = planar_rhs({y.v + 0.5 * h * k1.v, y.q + 0.5 * h * k1.q}, c, eps, p, ug);
        const Planar k3 = planar_rhs({y.v + 0.5 * h * k2.v, y.q + 0.5 * h * k2.q}, c, eps, p, ug);
        const Planar k4 = planar_rhs({y.v + h * k3.v, y.q + h * k3.q}, c, eps, p, ug);
        u_guess = ug;
        return Planar{y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
                      y.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q)};
    };
    const auto excess = [&](const Planar& y) { return std::abs(y.v - ustar) - amp; };
    const double t_max = 2000.0;
    for (double t = 0.0; t < t_max; t += dt) {
        const Planar w_prev = w;
        w = rk4(w, dir * dt);
        if (excess(w) >= 0.0) {
            // bisect the crossing inside the last step
            double lo = 0.0, hi = dt;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (excess(rk4(w_prev, dir * mid)) >= 0.0 ? hi : lo) = mid;
            }
            return rk4(w_prev, dir * hi);
        }
        if (std::abs(w.v - ustar) > 10.0 * amp + 10.0)
            throw std::runtime_error("wave_ode: slow-manifold ride diverged");
    }
    throw std::runtime_error("wave_ode: slow-manifold ride exhausted its time budget");
}

// Seed on the 1D slow orbit at v-displacement amp from the fixed point (via
// the reduced ride), lift u, p onto the manifold, then kick by sigma to
// select the jump direction. The kick is applied along the fast eigenvector
// of the Jacobian frozen at the lift point (the Jacobian only depends on u,
// so linearize() applies off the fixed points too); the fixed point's fast
// eigenvector is rotated away from the local fast direction out here, and
// the bare layer direction (1, lambda) misses the O(eps) v, q components of
// the fast eigenvector.
WaveState slow_manifold_seed(int side, double amp, const WaveState& es, double c, double eps,
                             const ModelParams& p, double sigma) {
    const double ustar = fixed_point_u(side, eps, p);
    const Planar base = planar_ride(side, amp, es, ustar, c, eps, p);
    WaveState seed;
    seed.v = base.v;
    seed.q = base.q;
    const double u = slave_u(base.v, base.q, c, eps, p, static_cast<double>(side));
    seed.u = u;
    seed.p = -eps * eps * p.alpha * seed.q / (3.0 * u * u - 1.0);
    // forward-unstable direction on the (-) side, backward-growing (stable)
    // on (+)
    const EigenFrame loc = linearize(u, c, eps, p);
    WaveState ef = loc.vec[side < 0 ? 3 : 0];
    if (std::abs(ef.u) < 1e-9) throw std::runtime_error("wave_ode: degenerate fast direction");
    ef = scale(ef, 1.0 / ef.u);
    const double kick = side < 0 ? sigma : -sigma;
    seed.u += kick * ef.u;
    seed.p += kick * ef.p;
    seed.v += kick * ef.v;
    seed.q += kick * ef.q;
    return seed;
}

// Seed two orbits on the slow manifold of the given fixed point and run them
// to the section. side = -1: unstable manifold of the (-) point, forward;
// side = +1: stable manifold of the (+) point, backward. Amplitudes <= 0 pick
// the default first-pass placement frac * gap / drift.
ManifoldProbe probe_manifold(int side, double c, double eps, const ModelParams& p,
                             const ShootNumerics& nm, double amp_a = -1.0, double amp_b = -1.0) {
    const double ustar = fixed_point_u(side, eps, p);
    const EigenFrame f = linearize(ustar, c, eps, p);

    // slow member of the relevant invariant subspace
    const int slow = side < 0 ? 2 : 1; // slow-unstable resp. slow-stable
    WaveState es = f.vec[slow];
    if (std::abs(es.v) < 1e-12) throw std::runtime_error("wave_ode: degenerate slow direction");
    // orient the ride toward the front's v level; for the middle branch that
    // is above u* on the (-) side and below on (+), but the outer branches
    // can put the front v on the other side of a fixed point
    const double v_front = vstar(c, p.tauhat);
    double toward = v_front - ustar;
    if (std::abs(toward) < 1e-9) toward = static_cast<double>(-side);
    es = scale(es, (toward > 0.0 ? 1.0 : -1.0) / es.v);

    if (amp_a <= 0.0 || amp_b <= 0.0) {
        const double gap = std::max(0.05, std::abs(toward));
        // ride length until the fast deviation reaches O(0.35), and the slow
        // drift accumulated over it; seed closer in so probes land near the
        // front
        const double xi_ride = std::log(0.35 / nm.sigma) / std::sqrt(2.0);
        const double drift = std::exp(std::abs(f.lambda[slow]) * xi_ride);
        amp_a = nm.frac_a * gap / drift;
        amp_b = nm.frac_b * gap / drift;
    }

    const auto shoot_one = [&](double amp) {
        const WaveState seed = slow_manifold_seed(side, amp, es, c, eps, p, nm.sigma);
        return run_to_section(seed, c, eps, p, nm, side < 0 ? 1 : -1).w;
    };
    ManifoldProbe out;
    out.ustar = ustar;
    out.amp_a = amp_a;
    out.amp_b = amp_b;
    out.hit_a = shoot_one(amp_a);
    out.hit_b = shoot_one(amp_b);
    return out;
}

struct Vec3 {
    double v, q, p;
};

Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.v - b.v, a.q - b.q, a.p - b.p}; }
double dot(const Vec3& a, const Vec3& b) { return a.v * b.v + a.q * b.q + a.p * b.p; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.q * b.p - a.p * b.q, a.p * b.v - a.v * b.p, a.v * b.q - a.q * b.v};
}
Vec3 at(const WaveState& w) { return {w.v, w.q, w.p}; }

struct ChordCross {
    double v_minus, v_plus; // v of each side's closest point (re-aim targets)
    double v_hat, q_hat;    // midpoint of the closest pair
    double p_minus, p_plus; // p at each side's closest point
    double gap;             // signed closest-approach gap in (v, q, p)
};

// Closest approach of the two section chords in full (v, q, p). The defect
// is the signed gap along the common normal: zero exactly when the manifold
// traces intersect, i.e. at a connection. Intersecting the (v, q)
// projections instead breaks down on the outer speed branches, where the
// traces cross the section far apart in (v, q) and the projected
// intersection is a long extrapolation of both secants.
ChordCross chord_intersect(const ManifoldProbe& mu, const ManifoldProbe& ms) {
    const Vec3 a0 = at(mu.hit_a), b0 = at(ms.hit_a);
    const Vec3 da = at(mu.hit_b) - a0, db = at(ms.hit_b) - b0;
    const double daa = dot(da, da), dab = dot(da, db), dbb = dot(db, db);
    const double det = daa * dbb - dab * dab;
    if (det < 1e-30)
        throw std::runtime_error("shoot_mismatch: manifold trace chords are parallel");
    const Vec3 r = b0 - a0;
    const double s = (dot(da, r) * dbb - dab * dot(db, r)) / det;
    const double t = (dab * dot(da, r) - daa * dot(db, r)) / det;
    const Vec3 pa{a0.v + s * da.v, a0.q + s * da.q, a0.p + s * da.p};
    const Vec3 pb{b0.v + t * db.v, b0.q + t * db.q, b0.p + t * db.p};
    Vec3 n = cross(da, db);
    const double nn = std::sqrt(dot(n, n));
    if (nn < 1e-30)
        throw std::runtime_error("shoot_mismatch: manifold trace chords are parallel");
    n = {n.v / nn, n.q / nn, n.p / nn};
    // fix the orientation by the dominant component so the sign of the gap
    // is continuous in c near a root
    const double dom = std::abs(n.p) >= std::max(std::abs(n.v), std::abs(n.q)) ? n.p
                       : std::abs(n.q) >= std::abs(n.v)                        ? n.q
                                                                               : n.v;
    if (dom < 0.0) n = {-n.v, -n.q, -n.p};
    ChordCross x;
    x.v_minus = pa.v;
    x.v_plus = pb.v;
    x.v_hat = 0.5 * (pa.v + pb.v);
    x.q_hat = 0.5 * (pa.q + pb.q);
    x.p_minus = pa.p;
    x.p_plus = pb.p;
    x.gap = dot(pa - pb, n);
    return x;
}

} // namespace

double shoot_mismatch(double c, double eps, const ModelParams& p, const ShootNumerics& nm,
                      ShootDiag* diag) {
    p.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("shoot_mismatch: eps must be positive");
    ManifoldProbe mu = probe_manifold(-1, c, eps, p, nm);
    ManifoldProbe ms = probe_manifold(+1, c, eps, p, nm);
    ChordCross x = chord_intersect(mu, ms);

    // The closest-approach point is robust, but the default chords land with
    // an O(0.1 gap) offset from it, and the secant error grows with the
    // square of that distance. Re-aim each side so its chord straddles the
    // measured approach point, using the local secant gain of landing v in
    // seed amplitude; the landing is not exactly linear in the amplitude, so
    // iterate the correction.
    const auto reaim = [&](const ManifoldProbe& pr, int side, double v_target) {
        const double gain = (pr.hit_b.v - pr.hit_a.v) / (pr.amp_b - pr.amp_a);
        const double delta = std::abs(v_target - pr.ustar);
        if (!(std::abs(gain) > 1e-9) || !(delta > 1e-9)) return pr; // keep this pass
        const double amp_mid = 0.5 * (pr.amp_a + pr.amp_b);
        const double v_mid = 0.5 * (pr.hit_a.v + pr.hit_b.v);
        const double lo = (v_target - pr.ustar) * (nm.aim_lo - 1.0);
        const double hi = (v_target - pr.ustar) * (nm.aim_hi - 1.0);
        double amp_a = amp_mid + (v_target + lo - v_mid) / gain;
        double amp_b = amp_mid + (v_target + hi - v_mid) / gain;
        if (amp_a > amp_b) std::swap(amp_a, amp_b);
        const double floor = 0.05 * amp_mid;
        amp_a = std::max(amp_a, floor);
        amp_b = std::max(amp_b, amp_a + floor);
        return probe_manifold(side, c, eps, p, nm, amp_a, amp_b);
    };
    for (int pass = 0; pass < 2; ++pass) {
        mu = reaim(mu, -1, x.v_minus);
        ms = reaim(ms, +1, x.v_plus);
        x = chord_intersect(mu, ms);
    }

    if (diag) {
        diag->mu_a = mu.hit_a;
        diag->mu_b = mu.hit_b;
        diag->ms_a = ms.hit_a;
        diag->ms_b = ms.hit_b;
        diag->v_hat = x.v_hat;
        diag->q_hat = x.q_hat;
        diag->p_minus = x.p_minus;
        diag->p_plus = x.p_plus;
    }
    return x.gap / (2.0 * std::sqrt(2.0) * eps);
}

Interval find_speed(double eps, const ModelParams& p, char root_index, Interval bracket,
                    double tol_c, const ShootNumerics& nm) {
    if (!(bracket.hi > bracket.lo)) {
        const SpeedRoots sr = speed_roots(p.alpha, p.gamma, p.tauhat);
        double c0;
        if (sr.roots.size() == 1) {
            c0 = sr.roots[0];
        } else if (sr.roots.size() == 3) {
            const int k = root_index == 'm' ? 0 : root_index == 'p' ? 2 : 1;
            c0 = sr.roots[static_cast<std::size_t>(k)];
        } else {
            throw std::runtime_error("find_speed: ambiguous speed-relation roots");
        }
        // the outer heteroclinic speeds drift from their eps -> 0 roots much
        // faster than the middle one, roughly in proportion to their size
        const double w = (0.1 + 0.8 * eps) * std::max(1.0, std::abs(c0));
        bracket = {c0 - w, c0 + w};
    }
    // coarse scan: far-off speeds can fail to connect at all (box escape),
    // and the defect need not be monotone over a wide bracket
    constexpr int kScan = 8;
    double cs[kScan + 1], fs[kScan + 1];
    bool ok[kScan + 1];
    for (int i = 0; i <= kScan; ++i) {
        cs[i] = bracket.lo + (bracket.hi - bracket.lo) * i / kScan;
        try {
            fs[i] = shoot_mismatch(cs[i], eps, p, nm);
            ok[i] = true;
        } catch (const std::runtime_error&) {
            ok[i] = false;
        }
    }
    const double centre = 0.5 * (bracket.lo + bracket.hi);
    int best = -1;
    for (int i = 0; i < kScan; ++i) {
        if (!ok[i] || !ok[i + 1] || (fs[i] > 0.0) == (fs[i + 1] > 0.0)) continue;
        if (best < 0 || std::abs(0.5 * (cs[i] + cs[i + 1]) - centre) <
                            std::abs(0.5 * (cs[best] + cs[best + 1]) - centre))
            best = i;
    }
    if (best < 0) throw std::runtime_error("find_speed: no sign change over the bracket");
    double lo = cs[best], hi = cs[best + 1];
    double f_lo = fs[best];
    if (f_lo == 0.0) return {lo, lo};
    if (fs[best + 1] == 0.0) return {hi, hi};
    while (hi - lo > tol_c) {
        const double mid = 0.5 * (lo + hi);
        const double fm = shoot_mismatch(mid, eps, p, nm);
        if (fm == 0.0) return {mid, mid};
        if ((fm > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

PdeState build_concatenated_ic(double c, double eps, const ModelParams& p, const GridSpec& grid,
                               double z0, const ShootNumerics& nm) {
    p.validate();
    // Both half-orbits must reach the section at the same slow coordinates or
    // the joined profile carries a V kink at the front; land them on the
    // measured manifold-trace crossing.
    ShootDiag diag;
    shoot_mismatch(c, eps, p, nm, &diag);
    struct Side {
        std::vector<std::pair<double, WaveState>> path; // xi' <= 0 resp. >= 0
        double ustar;
        double slow_rate; // spatial decay rate toward the fixed point
        double xi_first;  // xi' of the sample nearest the fixed point
        WaveState first;
    };
    const auto trace = [&](int side) {
        Side s;
        s.ustar = fixed_point_u(side, eps, p);
        const EigenFrame f = linearize(s.ustar, c, eps, p);
        const int slow = side < 0 ? 2 : 1;
        WaveState es = f.vec[slow];
        es = scale(es, (side < 0 ? 1.0 : -1.0) / es.v);
        const double v_front = vstar(c, p.tauhat);
        const double gap = std::max(0.05, side < 0 ? v_front - s.ustar : s.ustar - v_front);
        ShootNumerics nm_ic = nm;
        nm_ic.sigma = 1e-3; // longer ride -> the orbit itself carries more tail
        const double xi_ride = std::log(0.35 / nm_ic.sigma) / std::sqrt(2.0);
        const double drift = std::exp(std::abs(f.lambda[slow]) * xi_ride);

        // first pass measures the landing gain, second lands on the crossing
        double amp = gap / drift;
        const WaveState probe = slow_manifold_seed(side, amp, es, c, eps, p, nm_ic.sigma);
        const SectionHit trial = run_to_section(probe, c, eps, p, nm_ic, side < 0 ? 1 : -1);
        const double gain = std::abs(trial.w.v - s.ustar) / amp;
        const double delta = std::abs(diag.v_hat - s.ustar);
        if (gain > 1e-6 && delta > 1e-6) amp = delta / gain;
        const WaveState seed = slow_manifold_seed(side, amp, es, c, eps, p, nm_ic.sigma);

        std::vector<std::pair<double, WaveState>> raw;
        const SectionHit hit = run_to_section(seed, c, eps, p, nm_ic, side < 0 ? 1 : -1, &raw);
        // re-center: section at xi' = 0; minus side occupies xi' < 0
        for (auto& [xi, w] : raw) xi = side < 0 ? xi - hit.xi : hit.xi - xi;
        if (side > 0) std::reverse(raw.begin(), raw.end());
        s.path = std::move(raw);
        s.slow_rate = f.lambda[slow] / eps; // e^{lambda xi} = e^{(lambda/eps) x}
        const auto& anchor = side < 0 ? s.path.front() : s.path.back();
        s.xi_first = anchor.first;
        s.first = anchor.second;
        return s;
    };
    const Side left = trace(-1);
    const Side right = trace(+1);

    const auto sample = [&](const Side& s, double xi) {
        // binary search on the stored orbit, linear interpolation
        const auto& path = s.path;
        auto it = std::lower_bound(path.begin(), path.end(), xi,
                                   [](const auto& a, double b) { return a.first < b; });
        if (it == path.begin()) return path.front().second;
        if (it == path.end()) return path.back().second;
        const auto& [x1, w1] = *(it - 1);
        const auto& [x2, w2] = *it;
        const double t = (xi - x1) / (x2 - x1);
        WaveState w = axpy(scale(w1, 1.0 - t), t, w2);
        return w;
    };

    PdeState out;
    out.U = GridProfile(grid);
    out.V = GridProfile(grid);
    out.s = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double xi = (grid.x(i) - z0) / eps;
        const Side& s = xi < 0.0 ? left : right;
        if ((xi < 0.0 && xi >= s.xi_first) || (xi >= 0.0 && xi <= s.xi_first)) {
            const WaveState w = sample(s, xi);
            out.U.values[i] = w.u;
            out.V.values[i] = w.v;
        } else {
            // continue with the slow eigen-decay into the fixed point
            const double decay = std::exp(s.slow_rate * eps * (xi - s.xi_first));
            out.U.values[i] = s.ustar + (s.first.u - s.ustar) * decay;
            out.V.values[i] = s.ustar + (s.first.v - s.ustar) * decay;
        }
    }
    out.U.values.front() = -1.0;
    out.U.values.back() = 1.0;
    out.V.values.front() = -1.0;
    out.V.values.back() = 1.0;
    return out;
}

} // namespace hetfront

#include "hetfront/delay_functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetfront/constant_coeff.hpp"
#include "hetfront/special.hpp"

namespace hetfront {

namespace {

// 15-point Gauss-Legendre on [-1, 1].
constexpr int kGl = 15;
constexpr double kGlX[kGl] = {
    -0.98799251802048542849, -0.93727339240070590431, -0.84820658341042721620,
    -0.72441773136017004742, -0.57097217260853884754, -0.39415134707756336990,
    -0.20119409399743452230, 0.0,
    0.20119409399743452230,  0.39415134707756336990,  0.57097217260853884754,
    0.72441773136017004742,  0.84820658341042721620,  0.93727339240070590431,
    0.98799251802048542849};
constexpr double kGlW[kGl] = {
    0.03075324199611726835, 0.07036604748810812471, 0.10715922046717193501,
    0.13957067792615431445, 0.16626920581699393355, 0.18616100001556221103,
    0.19843148532711157646, 0.20257824192556127288,
    0.19843148532711157646, 0.18616100001556221103, 0.16626920581699393355,
    0.13957067792615431445, 0.10715922046717193501, 0.07036604748810812471,
    0.03075324199611726835};

template <class F>
double gl15(const F& f, double a, double b) {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kGl; ++i) acc += kGlW[i] * f(m + h * kGlX[i]);
    return acc * h;
}

template <class F>
double gl_adapt(const F& f, double a, double b, double tol, int depth) {
    const double whole = gl15(f, a, b);
    const double m = 0.5 * (a + b);
    const double split = gl15(f, a, m) + gl15(f, m, b);
    if (std::abs(split - whole) <= tol || depth >= 24) return split;
    return gl_adapt(f, a, m, 0.5 * tol, depth + 1) + gl_adapt(f, m, b, 0.5 * tol, depth + 1);
}

// exp(-R/tauhat - tauhat D^2/(4R)) * (erfcx(a+) + erfcx(a-)) / 2 with
// a_\pm = (2R/tauhat \pm D) sqrt(tauhat/(4R)).  When an argument is negative
// the reflection erfcx(-x) = 2 e^{x^2} - erfcx(x) is folded into the
// exponential analytically (the combined exponent collapses to \pm D), so
// nothing overflows even for fast paths with |D| >> R.
double kernel_weight(double r, double d, double tauhat) {
    const double q = tauhat * d * d / (4.0 * r);
    const double sc = std::sqrt(tauhat / (4.0 * r));
    const double ap = (2.0 * r / tauhat + d) * sc;
    const double am = (2.0 * r / tauhat - d) * sc;
    const double base = std::exp(-r / tauhat - q);
    double tp, tm;
    if (ap >= 0.0)
        tp = base * erfcx(ap);
    else
        tp = 2.0 * std::exp(d) - base * erfcx(-ap);
    if (am >= 0.0)
        tm = base * erfcx(am);
    else
        tm = 2.0 * std::exp(-d) - base * erfcx(-am);
    return 0.5 * (tp + tm);
}

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

} // namespace

McBlock McBlock::draw(std::size_t m, Rng& rng) {
    McBlock b;
    b.X.resize(m);
    b.Z.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        b.X[i] = rng.exponential();
        b.Z[i] = rng.normal();
    }
    return b;
}

WEstimate delay_w_quadrature(const FrontHistory& h, double a, double s, const ModelParams& p,
                             const HeterogeneitySpec& f2, double r_max_factor, double tol) {
    p.validate();
    const double tauhat = p.tauhat;
    const double sN = h.last_time();
    if (s < sN) throw std::domain_error("delay_w_quadrature: s precedes end of history");
    const double zs = (s > sN) ? h.eval_extended(a, s) : h.eval(s);

    const auto z_of = [&](double u) { return u <= sN ? h.eval(u) : h.eval_extended(a, u); };
    const auto zp_of = [&](double u) { return u <= sN ? h.slope_at(u) : h.last_slope() + a; };

    const double r_max = r_max_factor * tauhat;
    double sup_path = 0.0;
    const auto g = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double u = s - r;
        const double zu = z_of(u);
        const double path = zp_of(u) * (1.0 + f2(zu));
        sup_path = std::max(sup_path, std::abs(path));
        return path * kernel_weight(r, zs - zu, tauhat);
    };

    // Segment the outer integral where z' jumps: the extension boundary, the
    // recorded breakpoints, and the tail anchor.
    std::vector<double> cuts;
    cuts.push_back(0.0);
    if (s > sN) cuts.push_back(s - sN);
    const auto& segs = h.segments();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
        const double r = s - it->s_end;
        if (r > 0.0 && r < r_max) cuts.push_back(r);
    }
    const double r_tail = s - h.tail_time();
    if (r_tail > 0.0 && r_tail < r_max) cuts.push_back(r_tail);
    cuts.push_back(r_max);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               cuts.end());

    WEstimate out;
    KahanSum acc;
    const double seg_tol = tol / static_cast<double>(cuts.size());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        if (k == 0) {
            // t = sqrt(R) removes the half-integer powers at the origin.
            const auto gt = [&](double t) { return 2.0 * t * g(t * t); };
            acc.add(gl_adapt(gt, 0.0, std::sqrt(hi), seg_tol, 0));
        } else {
            acc.add(gl_adapt(g, lo, hi, seg_tol, 0));
        }
    }
    out.value = acc.s / (2.0 * tauhat);
    out.trunc_bound = sup_path * std::exp(-r_max / tauhat);
    out.evals = 0;
    return out;
}

WEstimate delay_w_mc(const FrontHistory& h, double a, double s, const ModelParams& p,
                     const HeterogeneitySpec& f2, const McBlock& block, double beta) {
    p.validate();
    if (block.X.size() != block.Z.size() || block.X.empty())
        throw std::invalid_argument("delay_w_mc: bad sample block");
    const double tauhat = p.tauhat;
    const double sN = h.last_time();
    if (s < sN) throw std::domain_error("delay_w_mc: s precedes end of history");
    const double zs = (s > sN) ? h.eval_extended(a, s) : h.eval(s);
    const double c_lin = h.last_slope() + a;
    const double f20 = f2(zs);

    // One sampled term: draw X ~ Exp(1), Z ~ N(0,1), set R = tauhat X^2 / (2 Z^2);
    // then R^{-1/2} e^{-R/tauhat} I(R) dR integrates to the expectation of
    //   (R / (tauhat X)) z'(s-R) (1 + f2(z(s-R)))
    //       exp(-R/tauhat - tauhat D^2/(4R)) 2 cosh(tauhat D X / (2R)).
    // cosh and the Gaussian factor are combined in log space; the exponent is
    // bounded by Z^2/2 - R/tauhat, so the term never overflows.
    const auto z_hist = [&](double u) { return u <= sN ? h.eval(u) : h.eval_extended(a, u); };
    const auto zp_hist = [&](double u) { return u <= sN ? h.slope_at(u) : c_lin; };

    const auto term = [&](double X, double Z) -> double {
        if (!(X > 0.0) || Z == 0.0) return 0.0;
        const double r = tauhat * X * X / (2.0 * Z * Z);
        if (!(r > 0.0) || !std::isfinite(r)) return 0.0;
        if (r > 700.0 * tauhat) return 0.0; // exp(-r/tauhat) underflows
        const double u = s - r;
        const double zu = z_hist(u);
        const double dd = zs - zu;
        const double b = 0.5 * tauhat * std::abs(dd) * X / r;
        const double e1 = -r / tauhat - tauhat * dd * dd / (4.0 * r) + b;
        const double v = (r / (tauhat * X)) * zp_hist(u) * (1.0 + f2(zu)) * std::exp(e1) *
                         (1.0 + std::exp(-2.0 * b));
        return std::isfinite(v) ? v : 0.0;
    };

    const std::size_t m = block.X.size();
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double gi = term(block.X[i], block.Z[i]);
        // control: same draws on the straight line through z(s) with frozen f2
        double hi = 0.0;
        if (beta != 0.0) {
            const double X = block.X[i], Z = block.Z[i];
            if (X > 0.0 && Z != 0.0) {
                const double r = tauhat * X * X / (2.0 * Z * Z);
                if (r > 0.0 && std::isfinite(r) && r <= 700.0 * tauhat) {
                    const double dd = c_lin * r;
                    const double b = 0.5 * tauhat * std::abs(dd) * X / r;
                    const double e1 = -r / tauhat - tauhat * dd * dd / (4.0 * r) + b;
                    const double v = (r / (tauhat * X)) * c_lin * (1.0 + f20) * std::exp(e1) *
                                     (1.0 + std::exp(-2.0 * b));
                    if (std::isfinite(v)) hi = v;
                }
            }
        }
        d[i] = gi - beta * hi;
    }

    KahanSum sum;
    for (double x : d) sum.add(x);
    const double mean = sum.s / static_cast<double>(m);
    KahanSum var;
    for (double x : d) {
        const double e = x - mean;
        var.add(e * e);
    }
    const double sd = std::sqrt(var.s / (static_cast<double>(m) - 1.0));

    WEstimate out;
    const double control_mean = (1.0 + f20) * vstar(c_lin, tauhat) / tauhat;
    out.value = mean + beta * control_mean;
    out.stderr_est = sd / std::sqrt(static_cast<double>(m));
    out.evals = static_cast<long>(m);
    return out;
}

} // namespace hetfront

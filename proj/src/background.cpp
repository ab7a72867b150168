#include "hetfront/background.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "hetfront/green.hpp"

namespace hetfront {

namespace {

bool is_identically_zero(const HeterogeneitySpec& f) {
    if (f.kind() == HeterogeneitySpec::Kind::Zero) return true;
    return f.kind() == HeterogeneitySpec::Kind::Constant && f.constant_value() == 0.0;
}

bool is_flat(const HeterogeneitySpec& f) {
    return f.kind() == HeterogeneitySpec::Kind::Zero ||
           f.kind() == HeterogeneitySpec::Kind::Constant;
}

double riccati_rhs(double a, double one_plus_f1) { return one_plus_f1 - a * a; }

// RK4 on a' = 1 + f1 - a^2 from x_from to x_to (sub-stepped), storing nothing.
double riccati_advance(const HeterogeneitySpec& f1, double a, double x_from, double x_to,
                       int substeps) {
    double h = (x_to - x_from) / substeps;
    double x = x_from;
    for (int k = 0; k < substeps; ++k) {
        double k1 = riccati_rhs(a, 1.0 + f1(x));
        double k2 = riccati_rhs(a + 0.5 * h * k1, 1.0 + f1(x + 0.5 * h));
        double k3 = riccati_rhs(a + 0.5 * h * k2, 1.0 + f1(x + 0.5 * h));
        double k4 = riccati_rhs(a + h * k3, 1.0 + f1(x + h));
        a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x += h;
    }
    return a;
}

} // namespace

RiccatiSlopes riccati_slopes(const HeterogeneitySpec& f1, const GridSpec& grid) {
    if (grid.n < 2) throw std::invalid_argument("riccati_slopes: need at least two nodes");
    double fL = 1.0 + f1(grid.x0), fR = 1.0 + f1(grid.x_last());
    if (!(fL > 0.0) || !(fR > 0.0))
        throw std::runtime_error("riccati_slopes: 1 + f1 must be positive at the domain ends");
    int sub = std::max(1, static_cast<int>(std::ceil(grid.dx / 1e-3)));

    RiccatiSlopes out{GridProfile(grid), GridProfile(grid)};
    double a = std::sqrt(fL);
    out.a_u.values[0] = a;
    for (std::size_t i = 1; i < grid.n; ++i) {
        a = riccati_advance(f1, a, grid.x(i - 1), grid.x(i), sub);
        if (!(a > 0.0))
            throw std::runtime_error("riccati_slopes: unstable branch crossed zero");
        out.a_u.values[i] = a;
    }
    a = -std::sqrt(fR);
    out.a_s.values[grid.n - 1] = a;
    for (std::size_t i = grid.n - 1; i-- > 0;) {
        a = riccati_advance(f1, a, grid.x(i + 1), grid.x(i), sub);
        if (!(a < 0.0))
            throw std::runtime_error("riccati_slopes: stable branch crossed zero");
        out.a_s.values[i] = a;
    }
    return out;
}

namespace {

// Thomas solve of the Robin BVP v'' - (1+f1) v = -sign (1+f2).
BackgroundState background_bvp(int sign, const HeterogeneitySpec& f1,
                               const HeterogeneitySpec& f2, const GridSpec& grid) {
    RiccatiSlopes sl = riccati_slopes(f1, grid);
    const std::size_t n = grid.n;
    const double dx = grid.dx, dx2 = dx * dx;
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);

    double au0 = sl.a_u.values[0];
    double asN = sl.a_s.values[n - 1];
    double vbarL = sign * (1.0 + f2(grid.x0)) / (1.0 + f1(grid.x0));
    double vbarR = sign * (1.0 + f2(grid.x_last())) / (1.0 + f1(grid.x_last()));

    for (std::size_t i = 0; i < n; ++i) {
        double x = grid.x(i);
        b[i] = -2.0 / dx2 - (1.0 + f1(x));
        a[i] = c[i] = 1.0 / dx2;
        r[i] = -sign * (1.0 + f2(x));
    }
    // ghost elimination for the Robin rows
    b[0] += -2.0 * dx * au0 / dx2;
    c[0] = 2.0 / dx2;
    r[0] += -2.0 * au0 * vbarL / dx;
    b[n - 1] += 2.0 * dx * asN / dx2;
    a[n - 1] = 2.0 / dx2;
    r[n - 1] += 2.0 * asN * vbarR / dx;

    // Thomas algorithm
    std::vector<double> cp(n), rp(n);
    cp[0] = c[0] / b[0];
    rp[0] = r[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
        double m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        rp[i] = (r[i] - a[i] * rp[i - 1]) / m;
    }
    BackgroundState bg;
    bg.sign = sign;
    bg.v = GridProfile(grid);
    bg.q = GridProfile(grid);
    bg.v.values[n - 1] = rp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        bg.v.values[i] = rp[i] - cp[i] * bg.v.values[i + 1];

    const auto& v = bg.v.values;
    for (std::size_t i = 2; i + 2 < n; ++i)
        bg.q.values[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * dx);
    if (n >= 3) {
        bg.q.values[1] = (v[2] - v[0]) / (2.0 * dx);
        bg.q.values[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * dx);
    }
    bg.q.values[0] = au0 * (v[0] - vbarL);
    bg.q.values[n - 1] = asN * (v[n - 1] - vbarR);
    return bg;
}

struct GreenWindow {
    Interval window;
    TailValues tails;
};

GreenWindow one_plus_window(const HeterogeneitySpec& f2, const GridSpec& grid) {
    double cinf = 1.0 + f2.asymptotic_constant();
    Interval w = f2.support();
    if (is_flat(f2) || !(w.hi > w.lo)) w = {grid.x0, grid.x0};
    return {w, {cinf, cinf}};
}

} // namespace

BackgroundState background_state(int sign, const HeterogeneitySpec& f1,
                                 const HeterogeneitySpec& f2, const GridSpec& grid, double tol) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("background_state: sign must be +1 or -1");
    if (grid.n < 5) throw std::invalid_argument("background_state: grid too small");
    check_positivity(f1, {grid.x0, grid.x_last()}, "f1");
    check_positivity(f2, {grid.x0, grid.x_last()}, "f2");

    if (!is_identically_zero(f1)) return background_bvp(sign, f1, f2, grid);

    auto gw = one_plus_window(f2, grid);
    auto phi = [&f2, sign](double x) { return sign * (1.0 + f2(x)); };
    TailValues t{sign * gw.tails.left, sign * gw.tails.right};
    BackgroundState bg;
    bg.sign = sign;
    bg.v = green_apply(phi, gw.window, t, grid, tol);
    bg.q = green_apply_dx(phi, gw.window, t, grid, tol);
    return bg;
}

double v_sf(double x0, const BackgroundState& bg_minus, const RiccatiSlopes& slopes) {
    if (bg_minus.sign != -1) throw std::invalid_argument("v_sf: needs the (-) background state");
    double q = eval_cubic(bg_minus.q, x0);
    double v = eval_cubic(bg_minus.v, x0);
    double au = eval_cubic(slopes.a_u, x0);
    double as = eval_cubic(slopes.a_s, x0);
    double den = as - au;
    if (std::abs(den) < 1e-12)
        throw std::runtime_error("v_sf: Riccati slopes coincide; dichotomy lost");
    return (2.0 * q - v * (as + au)) / den;
}

namespace {

// Continuous background evaluators for f1 = 0: cached fine profile over the
// heterogeneity support plus exact exponential tails outside it (compactly
// supported integrands decay as e^{-dist} beyond the support).
struct CachedCurve {
    GridProfile prof;
    double far_left, far_right;

    double operator()(double x) const {
        const auto& g = prof.grid;
        if (x < g.x0) return far_left + (prof.values.front() - far_left) * std::exp(x - g.x0);
        if (x > g.x_last())
            return far_right + (prof.values.back() - far_right) * std::exp(g.x_last() - x);
        return eval_cubic(prof, x);
    }
};

} // namespace

std::function<double(double)> make_q_minus(const HeterogeneitySpec& f2, double tol) {
    if (is_flat(f2)) return [](double) { return 0.0; };
    Interval sup = f2.support();
    GridSpec g = GridSpec::over(sup.lo, sup.hi, 0.005);
    // q^- = -d/dx G(1 + f2); the constant far-field part has zero derivative
    double c = f2.asymptotic_constant();
    auto centered = [f2, c](double x) { return f2(x) - c; };
    GridProfile prof = green_apply_dx(centered, sup, {0.0, 0.0}, g, tol);
    for (auto& v : prof.values) v = -v;
    CachedCurve curve{std::move(prof), 0.0, 0.0};
    return [curve = std::move(curve)](double x) { return curve(x); };
}

std::function<double(double)> make_v_minus(const HeterogeneitySpec& f2, double tol) {
    double cinf = 1.0 + f2.asymptotic_constant();
    if (is_flat(f2)) {
        double v = -cinf;
        return [v](double) { return v; };
    }
    Interval sup = f2.support();
    GridSpec g = GridSpec::over(sup.lo, sup.hi, 0.005);
    auto phi = [f2](double x) { return -(1.0 + f2(x)); };
    GridProfile prof = green_apply(phi, sup, {-cinf, -cinf}, g, tol);
    CachedCurve curve{std::move(prof), -cinf, -cinf};
    return [curve = std::move(curve)](double x) { return curve(x); };
}

StationaryFrontSet stationary_front_positions(const ModelParams& p, const HeterogeneitySpec& f1,
                                              const HeterogeneitySpec& f2, Interval search,
                                              double grid_dx) {
    if (!(search.hi > search.lo))
        throw std::invalid_argument("stationary_front_positions: empty search interval");
    StationaryFrontSet out;

    std::function<double(double)> pin; // alpha * v_SF(x) + gamma
    std::function<double(double)> qfun;
    if (is_identically_zero(f1)) {
        auto q = make_q_minus(f2);
        qfun = q;
        pin = [q, p](double x) { return -p.alpha * q(x) + p.gamma; };
    } else {
        GridSpec g = GridSpec::over(search.lo - 10.0, search.hi + 10.0, grid_dx);
        auto bg = std::make_shared<BackgroundState>(background_state(-1, f1, f2, g));
        auto sl = std::make_shared<RiccatiSlopes>(riccati_slopes(f1, g));
        qfun = [bg](double x) { return eval_cubic(bg->q, x); };
        pin = [bg, sl, p](double x) { return p.alpha * v_sf(x, *bg, *sl) + p.gamma; };
    }

    // degenerate pinning: condition holds along the whole window
    int nscan = static_cast<int>(std::ceil(search.length() / grid_dx));
    double max_abs = 0.0;
    std::vector<double> vals(nscan + 1);
    for (int i = 0; i <= nscan; ++i) {
        double x = search.lo + search.length() * i / nscan;
        vals[i] = pin(x);
        max_abs = std::max(max_abs, std::abs(vals[i]));
    }
    if (max_abs < 1e-13) {
        out.degenerate = true;
        return out;
    }
    if (p.alpha == 0.0) return out; // gamma != 0 here: no pinning anywhere

    auto push_root = [&](double x0) {
        for (const auto& f : out.fronts)
            if (std::abs(f.x0 - x0) < 1e-7) return;
        double h = 1e-5;
        double qs = (qfun(x0 + h) - qfun(x0 - h)) / (2.0 * h);
        FrontStability st = FrontStability::Unclassified;
        if (p.alpha < 0.0) st = (qs > 0.0) ? FrontStability::Unstable : FrontStability::Stable;
        out.fronts.push_back({x0, st, qs});
    };

    for (int i = 0; i < nscan; ++i) {
        double xa = search.lo + search.length() * i / nscan;
        double xb = search.lo + search.length() * (i + 1) / nscan;
        double fa = vals[i], fb = vals[i + 1];
        if (fa == 0.0) {
            push_root(xa);
            continue;
        }
        if (i == nscan - 1 && fb == 0.0) push_root(xb);
        if (fa * fb >= 0.0) continue;
        double lo = xa, hi = xb;
        for (int it = 0; it < 100 && hi - lo > 1e-9; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = pin(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0.0) == (fa > 0.0)) {
                lo = mid;
                fa = fm;
            } else {
                hi = mid;
            }
        }
        push_root(0.5 * (lo + hi));
    }
    return out;
}

} // namespace hetfront

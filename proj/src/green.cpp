#include "hetfront/green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetfront {

double eval_linear(const GridProfile& p, double x) {
    const auto& g = p.grid;
    if (g.n == 0) throw std::invalid_argument("eval_linear: empty profile");
    if (g.n == 1 || x <= g.x0) return p.values.front();
    if (x >= g.x_last()) return p.values.back();
    double t = (x - g.x0) / g.dx;
    std::size_t i = std::min(static_cast<std::size_t>(t), g.n - 2);
    double f = t - static_cast<double>(i);
    return p.values[i] * (1.0 - f) + p.values[i + 1] * f;
}

double eval_cubic(const GridProfile& p, double x) {
    const auto& g = p.grid;
    if (g.n == 0) throw std::invalid_argument("eval_cubic: empty profile");
    if (g.n < 4) return eval_linear(p, x);
    if (x <= g.x0) return p.values.front();
    if (x >= g.x_last()) return p.values.back();
    double t = (x - g.x0) / g.dx;
    std::size_t i = std::min(static_cast<std::size_t>(t), g.n - 2);
    // choose stencil i-1..i+2, clamped
    std::size_t j = (i == 0) ? 0 : std::min(i - 1, g.n - 4);
    double u = t - static_cast<double>(j); // in [0,3]
    const double* y = &p.values[j];
    // Lagrange basis on nodes 0,1,2,3
    double l0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
    double l1 = u * (u - 2) * (u - 3) / 2.0;
    double l2 = -u * (u - 1) * (u - 3) / 2.0;
    double l3 = u * (u - 1) * (u - 2) / 6.0;
    return y[0] * l0 + y[1] * l1 + y[2] * l2 + y[3] * l3;
}

namespace {

// adaptive Simpson with kernel-aware splitting already done by the caller
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Sample |phi - tail| just outside the window edges and bound the neglected
// tail mass 1/2 * sup|phi - c| * e^{-dist}. This is an estimate (functions
// are sampled, not bounded), which is the documented contract.
void check_truncation(const std::function<double(double)>& phi, Interval w, TailValues t,
                      double min_dist_left, double min_dist_right, double tol) {
    double devL = 0.0, devR = 0.0;
    for (int k = 0; k < 8; ++k) {
        double off = 1e-9 + k * 1.25;
        devL = std::max(devL, std::abs(phi(w.lo - off) - t.left));
        devR = std::max(devR, std::abs(phi(w.hi + off) - t.right));
    }
    double bound =
        0.5 * devL * std::exp(-min_dist_left) + 0.5 * devR * std::exp(-min_dist_right);
    if (bound > tol)
        throw std::runtime_error(
            "green_apply: truncation-error estimate " + std::to_string(bound) +
            " exceeds tolerance; enlarge the quadrature window or fix the declared tails");
}

// kern = 0: G itself; kern = 1: d/dx G
double apply_at(const std::function<double(double)>& phi, double x, Interval w, TailValues t,
                double tol, int kern) {
    // analytic tails for constant phi
    double res = 0.0;
    if (kern == 0) {
        res += (x >= w.lo) ? 0.5 * t.left * std::exp(w.lo - x)
                           : t.left * (1.0 - 0.5 * std::exp(x - w.lo));
        res += (x <= w.hi) ? 0.5 * t.right * std::exp(x - w.hi)
                           : t.right * (1.0 - 0.5 * std::exp(w.hi - x));
    } else {
        res += -0.5 * t.left * std::exp(-std::abs(x - w.lo));
        res += 0.5 * t.right * std::exp(-std::abs(x - w.hi));
    }
    if (w.hi > w.lo) {
        auto f_left = [&](double xi) { return 0.5 * std::exp(xi - x) * phi(xi); };  // xi < x
        auto f_right = [&](double xi) { return 0.5 * std::exp(x - xi) * phi(xi); }; // xi > x
        double sL = (kern == 0) ? 1.0 : -1.0;
        if (x <= w.lo) {
            res += integrate(f_right, w.lo, w.hi, tol);
        } else if (x >= w.hi) {
            res += sL * integrate(f_left, w.lo, w.hi, tol);
        } else {
            res += sL * integrate(f_left, w.lo, x, tol * 0.5);
            res += integrate(f_right, x, w.hi, tol * 0.5);
        }
    }
    return res;
}

} // namespace

double green_apply_at(const std::function<double(double)>& phi, double x, Interval window,
                      TailValues tails, double tol) {
    check_truncation(phi, window, tails, std::max(0.0, x - window.lo),
                     std::max(0.0, window.hi - x), tol);
    return apply_at(phi, x, window, tails, tol, 0);
}

double green_apply_dx_at(const std::function<double(double)>& phi, double x, Interval window,
                         TailValues tails, double tol) {
    check_truncation(phi, window, tails, std::max(0.0, x - window.lo),
                     std::max(0.0, window.hi - x), tol);
    return apply_at(phi, x, window, tails, tol, 1);
}

namespace {

GridProfile apply_grid(const std::function<double(double)>& phi, Interval w, TailValues t,
                       const GridSpec& grid, double tol, int kern) {
    if (grid.n == 0) throw std::invalid_argument("green_apply: empty grid");
    check_truncation(phi, w, t, std::max(0.0, grid.x0 - w.lo),
                     std::max(0.0, w.hi - grid.x_last()), tol);
    GridProfile out(grid);
    for (std::size_t i = 0; i < grid.n; ++i)
        out.values[i] = apply_at(phi, grid.x(i), w, t, tol, kern);
    return out;
}

} // namespace

GridProfile green_apply(const std::function<double(double)>& phi, Interval window,
                        TailValues tails, const GridSpec& grid, double tol) {
    return apply_grid(phi, window, tails, grid, tol, 0);
}

GridProfile green_apply_dx(const std::function<double(double)>& phi, Interval window,
                           TailValues tails, const GridSpec& grid, double tol) {
    return apply_grid(phi, window, tails, grid, tol, 1);
}

GridProfile green_apply(const GridProfile& phi, const GridSpec& out_grid, double tol) {
    Interval w{phi.grid.x0, phi.grid.x_last()};
    TailValues t{phi.values.front(), phi.values.back()};
    auto f = [&phi](double x) { return eval_cubic(phi, x); };
    return apply_grid(f, w, t, out_grid, tol, 0);
}

} // namespace hetfront

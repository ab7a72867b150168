#include "hetfront/constant_coeff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetfront {

namespace {
constexpr double kSqrt2Over3 = 0.47140452079103168293;
}

double vstar(double c, double tauhat) {
    double ct = c * tauhat;
    return ct / std::sqrt(ct * ct + 4.0);
}

double vstar_dc(double c, double tauhat) {
    double ct = c * tauhat;
    double r = ct * ct + 4.0;
    return 4.0 * tauhat / (r * std::sqrt(r));
}

double speed_relation(double c, const ModelParams& p) {
    return p.gamma + p.alpha * vstar(c, p.tauhat) - kSqrt2Over3 * c;
}

namespace {

double bisect_root(double lo, double hi, double flo, const ModelParams& p) {
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = speed_relation(mid, p);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

SpeedRoots speed_roots(double alpha, double gamma, double tauhat) {
    if (!(tauhat > 0.0)) throw std::invalid_argument("speed_roots: tauhat must be positive");
    ModelParams p{alpha, gamma, tauhat};

    // F' = alpha vstar'(c) - sqrt2/3 vanishes at +-c_crit when alpha is large
    // enough; otherwise F is strictly decreasing.
    std::vector<double> knots;
    double c_big = 3.0 * (std::abs(gamma) + std::abs(alpha) + 1.0) / std::sqrt(2.0) + 1.0;
    knots.push_back(-c_big);
    double thr = 12.0 * alpha * tauhat / std::sqrt(2.0); // (c^2 t^2 + 4)^{3/2} = thr at F'=0
    if (alpha > 0.0) {
        double t23 = std::cbrt(thr * thr);
        if (t23 > 4.0) {
            double c_crit = std::sqrt(t23 - 4.0) / tauhat;
            knots.push_back(-c_crit);
            knots.push_back(c_crit);
        }
    }
    knots.push_back(c_big);

    SpeedRoots out;
    out.regime = SpeedRegime::Single;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double a = knots[i], b = knots[i + 1];
        double fa = speed_relation(a, p), fb = speed_relation(b, p);
        if (fa == 0.0) out.roots.push_back(a);
        if (fa * fb < 0.0) out.roots.push_back(bisect_root(a, b, fa, p));
    }
    if (speed_relation(knots.back(), p) == 0.0) out.roots.push_back(knots.back());
    std::sort(out.roots.begin(), out.roots.end());
    out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                    out.roots.end());

    if (out.roots.size() >= 2) {
        bool close = false;
        for (std::size_t i = 0; i + 1 < out.roots.size(); ++i)
            if (out.roots[i + 1] - out.roots[i] < 1e-7) close = true;
        out.regime = close ? SpeedRegime::Critical : SpeedRegime::Triple;
    }
    return out;
}

BifurcationPoint bifurcation_point(double gamma, double tauhat) {
    if (!(tauhat > 0.0)) throw std::invalid_argument("bifurcation_point: tauhat must be positive");
    if (gamma == 0.0)
        throw std::invalid_argument("bifurcation_point: gamma = 0 is degenerate");
    if (gamma < 0.0)
        throw std::invalid_argument("bifurcation_point: formulas require gamma > 0");
    double c_bp = -std::cbrt(12.0 * gamma / (std::sqrt(2.0) * tauhat * tauhat));
    double ct = c_bp * tauhat;
    double alpha_bp = (kSqrt2Over3 * c_bp - gamma) * std::sqrt(4.0 + ct * ct) / ct;
    return {c_bp, alpha_bp};
}

} // namespace hetfront

#include "hetfront/heterogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hetfront {

namespace {

// Effective support of one Gaussian term: beyond it the term is below
// ~1e-18 in magnitude and clamping to the offset is lossless in double
// precision relative to the quadrature tolerances used downstream.
Interval term_support(const HeterogeneitySpec::GaussianTerm& t) {
    double a = std::abs(t.amplitude);
    if (a == 0.0) return {t.center, t.center};
    double r2 = (std::log(a) + 44.0) / t.width; // |A| e^{-w r^2} = |A| e^{-44-log|A|} ~ 1e-19
    double r = r2 > 0.0 ? std::sqrt(r2) : 0.0;
    return {t.center - r, t.center + r};
}

double fig1_f1(double x) {
    double d = x - 150.0;
    return 4.0 + std::exp(-d * d);
}

double fig1_f2(double x) {
    auto sq = [](double v) { return v * v; };
    double osc = std::exp(-sq(x - 50.0)) - std::exp(-sq(0.1 * (x - 80.0))) +
                 std::exp(-sq(0.05 * (x - 120.0))) - std::exp(-sq(0.05 * (x - 200.0))) +
                 2.0 * std::exp(-sq(0.05 * (x - 240.0))) * std::cos(1.5 * x) +
                 0.5 * std::cos(sq(0.04 * x));
    return 3.0 + 0.8 * osc;
}

} // namespace

HeterogeneitySpec::HeterogeneitySpec() = default;

HeterogeneitySpec HeterogeneitySpec::zero() { return HeterogeneitySpec(); }

HeterogeneitySpec HeterogeneitySpec::constant(double value) {
    HeterogeneitySpec s;
    s.kind_ = Kind::Constant;
    s.constant_ = value;
    s.asymptotic_ = value;
    s.support_ = {0.0, 0.0};
    return s;
}

HeterogeneitySpec HeterogeneitySpec::gaussian_sum(double offset, std::vector<GaussianTerm> terms,
                                                  std::optional<Interval> support) {
    for (const auto& t : terms)
        if (!(t.width > 0.0))
            throw std::invalid_argument("HeterogeneitySpec: gaussian width must be positive");
    HeterogeneitySpec s;
    s.kind_ = Kind::GaussianSum;
    s.constant_ = offset;
    s.terms_ = std::move(terms);
    s.asymptotic_ = offset;
    if (support) {
        s.support_ = *support;
    } else if (!s.terms_.empty()) {
        Interval u = term_support(s.terms_.front());
        for (const auto& t : s.terms_) {
            Interval ts = term_support(t);
            u.lo = std::min(u.lo, ts.lo);
            u.hi = std::max(u.hi, ts.hi);
        }
        s.support_ = u;
    }
    return s;
}

HeterogeneitySpec HeterogeneitySpec::piecewise_cubic(std::vector<double> x, std::vector<double> y,
                                                     std::vector<double> d, double outside) {
    if (x.size() < 2 || x.size() != y.size() || x.size() != d.size())
        throw std::invalid_argument("HeterogeneitySpec: knot arrays must match, need >= 2 knots");
    for (size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("HeterogeneitySpec: knots must be strictly increasing");
    HeterogeneitySpec s;
    s.kind_ = Kind::PiecewiseCubic;
    s.kx_ = std::move(x);
    s.ky_ = std::move(y);
    s.kd_ = std::move(d);
    s.constant_ = outside;
    s.asymptotic_ = outside;
    s.support_ = {s.kx_.front(), s.kx_.back()};
    return s;
}

HeterogeneitySpec HeterogeneitySpec::make_makima(std::vector<double> x, std::vector<double> y,
                                                 double outside) {
    if (x.size() < 2 || x.size() != y.size())
        throw std::invalid_argument("HeterogeneitySpec: knot arrays must match, need >= 2 knots");
    const size_t n = x.size();
    // secants with two ghost values on each side (linear extrapolation)
    std::vector<double> del(n + 3);
    for (size_t i = 0; i + 1 < n; ++i) del[i + 2] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    del[1] = 2.0 * del[2] - del[3];
    del[0] = 2.0 * del[1] - del[2];
    del[n + 1] = 2.0 * del[n] - del[n - 1];
    del[n + 2] = 2.0 * del[n + 1] - del[n];
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) {
        // node i sits between secants del[i+1] (left) and del[i+2] (right)
        double dm2 = del[i], dm1 = del[i + 1], dp0 = del[i + 2], dp1 = del[i + 3];
        double w1 = std::abs(dp1 - dp0) + std::abs(dp1 + dp0) / 2.0;
        double w2 = std::abs(dm1 - dm2) + std::abs(dm1 + dm2) / 2.0;
        d[i] = (w1 + w2 == 0.0) ? 0.0 : (w1 * dm1 + w2 * dp0) / (w1 + w2);
    }
    return piecewise_cubic(std::move(x), std::move(y), std::move(d), outside);
}

HeterogeneitySpec HeterogeneitySpec::named(const std::string& id) {
    HeterogeneitySpec s;
    s.kind_ = Kind::Named;
    s.name_ = id;
    if (id == "fig1.f1") {
        s.asymptotic_ = 4.0;
        s.support_ = {150.0 - 7.0, 150.0 + 7.0};
    } else if (id == "fig1.f2") {
        // the slowly-modulated cosine never settles; declare a wide support
        // and the cosine mean as the far-field constant (the profile is only
        // used on bounded domains well inside this window)
        s.asymptotic_ = 3.0;
        s.support_ = {-2000.0, 2000.0};
    } else {
        throw std::invalid_argument("HeterogeneitySpec: unknown named profile '" + id + "'");
    }
    return s;
}

double HeterogeneitySpec::eval_inside(double x) const {
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return constant_;
    case Kind::GaussianSum: {
        double v = constant_;
        for (const auto& t : terms_) {
            double d = x - t.center;
            v += t.amplitude * std::exp(-t.width * d * d);
        }
        return v;
    }
    case Kind::PiecewiseCubic: {
        auto it = std::upper_bound(kx_.begin(), kx_.end(), x);
        size_t i = (it == kx_.begin()) ? 0 : static_cast<size_t>(it - kx_.begin()) - 1;
        if (i >= kx_.size() - 1) i = kx_.size() - 2;
        double h = kx_[i + 1] - kx_[i];
        double t = (x - kx_[i]) / h;
        double t2 = t * t, t3 = t2 * t;
        double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * ky_[i] + h10 * h * kd_[i] + h01 * ky_[i + 1] + h11 * h * kd_[i + 1];
    }
    case Kind::Named:
        if (name_ == "fig1.f1") return fig1_f1(x);
        return fig1_f2(x);
    }
    return 0.0;
}

double HeterogeneitySpec::operator()(double x) const {
    if (kind_ == Kind::Zero || kind_ == Kind::Constant) return constant_;
    if (x < support_.lo || x > support_.hi) return asymptotic_;
    return eval_inside(x);
}

double HeterogeneitySpec::min_one_plus(Interval window, int samples) const {
    double m = 1.0 + asymptotic_;
    for (int i = 0; i <= samples; ++i) {
        double x = window.lo + (window.hi - window.lo) * i / samples;
        m = std::min(m, 1.0 + (*this)(x));
    }
    return m;
}

double check_positivity(const HeterogeneitySpec& f, Interval window, const char* label) {
    double m = f.min_one_plus(window);
    if (m <= 0.0)
        std::fprintf(stderr,
                     "warning: inf(1 + %s) = %.6g <= 0 on [%g, %g]; "
                     "results outside the validated regime\n",
                     label, m, window.lo, window.hi);
    return m;
}

} // namespace hetfront

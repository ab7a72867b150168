#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hetfront/params.hpp"

namespace hetfront {

/// Spatial coefficient profile f(x) entering the model as 1 + f(x).
///
/// Supported shapes:
///   - zero / constant
///   - offset + sum of Gaussians  A_i * exp(-w_i (x - c_i)^2)
///   - piecewise cubic Hermite on strictly increasing knots (Akima-type
///     "makima" slopes when built through make_makima), constant outside
///   - named closed-form profiles used by the bundled experiments
///
/// Every spec declares an asymptotic constant and a support interval;
/// evaluation outside the support returns the asymptotic constant exactly,
/// which the Green-operator quadrature exploits for analytic tails.
class HeterogeneitySpec {
public:
    enum class Kind { Zero, Constant, GaussianSum, PiecewiseCubic, Named };

    struct GaussianTerm {
        double amplitude;
        double center;
        double width; // exp(-width * (x-center)^2), width > 0
    };

    HeterogeneitySpec(); // zero profile

    static HeterogeneitySpec zero();
    static HeterogeneitySpec constant(double value);
    static HeterogeneitySpec gaussian_sum(double offset, std::vector<GaussianTerm> terms,
                                          std::optional<Interval> support = std::nullopt);
    /// Piecewise cubic through (x_i, y_i) with prescribed slopes d_i.
    /// Outside [x_0, x_n] the value is `outside` exactly. Throws on
    /// unordered or duplicate knots.
    static HeterogeneitySpec piecewise_cubic(std::vector<double> x, std::vector<double> y,
                                             std::vector<double> d, double outside);
    /// Same, with slopes from the modified-Akima (makima) weighting.
    static HeterogeneitySpec make_makima(std::vector<double> x, std::vector<double> y,
                                         double outside);
    /// Closed-form profiles referenced by name ("fig1.f1", "fig1.f2").
    static HeterogeneitySpec named(const std::string& id);

    double operator()(double x) const;

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double asymptotic_constant() const { return asymptotic_; }
    Interval support() const { return support_; }
    bool is_zero() const { return kind_ == Kind::Zero; }

    /// Smallest value of 1 + f over a sampled grid; used for the
    /// positivity advisory (inf(1+f) <= 0 yields a warning, not an error).
    double min_one_plus(Interval window, int samples = 4096) const;

    // introspection for serialization
    double constant_value() const { return constant_; }
    double gaussian_offset() const { return constant_; }
    const std::vector<GaussianTerm>& gaussian_terms() const { return terms_; }
    const std::vector<double>& knots_x() const { return kx_; }
    const std::vector<double>& knots_y() const { return ky_; }
    const std::vector<double>& knot_slopes() const { return kd_; }

private:
    Kind kind_ = Kind::Zero;
    std::string name_;
    double constant_ = 0.0; // constant value / gaussian offset / outside value
    std::vector<GaussianTerm> terms_;
    std::vector<double> kx_, ky_, kd_;
    double asymptotic_ = 0.0;
    Interval support_{0.0, 0.0};

    double eval_inside(double x) const;
};

/// Warn (stderr) when inf(1+f) <= 0 on the window. Returns the minimum.
double check_positivity(const HeterogeneitySpec& f, Interval window, const char* label);

} // namespace hetfront

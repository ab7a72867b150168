#pragma once

#include <functional>
#include <vector>

#include "hetfront/grid.hpp"
#include "hetfront/heterogeneity.hpp"
#include "hetfront/params.hpp"

namespace hetfront {

/// Steady state of the V-equation with U pinned at a constant +-1:
///   v'' - (1 + f1) v = -(sign)(1 + f2),  v bounded.
/// For f1 = 0 this is v = sign * G(1 + f2) with q = dv/dx evaluated by the
/// differentiated Green quadrature; for f1 != 0 it is a second-order finite
/// difference boundary-value solve with Robin conditions built from the
/// Riccati slopes at the domain ends.
struct BackgroundState {
    int sign = -1; // +1 or -1
    GridProfile v;
    GridProfile q;
};

/// Bounded solutions of a' = 1 + f1 - a^2: a_u > 0 integrated forward from
/// sqrt(1 + f1(x_min)), a_s < 0 backward from -sqrt(1 + f1(x_max)). Throws
/// when 1 + f1 <= 0 at the seeds or when a branch crosses zero (loss of the
/// exponential dichotomy).
struct RiccatiSlopes {
    GridProfile a_u;
    GridProfile a_s;
};

RiccatiSlopes riccati_slopes(const HeterogeneitySpec& f1, const GridSpec& grid);

BackgroundState background_state(int sign, const HeterogeneitySpec& f1,
                                 const HeterogeneitySpec& f2, const GridSpec& grid,
                                 double tol = 1e-12);

/// Interface value of the stationary-front V-profile at position x0:
///   v_SF(x0) = [2 q^-(x0) - v^-(x0) (a_s + a_u)] / (a_s - a_u),
/// reducing to -q^-(x0) when f1 = 0.
double v_sf(double x0, const BackgroundState& bg_minus, const RiccatiSlopes& slopes);

enum class FrontStability { Stable, Unstable, Unclassified };

struct StationaryFront {
    double x0;
    FrontStability stability;
    double q_slope; // d/dx q^-(x0), the classification datum
};

struct StationaryFrontSet {
    std::vector<StationaryFront> fronts;
    bool degenerate = false; // pinning condition holds identically
};

/// Positions where a stationary front can lock: alpha v_SF(x0) + gamma = 0,
/// i.e. q^-(x0) = gamma/alpha when f1 = 0. Grid-bracketed roots refined by
/// bisection to |dx| < 1e-8. Stability is classified by the sign of
/// (q^-)'(x0) only when alpha < 0 (positive slope -> unstable, negative ->
/// stable); otherwise fronts are reported unclassified.
StationaryFrontSet stationary_front_positions(const ModelParams& p, const HeterogeneitySpec& f1,
                                              const HeterogeneitySpec& f2, Interval search,
                                              double grid_dx = 0.01);

/// Continuous q^-(x) evaluator for f1 = 0 (differentiated Green quadrature
/// of f2; the constant part contributes nothing).
std::function<double(double)> make_q_minus(const HeterogeneitySpec& f2, double tol = 1e-11);

/// Continuous v^-(x) = -G(1 + f2)(x) evaluator for f1 = 0.
std::function<double(double)> make_v_minus(const HeterogeneitySpec& f2, double tol = 1e-11);

} // namespace hetfront

#pragma once

#include <vector>

#include "hetfront/params.hpp"

namespace hetfront {

/// Interface value of the co-moving V-profile for a front travelling at
/// speed c with constant coefficients: v*(c) = c tauhat / sqrt(c^2 tauhat^2 + 4).
double vstar(double c, double tauhat);

/// d v*/dc = 4 tauhat / (c^2 tauhat^2 + 4)^{3/2}.
double vstar_dc(double c, double tauhat);

/// Existence relation for constant-coefficient travelling fronts:
/// F(c) = gamma + alpha v*(c) - (sqrt(2)/3) c = 0.
double speed_relation(double c, const ModelParams& p);

enum class SpeedRegime { Single, Triple, Critical };

struct SpeedRoots {
    std::vector<double> roots; // ascending
    SpeedRegime regime;
};

/// All real roots of the existence relation, found on the monotonicity
/// intervals of F and polished to ~1e-12. Roots closer than 1e-7 mark the
/// near-fold regime and are reported as Critical.
SpeedRoots speed_roots(double alpha, double gamma, double tauhat);

struct BifurcationPoint {
    double c_bp;
    double alpha_bp;
};

/// Fold of the speed relation at fixed gamma > 0 (throws for gamma <= 0;
/// gamma = 0 is degenerate): simultaneous root of F and F'.
BifurcationPoint bifurcation_point(double gamma, double tauhat);

} // namespace hetfront

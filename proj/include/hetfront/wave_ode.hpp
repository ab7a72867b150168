#pragma once

#include "hetfront/grid.hpp"
#include "hetfront/params.hpp"
#include "hetfront/pde.hpp"

namespace hetfront {

/// Travelling-wave analysis in the fast co-moving frame xi = (x - c s)/eps
/// for constant coefficients (f1 = f2 = 0):
///
///   u' = p
///   p' = -u + u^3 + eps (alpha v + gamma) - eps c p
///   v' = eps q
///   q' = eps (v - u - tauhat c q)
///
/// Background fixed points (u*, 0, u*, 0) with u* - u*^3 = eps (alpha u* + gamma)
/// are saddles with a fast pair ~ +-sqrt(2) and a slow pair ~ O(eps). A front
/// is a heteroclinic from the (-) point's 2-D unstable manifold to the (+)
/// point's 2-D stable manifold; shooting measures the failure of the two
/// manifolds to meet across the section u = 0 and bisects it over c.
struct WaveState {
    double u = 0.0, p = 0.0, v = 0.0, q = 0.0;
};

WaveState comoving_rhs(const WaveState& w, double c, double eps, const ModelParams& p);

struct ShootNumerics {
    double rtol = 1e-12;
    double atol = 1e-14;
    double sigma = 1e-2;      // fast-mode kick; must dominate the O(eps^3)
                              // slaving error or the orbit can peel off the
                              // wrong side of the u branch
    double frac_a = 0.7;      // slow-line probe positions as fractions of the
    double frac_b = 1.3;      // predicted fixed-point-to-front v gap
    double aim_lo = 0.98;     // second-pass landing targets as fractions of the
    double aim_hi = 1.02;     // measured (v, q) crossing
    double box_u = 1.5, box_p = 1.5, box_v = 3.0, box_q = 3.0;
    double xi_max = 400.0;
};

struct ShootDiag {
    WaveState mu_a, mu_b; // section hits of the (-) unstable-manifold probes
    WaveState ms_a, ms_b; // section hits of the (+) stable-manifold probes
    double v_hat = 0.0, q_hat = 0.0;      // secant-line intersection
    double p_minus = 0.0, p_plus = 0.0;   // interpolated p on each side there
};

/// Signed connection defect at speed c. Two unstable-manifold orbits from the
/// (-) point and two stable-manifold orbits into the (+) point (seeded on the
/// slow manifold and kicked along the frozen fast eigenvector) are run to the
/// section u = 0; each pair spans its manifold's trace as a secant chord in
/// (v, q, p). The mismatch is the signed closest-approach gap between the two
/// chords after re-aiming each pair at the measured crossing, scaled by
/// 1/(2 sqrt(2) eps) so it limits on the algebraic speed relation F(c) as
/// eps -> 0. Orbits leaving the trapping box throw.
double shoot_mismatch(double c, double eps, const ModelParams& p,
                      const ShootNumerics& nm = {}, ShootDiag* diag = nullptr);

/// Bisection of shoot_mismatch over c until the bracket is narrower than
/// tol_c. root_index ('m', '0' or 'p') picks the constant-coefficient root
/// used to seed the bracket when `bracket` is empty (lo >= hi); an explicit
/// bracket must straddle a sign change.
Interval find_speed(double eps, const ModelParams& p, char root_index, Interval bracket,
                    double tol_c = 1e-4, const ShootNumerics& nm = {});

/// Direction-reversal initial condition: the (-)-side orbit at speed c is
/// sampled onto the grid left of z0, the (+)-side orbit right of z0, joined
/// at the section; beyond the computed windows the profiles continue with
/// the slow eigen-rates into the fixed-point values.
PdeState build_concatenated_ic(double c, double eps, const ModelParams& p, const GridSpec& grid,
                               double z0 = 0.0, const ShootNumerics& nm = {});

} // namespace hetfront

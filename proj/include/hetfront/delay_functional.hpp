#pragma once

#include <cstdint>
#include <vector>

#include "hetfront/heterogeneity.hpp"
#include "hetfront/history.hpp"
#include "hetfront/params.hpp"
#include "hetfront/rng.hpp"

namespace hetfront {

/// Memory functional of the front path,
///
///   W(s) = 1/(2 sqrt(pi tauhat)) int_0^inf R^{-1/2} e^{-R/tauhat}
///            z'(s-R) (1 + f2(z(s-R))) I(R) dR,
///   I(R) = int_{-inf}^0 e^x [e^{-tauhat (x-D)^2/(4R)} + e^{-tauhat (x+D)^2/(4R)}] dx,
///   D    = z(s) - z(s-R),
///
/// so that tauhat * W equals v*(slope) on a straight-line path with f2 = 0.
/// Evaluated either by deterministic quadrature (inner integral in closed
/// form via erfcx, outer integral split at the breakpoints of z') or by the
/// probabilistic representation (X ~ Exp(1), R Levy-distributed given X).
///
/// Histories are evaluated through the extension z[a]: past the last
/// breakpoint the path continues with slope z'(s_N) + a.
struct WEstimate {
    double value = 0.0;
    double stderr_est = 0.0;  // 0 for quadrature
    double trunc_bound = 0.0; // quadrature tail-truncation bound
    long evals = 0;           // integrand evaluations / samples
};

/// Common random numbers for one stepper step: the same block is reused for
/// every trial slope so the error function is smooth in a.
struct McBlock {
    std::vector<double> X; // Exp(1)
    std::vector<double> Z; // N(0,1)

    static McBlock draw(std::size_t m, Rng& rng);
};

WEstimate delay_w_quadrature(const FrontHistory& h, double a, double s, const ModelParams& p,
                             const HeterogeneitySpec& f2, double r_max_factor = 40.0,
                             double tol = 1e-10);

/// Monte Carlo estimator with a control variate: the same draws evaluated on
/// the straight-line path through z(s) with the current slope and frozen
/// f2(z(s)), whose expectation (1 + f2) v*(slope) / tauhat is known exactly.
/// beta in [0,1] blends the control (0 disables it). Kahan-compensated,
/// index-ordered summation keeps results bit-reproducible for a fixed block.
WEstimate delay_w_mc(const FrontHistory& h, double a, double s, const ModelParams& p,
                     const HeterogeneitySpec& f2, const McBlock& block, double beta = 0.9);

} // namespace hetfront

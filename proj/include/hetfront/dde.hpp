#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hetfront/delay_functional.hpp"
#include "hetfront/heterogeneity.hpp"
#include "hetfront/history.hpp"
#include "hetfront/params.hpp"
#include "hetfront/trajectory.hpp"

namespace hetfront {

/// Reduced front dynamics for f1 = 0: at each step the new slope is chosen so
/// that the speed law
///
///   sqrt(2)/3 (z'(s_N) + a) = alpha (tauhat W[z[a]](s) - q^-(z[a](s))) + gamma
///
/// holds at s = s_N + ds, where W is the memory functional and q^- the
/// gradient of the uniform minus-state (delay_functional.hpp,
/// background.hpp). The defect of that relation is the error functional
/// below; the step solves error = 0 for the slope increment a.
///
/// Two ways to advance:
///  * Mc/Quadrature evaluate W directly on the stored path (Algorithm 1);
///    with Mc, one common block of draws per step keeps the error smooth in a.
///  * Cosim replaces the memory integral by an auxiliary field evolved with
///    Crank-Nicolson substeps,
///      tauhat dV/ds = V_xx - V + (1 + f2(x)) sgn(x - z(s)),
///    the sign source smeared over the cell containing z (weight
///    2 frac - 1), and reads the speed law from V(z(s), s) (Algorithm 2).
struct DdeConfig {
    ModelParams params;
    HeterogeneitySpec f2 = HeterogeneitySpec::zero();
    double ds = 1.0 / 30.0;
    double a_max = 5.0; // slope-increment bracket half-width

    enum class Method { Mc, Quadrature, Cosim };
    Method method = Method::Mc;

    // Algorithm 1
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 12345;
    double control_beta = 0.9;
    double r_max_factor = 40.0;
    double quad_tol = 1e-10;

    // Algorithm 2
    Interval cosim_domain{-30.0, 30.0};
    double cosim_dx = 0.02;
    int cosim_substeps = 2;
    double cosim_preroll = -1.0; // < 0: 20 tauhat
};

struct DdeDiagnostics {
    double max_abs_residual = 0.0; // |error| at accepted roots
    double max_stderr = 0.0;       // MC stderr of W at accepted roots
    long error_evals = 0;
    int max_root_iters = 0;
    bool bracket_expanded = false;
    double final_front_v = 0.0; // Cosim: V at the front at the final time
};

/// Per-step accounting: the committed memory-term value (tauhat W for
/// Algorithm 1, the co-simulated V at the front for Algorithm 2), its MC
/// standard error, the accepted slope increment and the root-solve count.
struct DdeStepRecord {
    double s;
    double w;
    double w_stderr;
    double a_star;
    int iters;
};

struct DdeResult {
    Trajectory traj;
    bool ok = false;
    std::string message;
    DdeDiagnostics diag;
    std::vector<DdeStepRecord> step_records;
};

/// Speed-law defect for trial slope increment a at time s > h.last_time().
/// q_minus must evaluate the minus-state gradient (make_q_minus(cfg.f2)).
/// For Method::Mc a block of draws is required; stderr_out, when given,
/// receives the MC standard error of the W estimate (0 for quadrature) and
/// w_out the memory term tauhat * W itself.
double dde_error(const DdeConfig& cfg, const std::function<double(double)>& q_minus,
                 const FrontHistory& h, double a, double s, const McBlock* block = nullptr,
                 double* stderr_out = nullptr, double* w_out = nullptr);

/// March the front from (s0, z0) with constant-speed prehistory of slope c0
/// until s_end. On a root-bracketing failure the partial trajectory is
/// returned with ok = false.
DdeResult run_dde_front(const DdeConfig& cfg, double s0, double z0, double c0, double s_end);

} // namespace hetfront

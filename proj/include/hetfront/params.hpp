#pragma once

#include <stdexcept>

namespace hetfront {

// Model parameters of the slow-fast reaction-diffusion system in the
// fast-reaction scaling:
//
//   eps^2 dU/ds = eps^2 U_xx + U - U^3 - eps (alpha V + gamma)
//   tauhat dV/ds = V_xx - (1 + f1(x)) V + (1 + f2(x)) U
//
// The interface width eps is not part of this struct; it is passed
// explicitly to the solvers that depend on it (the delay-equation model
// is the eps -> 0 object and never sees it).
struct ModelParams {
    double alpha = 0.0;
    double gamma = 0.0;
    double tauhat = 1.0;

    void validate() const {
        if (!(tauhat > 0.0))
            throw std::invalid_argument("ModelParams: tauhat must be positive");
    }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

} // namespace hetfront

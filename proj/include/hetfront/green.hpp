#pragma once

#include <functional>

#include "hetfront/grid.hpp"
#include "hetfront/params.hpp"

namespace hetfront {

/// Far-field constants of the integrand outside its quadrature window.
struct TailValues {
    double left = 0.0;
    double right = 0.0;
};

/// G(phi)(x) = int 1/2 exp(-|x - xi|) phi(xi) d xi, the solution operator of
/// v'' - v = -phi with decaying-against-constant behaviour: G maps the
/// constant 1 to 1. phi is integrated by adaptive Simpson on `window` and
/// analytically outside it, where it is taken equal to `tails`. Throws when
/// the sampled behaviour of phi beyond the window makes the truncation-error
/// bound exceed the tolerance.
double green_apply_at(const std::function<double(double)>& phi, double x, Interval window,
                      TailValues tails, double tol = 1e-12);

/// d/dx G(phi)(x) = int 1/2 sign(xi - x) exp(-|x - xi|) phi(xi) d xi.
double green_apply_dx_at(const std::function<double(double)>& phi, double x, Interval window,
                         TailValues tails, double tol = 1e-12);

GridProfile green_apply(const std::function<double(double)>& phi, Interval window,
                        TailValues tails, const GridSpec& grid, double tol = 1e-12);

GridProfile green_apply_dx(const std::function<double(double)>& phi, Interval window,
                           TailValues tails, const GridSpec& grid, double tol = 1e-12);

/// Grid-profile input: the integrand is the cubic interpolant of `phi`,
/// constant (end values) outside its grid.
GridProfile green_apply(const GridProfile& phi, const GridSpec& out_grid, double tol = 1e-12);

} // namespace hetfront

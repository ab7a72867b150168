#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hetfront {

/// Uniform grid x_i = x0 + i dx, i = 0..n-1.
struct GridSpec {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_last() const { return x(n - 1); }

    static GridSpec over(double a, double b, double max_dx) {
        if (!(b > a) || !(max_dx > 0)) throw std::invalid_argument("GridSpec::over: bad interval");
        std::size_t cells = static_cast<std::size_t>((b - a) / max_dx) + 1;
        return {a, (b - a) / static_cast<double>(cells), cells + 1};
    }
};

struct GridProfile {
    GridSpec grid;
    std::vector<double> values;

    GridProfile() = default;
    GridProfile(GridSpec g) : grid(g), values(g.n, 0.0) {}
    GridProfile(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.n)
            throw std::invalid_argument("GridProfile: size mismatch");
    }
};

/// Cubic (4-point Lagrange) interpolation of a grid profile; clamps to the
/// end values outside the grid.
double eval_cubic(const GridProfile& p, double x);

/// Linear interpolation variant.
double eval_linear(const GridProfile& p, double x);

} // namespace hetfront

#include "hetfront/special.hpp"

#include <cmath>
#include <stdexcept>

namespace hetfront {

double erfcx(double x) {
    if (x < 0.0) throw std::domain_error("erfcx: negative argument not supported");
    if (x < 12.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic series: erfcx(x) ~ 1/(x sqrt(pi)) sum_k (-1)^k (2k-1)!! / (2x^2)^k
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) * inv2x2;
        sum += term;
    }
    return sum / (x * 1.7724538509055160273);
}

} // namespace hetfront

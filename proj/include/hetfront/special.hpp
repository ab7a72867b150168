#pragma once

namespace hetfront {

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0,
/// accurate into the range where erfc itself underflows.
double erfcx(double x);

} // namespace hetfront

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace hetfront {

/// Deterministic random stream: mt19937_64 with explicit output transforms
/// so that results do not depend on standard-library distribution
/// implementations. Identical seeds reproduce identical draws bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// uniform in (0, 1]  (never 0, so -log is finite)
    double uniform_pos() {
        return (static_cast<double>(eng_() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

    /// uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double exponential() { return -std::log(uniform_pos()); }

    /// standard normal via Marsaglia polar (one value per call; the spare is
    /// cached, so draw order is still deterministic)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// One-sided stable draw R ~ Levy(0, c), density sqrt(c/(2 pi)) r^{-3/2}
/// e^{-c/(2r)} and CDF erfc(sqrt(c/(2r))), realised as c / Z^2 with Z
/// standard normal. c = 0 degenerates to 0. Samples for scale c are exactly
/// c times the samples for scale 1 under the same stream.
inline double sample_levy(double c, Rng& rng) {
    if (c < 0.0) throw std::invalid_argument("sample_levy: negative scale");
    double z;
    do {
        z = rng.normal();
    } while (z == 0.0);
    return c / (z * z);
}

} // namespace hetfront

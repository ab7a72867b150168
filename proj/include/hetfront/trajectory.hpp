#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hetfront {

struct TrajectorySample {
    double s;
    double z;
    double dz_ds;
};

/// Front path samples with strictly increasing times plus a free-form
/// metadata block (full config echo, solver statistics, seed, wall time).
struct Trajectory {
    std::vector<TrajectorySample> samples;
    nlohmann::json meta;

    void validate() const;

    double s_front() const { return samples.front().s; }
    double s_back() const { return samples.back().s; }

    /// Linear interpolation of z(s); clamps outside the sampled range.
    double z_at(double s) const;
    /// Linear interpolation of dz_ds(s).
    double dz_at(double s) const;
    /// First time the path crosses level z (linear interpolation); throws
    /// std::runtime_error when it never does.
    double first_crossing(double z) const;

    /// Shift all sample times by ds (used for anchor alignment).
    Trajectory shifted(double ds) const;
};

/// Central-difference velocity estimate smoothed by a centered moving
/// average over `window` samples (odd; truncated near the ends). Returns a
/// copy with dz_ds replaced.
Trajectory estimate_velocity(const Trajectory& traj, int window = 5);

} // namespace hetfront

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hetfront/config.hpp"
#include "hetfront/trajectory.hpp"

namespace hetfront {

struct Anchor {
    double z = 0.0;
    double s = 0.0;
};

/// Shift a path in time so its first crossing of anchor.z lands at anchor.s
/// (time-translation symmetry). Throws when the level is never crossed.
Trajectory time_align(const Trajectory& t, Anchor anchor);

struct TrajectoryMetrics {
    double sup_z = 0.0, rms_z = 0.0;         // position against time
    double sup_v = 0.0, rms_v = 0.0;         // velocity against time
    double sup_v_of_z = 0.0, rms_v_of_z = 0.0; // velocity against position
    Interval window{0.0, 0.0};               // s-overlap actually compared
    Interval z_range{0.0, 0.0};              // z-overlap for the v(z) metrics
};

/// Sup and root-mean-square differences over the overlap of the sampled
/// windows intersected with s_window, linear resampling at npts points.
/// Velocity against position samples each level of a uniform grid over the
/// common traversed range at its first crossing; when the common range is
/// empty those entries stay zero. Throws on an empty time overlap.
TrajectoryMetrics compare_trajectories(const Trajectory& a, const Trajectory& b,
                                       Interval s_window = {-1e300, 1e300},
                                       std::size_t npts = 2001);

/// Confirmed changes of the direction of travel: the velocity must leave the
/// band |v| >= band on one side and re-enter it on the other; the recorded
/// sample interpolates the intervening v = 0 crossing. dz_ds carries the
/// pre-reversal sign.
std::vector<TrajectorySample> find_reversals(const Trajectory& traj, double band);

/// Largest drop of z below its running maximum (0 for monotone growth).
double max_drawdown(const Trajectory& traj);

struct ExperimentReport {
    std::string id;
    std::vector<std::pair<std::string, std::string>> runs; // label -> file in out dir
    std::map<std::string, double> metrics;
    std::map<std::string, bool> pass_flags;
    nlohmann::json to_json() const;
    bool all_passed() const;
};

/// Emit <dir>/report.json; throws when a referenced run file is missing.
void write_report(const ExperimentReport& rep, const std::string& dir);

/// Run one bundled experiment into out_dir: the delay model (where the
/// example has one), the full system at each eps, trajectory / velocity /
/// profile CSVs with JSON metadata sidecars, comparison metrics and
/// threshold flags. eps_list empty selects the example default; seed 0
/// keeps the preset seed.
ExperimentReport run_example(const std::string& id, std::vector<double> eps_list,
                             const std::string& out_dir, std::uint64_t seed = 0);

/// Travelling-profile initial state at speed c for cfg's grid, with the
/// far-field V corrected for cfg.f2 (quasi-static response to the settled
/// tails). cfg.f1 must be zero.
PdeState concatenated_ic(const PdeConfig& cfg, double c, double z0);

} // namespace hetfront

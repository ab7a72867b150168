#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hetfront/pde.hpp"
#include "hetfront/trajectory.hpp"

namespace hetfront {

/// File formats used by the experiment harness. All numbers are written
/// with 15 significant digits ("%.15g"), so identical in-memory results
/// produce byte-identical files.

/// Front path, header "s,z,dz_ds".
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Inverse of write_trajectory_csv (meta is left empty). Throws on a
/// missing file, bad header or malformed row.
Trajectory read_trajectory_csv(const std::string& path);

/// Solution profiles at one time, header "x,U,V".
void write_profile_csv(const std::string& path, const PdeState& state);

/// Long-format field history, header "s,x,V", one row per (snapshot,
/// node) pair; x_thin > 1 keeps every x_thin-th node.
void write_field_csv(const std::string& path, const std::vector<PdeState>& snapshots,
                     std::size_t x_thin = 1);

/// Velocity against position, header "z,dz_ds": dz_ds sampled at the first
/// crossing of each level of a uniform grid over the traversed range.
void write_velocity_position_csv(const std::string& path, const Trajectory& traj,
                                 std::size_t levels = 400);

/// Generic two-column table, e.g. background profiles (header supplied by
/// the caller as "x,q_minus" etc.).
void write_columns_csv(const std::string& path, const std::string& header,
                       const std::vector<std::vector<double>>& columns);

} // namespace hetfront

#include "hetfront/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hetfront {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary: no platform newline games
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "s,z,dz_ds\n";
    for (const auto& p : traj.samples)
        out << fmt(p.s) << ',' << fmt(p.z) << ',' << fmt(p.dz_ds) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "s,z,dz_ds")
        throw std::runtime_error(path + ": expected header 's,z,dz_ds', got '" + line + "'");
    Trajectory traj;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        TrajectorySample p{};
        char extra;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf%c", &p.s, &p.z, &p.dz_ds, &extra) != 3)
            throw std::runtime_error(path + ": malformed row " + std::to_string(row));
        traj.samples.push_back(p);
    }
    traj.validate();
    return traj;
}

void write_profile_csv(const std::string& path, const PdeState& state) {
    if (state.U.grid.n != state.V.grid.n)
        throw std::invalid_argument("write_profile_csv: U/V grid mismatch");
    auto out = open_out(path);
    out << "x,U,V\n";
    for (std::size_t i = 0; i < state.U.grid.n; ++i)
        out << fmt(state.U.grid.x(i)) << ',' << fmt(state.U.values[i]) << ','
            << fmt(state.V.values[i]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_field_csv(const std::string& path, const std::vector<PdeState>& snapshots,
                     std::size_t x_thin) {
    if (x_thin < 1) throw std::invalid_argument("write_field_csv: x_thin must be >= 1");
    auto out = open_out(path);
    out << "s,x,V\n";
    for (const auto& st : snapshots)
        for (std::size_t i = 0; i < st.V.grid.n; i += x_thin)
            out << fmt(st.s) << ',' << fmt(st.V.grid.x(i)) << ',' << fmt(st.V.values[i]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_velocity_position_csv(const std::string& path, const Trajectory& traj,
                                 std::size_t levels) {
    if (levels < 2) throw std::invalid_argument("write_velocity_position_csv: levels >= 2");
    if (traj.samples.empty()) throw std::invalid_argument("write_velocity_position_csv: empty");
    double zlo = traj.samples.front().z, zhi = zlo;
    for (const auto& p : traj.samples) {
        zlo = std::min(zlo, p.z);
        zhi = std::max(zhi, p.z);
    }
    auto out = open_out(path);
    out << "z,dz_ds\n";
    if (zhi <= zlo) { // stationary path: one row
        out << fmt(zlo) << ',' << fmt(traj.samples.front().dz_ds) << '\n';
        return;
    }
    for (std::size_t k = 0; k < levels; ++k) {
        const double z = std::min(
            zhi, zlo + (zhi - zlo) * static_cast<double>(k) / static_cast<double>(levels - 1));
        const double s = traj.first_crossing(z);
        out << fmt(z) << ',' << fmt(traj.dz_at(s)) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_columns_csv(const std::string& path, const std::string& header,
                       const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) throw std::invalid_argument("write_columns_csv: no columns");
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("write_columns_csv: ragged columns");
    auto out = open_out(path);
    out << header << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << fmt(columns[c][r]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace hetfront

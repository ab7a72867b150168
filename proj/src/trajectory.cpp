#include "hetfront/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetfront {

void Trajectory::validate() const {
    if (samples.empty()) throw std::runtime_error("Trajectory: empty");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].s > samples[i - 1].s))
            throw std::runtime_error("Trajectory: sample times must strictly increase");
}

namespace {

std::size_t bracket_index(const std::vector<TrajectorySample>& v, double s) {
    auto it = std::lower_bound(v.begin(), v.end(), s,
                               [](const TrajectorySample& a, double t) { return a.s < t; });
    if (it == v.begin()) return 0;
    if (it == v.end()) return v.size() - 2;
    return static_cast<std::size_t>(it - v.begin()) - 1;
}

} // namespace

double Trajectory::z_at(double s) const {
    if (samples.size() == 1 || s <= samples.front().s) return samples.front().z;
    if (s >= samples.back().s) return samples.back().z;
    std::size_t i = bracket_index(samples, s);
    const auto &a = samples[i], &b = samples[i + 1];
    double f = (s - a.s) / (b.s - a.s);
    return a.z * (1.0 - f) + b.z * f;
}

double Trajectory::dz_at(double s) const {
    if (samples.size() == 1 || s <= samples.front().s) return samples.front().dz_ds;
    if (s >= samples.back().s) return samples.back().dz_ds;
    std::size_t i = bracket_index(samples, s);
    const auto &a = samples[i], &b = samples[i + 1];
    double f = (s - a.s) / (b.s - a.s);
    return a.dz_ds * (1.0 - f) + b.dz_ds * f;
}

double Trajectory::first_crossing(double z) const {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const auto &a = samples[i], &b = samples[i + 1];
        if ((a.z - z) == 0.0) return a.s;
        if ((a.z - z) * (b.z - z) < 0.0) {
            double f = (z - a.z) / (b.z - a.z);
            return a.s + f * (b.s - a.s);
        }
    }
    if (samples.back().z == z) return samples.back().s;
    throw std::runtime_error("Trajectory::first_crossing: level never crossed");
}

Trajectory Trajectory::shifted(double ds) const {
    Trajectory out = *this;
    for (auto& p : out.samples) p.s += ds;
    return out;
}

Trajectory estimate_velocity(const Trajectory& traj, int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("estimate_velocity: window must be odd and positive");
    Trajectory out = traj;
    const auto& v = traj.samples;
    const std::size_t n = v.size();
    if (n < 2) return out;
    std::vector<double> raw(n);
    raw[0] = (v[1].z - v[0].z) / (v[1].s - v[0].s);
    raw[n - 1] = (v[n - 1].z - v[n - 2].z) / (v[n - 1].s - v[n - 2].s);
    for (std::size_t i = 1; i + 1 < n; ++i)
        raw[i] = (v[i + 1].z - v[i - 1].z) / (v[i + 1].s - v[i - 1].s);
    int half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = (i >= static_cast<std::size_t>(half)) ? i - half : 0;
        std::size_t hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) sum += raw[j];
        out.samples[i].dz_ds = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

} // namespace hetfront

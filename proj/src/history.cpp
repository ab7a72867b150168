#include "hetfront/history.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetfront {

FrontHistory::FrontHistory(double tail_time, double tail_position, double tail_speed)
    : tail_time_(tail_time), tail_pos_(tail_position), tail_speed_(tail_speed) {
    if (!std::isfinite(tail_time) || !std::isfinite(tail_position) || !std::isfinite(tail_speed))
        throw std::invalid_argument("FrontHistory: tail data must be finite");
}

FrontHistory FrontHistory::from_breakpoints(const std::vector<Segment>& rows) {
    if (rows.empty()) throw std::invalid_argument("FrontHistory: no breakpoints");
    FrontHistory h(rows[0].s_end, rows[0].z_end, rows[0].slope);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double s_prev = h.last_time(), z_prev = h.last_position();
        if (!(r.s_end > s_prev))
            throw std::invalid_argument("FrontHistory: breakpoint times must increase");
        double z_pred = z_prev + r.slope * (r.s_end - s_prev);
        double scale = std::max({1.0, std::abs(z_pred), std::abs(r.z_end)});
        if (std::abs(z_pred - r.z_end) > 1e-12 * scale)
            throw std::invalid_argument("FrontHistory: breakpoints violate continuity");
        h.append_segment(r.slope, r.s_end);
    }
    return h;
}

double FrontHistory::last_time() const {
    return segs_.empty() ? tail_time_ : segs_.back().s_end;
}

double FrontHistory::last_position() const {
    return segs_.empty() ? tail_pos_ : segs_.back().z_end;
}

double FrontHistory::last_slope() const {
    return segs_.empty() ? tail_speed_ : segs_.back().slope;
}

void FrontHistory::append_segment(double slope, double s_end) {
    double s0 = last_time();
    if (!(s_end > s0))
        throw std::invalid_argument("FrontHistory: segment must advance time");
    if (!std::isfinite(slope))
        throw std::invalid_argument("FrontHistory: segment slope must be finite");
    segs_.push_back({s_end, last_position() + slope * (s_end - s0), slope});
}

double FrontHistory::eval(double s) const {
    if (s <= tail_time_) return tail_pos_ + tail_speed_ * (s - tail_time_);
    if (s > last_time())
        throw std::domain_error("FrontHistory::eval: beyond last breakpoint");
    // first segment with s_end >= s
    auto it = std::lower_bound(segs_.begin(), segs_.end(), s,
                               [](const Segment& seg, double v) { return seg.s_end < v; });
    return it->z_end + it->slope * (s - it->s_end);
}

double FrontHistory::slope_at(double s) const {
    if (s <= tail_time_) return tail_speed_;
    if (s > last_time())
        throw std::domain_error("FrontHistory::slope_at: beyond last breakpoint");
    auto it = std::lower_bound(segs_.begin(), segs_.end(), s,
                               [](const Segment& seg, double v) { return seg.s_end < v; });
    return it->slope;
}

double FrontHistory::eval_extended(double a, double s) const {
    double sN = last_time();
    if (s < sN)
        throw std::domain_error("FrontHistory::eval_extended: before last breakpoint");
    return last_position() + (last_slope() + a) * (s - sN);
}

} // namespace hetfront

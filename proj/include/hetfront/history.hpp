#pragma once

#include <cstddef>
#include <vector>

namespace hetfront {

/// Piecewise-linear front path z(s) with an infinite constant-speed tail.
///
/// The tail covers s <= tail_time at speed tail_speed; committed segments
/// extend it forward, each storing its end time, end position and slope.
/// Slopes are left-limits at breakpoints: slope_at(s_i) returns the slope
/// of the segment ending at s_i.
class FrontHistory {
public:
    struct Segment {
        double s_end;
        double z_end;
        double slope;
    };

    FrontHistory(double tail_time, double tail_position, double tail_speed);

    static FrontHistory constant_speed_tail(double s0, double z0, double speed) {
        return FrontHistory(s0, z0, speed);
    }

    /// Rebuild from explicit breakpoints (s_i, z_i, slope_i), validating the
    /// continuity identity z_i = z_{i-1} + slope_i (s_i - s_{i-1}) to 1e-12
    /// relative tolerance. First row defines the tail anchor and speed.
    static FrontHistory from_breakpoints(const std::vector<Segment>& rows);

    double tail_time() const { return tail_time_; }
    double tail_position() const { return tail_pos_; }
    double tail_speed() const { return tail_speed_; }

    double last_time() const;
    double last_position() const;
    double last_slope() const; // left-limit slope at last_time

    std::size_t segment_count() const { return segs_.size(); }
    const std::vector<Segment>& segments() const { return segs_; }

    /// Append a segment of the given slope ending at s_end (> last_time).
    void append_segment(double slope, double s_end);

    /// z(s) for s <= last_time (throws std::domain_error beyond).
    double eval(double s) const;
    /// Left-limit slope at s (s <= last_time).
    double slope_at(double s) const;

    /// Extension z[a](s) = z(s_N) + (z'(s_N) + a)(s - s_N) for s >= s_N
    /// (throws std::domain_error below s_N). At s = s_N both definitions
    /// agree with eval.
    double eval_extended(double a, double s) const;

private:
    double tail_time_;
    double tail_pos_;
    double tail_speed_;
    std::vector<Segment> segs_;
};

} // namespace hetfront

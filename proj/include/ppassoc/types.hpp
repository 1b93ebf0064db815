#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppassoc {

// Observation window [start, end). All event times and intensity cells live here.
struct ObservationWindow {
    double start = 0.0;
    double end = 1.0;

    double length() const { return end - start; }
    bool contains(double t) const { return t >= start && t < end; }
};

inline ObservationWindow make_window(double start, double end) {
    if (!(start < end)) {
        throw std::invalid_argument("window start must be strictly below end");
    }
    return ObservationWindow{start, end};
}

// A simple point process realisation: strictly increasing event times.
class PointPattern {
  public:
    PointPattern() = default;

    // times must already be strictly increasing.
    static PointPattern from_sorted(std::vector<double> times) {
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i - 1] < times[i])) {
                throw std::invalid_argument("point pattern times must be strictly increasing (duplicate or out-of-order at position " + std::to_string(i) + ")");
            }
        }
        PointPattern p;
        p.times_ = std::move(times);
        return p;
    }

    static PointPattern from_unsorted(std::vector<double> times) {
        std::sort(times.begin(), times.end());
        return from_sorted(std::move(times));
    }

    std::span<const double> times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    double front() const { return times_.front(); }
    double back() const { return times_.back(); }
    double operator[](std::size_t i) const { return times_[i]; }

    void require_inside(const ObservationWindow& w) const {
        for (double t : times_) {
            if (!w.contains(t)) {
                throw std::invalid_argument("event time " + std::to_string(t) + " lies outside the observation window");
            }
        }
    }

  private:
    std::vector<double> times_;
};

// Half-open interval [start, end).
struct Interval {
    double start;
    double end;

    double length() const { return end - start; }
    bool empty() const { return !(start < end); }
};

// Disjoint sorted union of half-open intervals.
class IntervalUnion {
  public:
    IntervalUnion() = default;

    // Normalises arbitrary input: drops empty intervals, sorts, merges overlaps
    // and touching neighbours ([a,b) followed by [b,c) becomes [a,c)).
    static IntervalUnion from_intervals(std::vector<Interval> parts) {
        std::erase_if(parts, [](const Interval& iv) { return iv.empty(); });
        std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.start < b.start; });
        std::vector<Interval> merged;
        for (const Interval& iv : parts) {
            if (!merged.empty() && iv.start <= merged.back().end) {
                merged.back().end = std::max(merged.back().end, iv.end);
            } else {
                merged.push_back(iv);
            }
        }
        IntervalUnion u;
        u.parts_ = std::move(merged);
        return u;
    }

    std::span<const Interval> parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    double total_length() const {
        double s = 0.0;
        for (const Interval& iv : parts_) s += iv.length();
        return s;
    }

  private:
    std::vector<Interval> parts_;
};

enum class Mode { triggering, correlation };

inline const char* mode_name(Mode m) {
    return m == Mode::triggering ? "triggering" : "correlation";
}

}  // namespace ppassoc

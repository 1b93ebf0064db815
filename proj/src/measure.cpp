#include "ppassoc/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ppassoc {

double rho(const NullIntensity& intensity, const IntervalUnion& set) {
    const ObservationWindow& w = intensity.window();
    double total = 0.0;
    for (const Interval& iv : set.parts()) {
        if (iv.start < w.start || iv.end > w.end) {
            throw std::invalid_argument("rho: interval outside the window");
        }
        total += intensity.cumulative_at(iv.end) - intensity.cumulative_at(iv.start);
    }
    return total;
}

IntervalUnion triggered_set(const PointPattern& a, const ObservationWindow& window, double y) {
    if (a.empty()) throw std::invalid_argument("triggered_set: source pattern is empty");
    if (y < 0.0) throw std::invalid_argument("triggered_set: negative response range");
    std::vector<Interval> parts;
    parts.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double next = (i + 1 < a.size()) ? a[i + 1] : window.end;
        double hi = std::min({a[i] + y, next, window.end});
        parts.push_back({a[i], hi});
    }
    return IntervalUnion::from_intervals(std::move(parts));
}

IntervalUnion correlation_set(const PointPattern& a, const ObservationWindow& window, double y) {
    if (a.empty()) throw std::invalid_argument("correlation_set: source pattern is empty");
    if (y < 0.0) throw std::invalid_argument("correlation_set: negative response range");
    std::vector<Interval> parts;
    parts.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double mid_lo = (i > 0) ? 0.5 * (a[i - 1] + a[i]) : window.start;
        double mid_hi = (i + 1 < a.size()) ? 0.5 * (a[i] + a[i + 1]) : window.end;
        double lo = std::max({a[i] - y, mid_lo, window.start});
        double hi = std::min({a[i] + y, mid_hi, window.end});
        parts.push_back({lo, hi});
    }
    return IntervalUnion::from_intervals(std::move(parts));
}

namespace {

// Most recent source event at or before t. Requires t >= a[0].
double last_source_at_or_before(const PointPattern& a, double t) {
    auto times = a.times();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return *(it - 1);
}

// Nearest source event; equidistant times go to the earlier event.
double nearest_source(const PointPattern& a, double t) {
    auto times = a.times();
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return *it;
    if (it == times.end()) return *(it - 1);
    double before = *(it - 1);
    double after = *it;
    return (t - before <= after - t) ? before : after;
}

}  // namespace

TransformedSample transform(const PointPattern& a, const PointPattern& b,
                            const NullIntensity& intensity, Mode mode,
                            std::optional<double> tau_max) {
    const ObservationWindow& window = intensity.window();
    if (a.empty()) throw std::invalid_argument("transform: source pattern is empty");
    a.require_inside(window);
    b.require_inside(window);
    if (mode == Mode::triggering) {
        if (a.front() != window.start) {
            throw std::invalid_argument("transform: triggering mode requires the window to start at the first source event");
        }
        if (!b.empty() && b.front() < a.front()) {
            throw std::invalid_argument("transform: target event precedes the first source event in triggering mode");
        }
    }
    if (tau_max && !(*tau_max >= 0.0)) {
        throw std::invalid_argument("transform: tau_max must be nonnegative");
    }

    auto region_mass = [&](double y) {
        IntervalUnion region = (mode == Mode::triggering) ? triggered_set(a, window, y)
                                                          : correlation_set(a, window, y);
        return rho(intensity, region);
    };

    struct Entry {
        double u;
        double response;
        std::size_t index;
    };
    std::vector<Entry> entries;
    entries.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        double source = (mode == Mode::triggering) ? last_source_at_or_before(a, b[i])
                                                   : nearest_source(a, b[i]);
        double response = std::abs(b[i] - source);
        entries.push_back({region_mass(response), response, i});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        return x.u != y.u ? x.u < y.u : x.index < y.index;
    });

    TransformedSample sample;
    sample.mode = mode;
    sample.u.reserve(entries.size());
    sample.response.reserve(entries.size());
    sample.source_index.reserve(entries.size());
    for (const Entry& e : entries) {
        sample.u.push_back(e.u);
        sample.response.push_back(e.response);
        sample.source_index.push_back(e.index);
        if (e.u == 0.0) sample.degenerate = true;
    }
    if (tau_max) {
        sample.tau_max = tau_max;
        sample.u_max = region_mass(*tau_max);
    }
    return sample;
}

ResponseMeasure::ResponseMeasure(const PointPattern& a, const NullIntensity& intensity, Mode mode) {
    const ObservationWindow& window = intensity.window();
    if (a.empty()) throw std::invalid_argument("ResponseMeasure: source pattern is empty");
    a.require_inside(window);

    // mu changes slope where a segment saturates or where its growing edge
    // crosses an intensity breakpoint. Knots are inserted liberally (extras
    // are harmless since mu is evaluated exactly at every knot).
    std::set<double> knots{0.0};
    double max_reach = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mode == Mode::triggering) {
            double next = (i + 1 < a.size()) ? a[i + 1] : window.end;
            knots.insert(next - a[i]);
            max_reach = std::max(max_reach, next - a[i]);
        } else {
            double mid_lo = (i > 0) ? 0.5 * (a[i - 1] + a[i]) : window.start;
            double mid_hi = (i + 1 < a.size()) ? 0.5 * (a[i] + a[i + 1]) : window.end;
            if (a[i] - mid_lo > 0.0) knots.insert(a[i] - mid_lo);
            knots.insert(mid_hi - a[i]);
            max_reach = std::max({max_reach, a[i] - mid_lo, mid_hi - a[i]});
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (double bp : intensity.breakpoints()) {
            double y = std::abs(bp - a[i]);
            if (y > 0.0 && y < max_reach) knots.insert(y);
        }
    }

    knots_y_.assign(knots.begin(), knots.end());
    knots_mu_.reserve(knots_y_.size());
    for (double y : knots_y_) {
        IntervalUnion region = (mode == Mode::triggering) ? triggered_set(a, window, y)
                                                          : correlation_set(a, window, y);
        knots_mu_.push_back(rho(intensity, region));
    }
}

double ResponseMeasure::value(double y) const {
    if (y <= knots_y_.front()) return knots_mu_.front();
    if (y >= knots_y_.back()) return knots_mu_.back();
    auto it = std::upper_bound(knots_y_.begin(), knots_y_.end(), y);
    std::size_t j = static_cast<std::size_t>(it - knots_y_.begin());
    double w = (y - knots_y_[j - 1]) / (knots_y_[j] - knots_y_[j - 1]);
    return knots_mu_[j - 1] + w * (knots_mu_[j] - knots_mu_[j - 1]);
}

double ResponseMeasure::inverse(double x) const {
    if (x <= knots_mu_.front()) return knots_y_.front();
    if (x >= knots_mu_.back()) {
        // inf over the final plateau, if any
        std::size_t j = knots_mu_.size() - 1;
        while (j > 0 && knots_mu_[j - 1] >= knots_mu_.back()) --j;
        return knots_y_[j];
    }
    auto it = std::lower_bound(knots_mu_.begin(), knots_mu_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - knots_mu_.begin());
    // knots_mu_[j-1] < x <= knots_mu_[j], so the piece has positive slope.
    double slope = (knots_mu_[j] - knots_mu_[j - 1]) / (knots_y_[j] - knots_y_[j - 1]);
    return knots_y_[j - 1] + (x - knots_mu_[j - 1]) / slope;
}

}  // namespace ppassoc

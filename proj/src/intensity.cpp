#include "ppassoc/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppassoc {

namespace {
constexpr double kMassTolerance = 1e-9;
}

NullIntensity NullIntensity::build(std::vector<double> breakpoints, std::vector<double> densities) {
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("intensity needs at least two breakpoints");
    }
    if (densities.size() + 1 != breakpoints.size()) {
        throw std::invalid_argument("intensity needs exactly one density per cell");
    }
    for (std::size_t j = 1; j < breakpoints.size(); ++j) {
        if (!(breakpoints[j - 1] < breakpoints[j])) {
            throw std::invalid_argument("intensity breakpoints must be strictly increasing");
        }
    }
    double mass = 0.0;
    for (std::size_t j = 0; j < densities.size(); ++j) {
        if (!(densities[j] >= 0.0) || !std::isfinite(densities[j])) {
            throw std::invalid_argument("intensity densities must be finite and nonnegative");
        }
        mass += densities[j] * (breakpoints[j + 1] - breakpoints[j]);
    }
    if (!(mass > 0.0)) {
        throw std::invalid_argument("intensity has zero total mass");
    }

    NullIntensity r;
    r.rescaled_ = std::abs(mass - 1.0) > kMassTolerance;
    for (double& d : densities) d /= mass;

    r.window_ = ObservationWindow{breakpoints.front(), breakpoints.back()};
    r.breakpoints_ = std::move(breakpoints);
    r.densities_ = std::move(densities);

    r.cumulative_.resize(r.breakpoints_.size());
    r.cumulative_[0] = 0.0;
    for (std::size_t j = 0; j < r.densities_.size(); ++j) {
        r.cumulative_[j + 1] = r.cumulative_[j] + r.densities_[j] * (r.breakpoints_[j + 1] - r.breakpoints_[j]);
    }
    // Pin the top exactly so rho of the whole window is 1.
    r.cumulative_.back() = 1.0;
    return r;
}

double NullIntensity::density_at(double t) const {
    if (t < window_.start || t > window_.end) {
        throw std::invalid_argument("density_at: time outside window");
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t cell = static_cast<std::size_t>(it - breakpoints_.begin());
    if (cell == 0) cell = 1;                       // t == start
    if (cell > densities_.size()) cell = densities_.size();  // t == end
    return densities_[cell - 1];
}

double NullIntensity::cumulative_at(double t) const {
    if (t <= window_.start) return 0.0;
    if (t >= window_.end) return 1.0;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t cell = static_cast<std::size_t>(it - breakpoints_.begin());
    // t is strictly inside the window, so 1 <= cell <= densities_.size().
    return cumulative_[cell - 1] + densities_[cell - 1] * (t - breakpoints_[cell - 1]);
}

double NullIntensity::inverse_cumulative(double p) const {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("inverse_cumulative: p must be in [0, 1]");
    }
    if (p <= 0.0) return window_.start;
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
    std::size_t knot = static_cast<std::size_t>(it - cumulative_.begin());
    if (knot == 0) return breakpoints_.front();
    // cumulative_[knot-1] < p <= cumulative_[knot], so the cell has positive density.
    return breakpoints_[knot - 1] + (p - cumulative_[knot - 1]) / densities_[knot - 1];
}

NullIntensity uniform_intensity(const ObservationWindow& w) {
    return NullIntensity::build({w.start, w.end}, {1.0 / w.length()});
}

NullIntensity restrict_intensity(const NullIntensity& r, double new_start, double new_end) {
    const ObservationWindow& w = r.window();
    if (!(new_start < new_end) || new_start < w.start || new_end > w.end) {
        throw std::invalid_argument("restrict_intensity: sub-window must be inside the window");
    }
    std::vector<double> breaks{new_start};
    std::vector<double> dens;
    for (std::size_t j = 0; j + 1 < r.breakpoints().size(); ++j) {
        double cell_start = r.breakpoints()[j];
        double cell_end = r.breakpoints()[j + 1];
        double lo = std::max(cell_start, new_start);
        double hi = std::min(cell_end, new_end);
        if (lo < hi) {
            breaks.push_back(hi);
            dens.push_back(r.densities()[j]);
        }
    }
    // build() renormalises to unit mass and rejects zero-mass sub-windows.
    return NullIntensity::build(std::move(breaks), std::move(dens));
}

}  // namespace ppassoc

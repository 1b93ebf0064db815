#pragma once

#include <vector>

#include "ppassoc/types.hpp"

namespace ppassoc {

// Piecewise-constant normalised density r on the observation window, with its
// cumulative integral R precomputed at the cell breakpoints. R is continuous,
// nondecreasing and piecewise linear with R(start) = 0 and R(end) = 1.
class NullIntensity {
  public:
    // breakpoints[0] is the window start, breakpoints.back() the window end;
    // densities has one entry per cell [breakpoints[j], breakpoints[j+1]).
    static NullIntensity build(std::vector<double> breakpoints, std::vector<double> densities);

    const ObservationWindow& window() const { return window_; }
    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const double> densities() const { return densities_; }
    std::span<const double> cumulative() const { return cumulative_; }
    bool rescaled() const { return rescaled_; }

    // r(t). Cells are half-open; t == end returns the last cell's density.
    double density_at(double t) const;

    // R(t) = integral of r over [start, t], clamped to the window.
    double cumulative_at(double t) const;

    // Generalised inverse: inf{t : R(t) >= p}. Plateaus (cells with zero
    // density) resolve to their left endpoint.
    double inverse_cumulative(double p) const;

  private:
    ObservationWindow window_;
    std::vector<double> breakpoints_;
    std::vector<double> densities_;
    std::vector<double> cumulative_;  // one entry per breakpoint
    bool rescaled_ = false;
};

// Convenience builders.
NullIntensity uniform_intensity(const ObservationWindow& w);

// Restriction of an intensity to a sub-window, renormalised to unit mass.
NullIntensity restrict_intensity(const NullIntensity& r, double new_start, double new_end);

}  // namespace ppassoc

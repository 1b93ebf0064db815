#pragma once

#include <optional>
#include <vector>

#include "ppassoc/intensity.hpp"
#include "ppassoc/types.hpp"

namespace ppassoc {

// rho(X) = integral of r over X. Exact for piecewise-constant r.
double rho(const NullIntensity& intensity, const IntervalUnion& set);

// Union of the intervals triggered by A within response range y:
// for each source event a_i, [a_i, min(a_i + y, a_{i+1}, end)), with the
// successor of the last event taken to be the window end.
IntervalUnion triggered_set(const PointPattern& a, const ObservationWindow& window, double y);

// Symmetric variant: times within y of their nearest source event. Each
// source's reach is clipped to its midpoint cell; midpoint ties belong to the
// earlier event (a measure-zero convention under continuous r).
IntervalUnion correlation_set(const PointPattern& a, const ObservationWindow& window, double y);

// Sorted u-values (triggering) or v-values (correlation) of the target events,
// together with the response times and original indices they came from.
// Ties among equal u-values keep the original target order.
struct TransformedSample {
    std::vector<double> u;              // nondecreasing, each in [0, 1)
    std::vector<double> response;       // response time per sorted entry
    std::vector<std::size_t> source_index;  // original index into b per sorted entry
    Mode mode = Mode::triggering;
    std::optional<double> u_max;        // rho of the mode's region at tau_max
    std::optional<double> tau_max;
    bool degenerate = false;            // some u equals zero

    std::size_t size() const { return u.size(); }
};

// Computes the u-values of each target event's response region. Triggering
// mode requires the window to start at the first source event and refuses
// target events before it.
TransformedSample transform(const PointPattern& a, const PointPattern& b,
                            const NullIntensity& intensity, Mode mode,
                            std::optional<double> tau_max = std::nullopt);

// The map mu(y) = rho{region(y)} as an explicit piecewise-linear function,
// with its generalised inverse (plateaus resolve to their left endpoint).
// Used by the simulation harness to sample in rho-time and map back.
class ResponseMeasure {
  public:
    ResponseMeasure(const PointPattern& a, const NullIntensity& intensity, Mode mode);

    double value(double y) const;     // mu(y)
    double inverse(double x) const;   // inf{y : mu(y) >= x}
    double max_response() const { return knots_y_.back(); }

  private:
    std::vector<double> knots_y_;
    std::vector<double> knots_mu_;
};

}  // namespace ppassoc

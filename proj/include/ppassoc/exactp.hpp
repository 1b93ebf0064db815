#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ppassoc {

// Per-rank thresholds o_i: each solves log_ell(i, n, x) = log_t for x in
// (0, i/n]. log_ell is strictly decreasing on that range, so the root is
// unique; it is found by bisection to |dx| <= x_tol.
struct ThresholdVector {
    std::vector<double> o;
    std::size_t n = 0;
};

ThresholdVector solve_thresholds(double log_t, std::size_t n, double x_tol = 1e-12);

// P[u_(1) >= o_1, ..., u_(n) >= o_n] for the order statistics of n
// independent uniforms; o must be nondecreasing in [0, 1]. Equivalently the
// probability that the count of uniforms below o_i is at most i-1 for all i.
double ordered_uniform_survival(std::span<const double> o);

// The complement 1 - survival, accumulated directly as a sum of nonnegative
// first-violation probabilities, so small p-values keep full precision.
double ordered_uniform_crossing(std::span<const double> o);

// Exact finite-sample p-value of the test statistic given n target events.
// n = 0 or log_t <= 0 give p = 1; a time-limited cap u_max clips every
// threshold from above. An infinite statistic (degenerate data) gives p = 0.
double exact_p_value(double log_t, std::size_t n, std::optional<double> u_max = std::nullopt);

}  // namespace ppassoc

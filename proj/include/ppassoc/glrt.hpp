#pragma once

#include <cstddef>
#include <optional>

#include "ppassoc/measure.hpp"

namespace ppassoc {

// log of ell_k = (k/n / u)^{k/n} * ((n-k)/n / (1-u))^{(n-k)/n}, with the
// second factor read as 1 when k = n and +inf returned when u = 0.
double log_ell(std::size_t k, std::size_t n, double u);

struct MaximizeResult {
    double log_t = 0.0;                      // 0 when the feasible set is empty
    std::optional<std::size_t> k_hat;        // 1-based rank into the sorted u
    std::optional<double> lambda1_hat;       // +inf when u_{k_hat} = 0
    std::optional<double> lambda2_hat;
    bool degenerate = false;
};

// Maximises ell_k over {k : u_k <= k/n}, additionally capped at u_max when the
// sample carries one. Ties go to the smallest k. The unrestricted feasible set
// is never empty (k = n always qualifies); with a cap it may be, in which case
// the statistic is 1 and no estimates are produced.
MaximizeResult maximize(const TransformedSample& sample);

struct GlrOutcome {
    double log_t = 0.0;                      // +inf flags a degenerate zero u-value
    std::optional<std::size_t> k_hat;
    std::optional<double> tau_hat;
    std::optional<double> lambda1_hat;
    std::optional<double> lambda2_hat;
    double p_value = 1.0;
    std::size_t n = 0;
    bool degenerate = false;
    Mode mode = Mode::triggering;
    std::optional<double> tau_max;
    std::optional<double> u_max;
};

struct TestOptions {
    Mode mode = Mode::triggering;
    std::optional<double> tau_max;
};

// Full test: transform the target events, maximise the likelihood ratio and
// attach the exact p-value. tau_hat maps the winning rank back to the smallest
// response time among entries sharing its u-value.
GlrOutcome run_test(const PointPattern& a, const PointPattern& b,
                    const NullIntensity& intensity, const TestOptions& options = {});

// Same, starting from an already transformed sample.
GlrOutcome run_test(const TransformedSample& sample);

}  // namespace ppassoc

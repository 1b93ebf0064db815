#include "ppassoc/glrt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppassoc/exactp.hpp"

namespace ppassoc {

double log_ell(std::size_t k, std::size_t n, double u) {
    if (k < 1 || k > n) throw std::invalid_argument("log_ell: k must lie in 1..n");
    if (!(u >= 0.0) || !(u < 1.0)) throw std::invalid_argument("log_ell: u must lie in [0, 1)");
    if (u == 0.0) return std::numeric_limits<double>::infinity();
    double p = static_cast<double>(k) / static_cast<double>(n);
    double value = p * std::log(p / u);
    if (k < n) value += (1.0 - p) * std::log((1.0 - p) / (1.0 - u));
    return value;
}

MaximizeResult maximize(const TransformedSample& sample) {
    const std::size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("maximize: empty sample");

    MaximizeResult result;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n; ++k) {
        double u = sample.u[k - 1];
        if (u > static_cast<double>(k) / static_cast<double>(n)) continue;
        if (sample.u_max && u > *sample.u_max) continue;
        double value = log_ell(k, n, u);
        if (value > best) {
            best = value;
            result.k_hat = k;
        }
    }
    if (!result.k_hat) {
        // Only reachable in time-limited mode: report a unit statistic.
        result.log_t = 0.0;
        return result;
    }
    result.log_t = best;
    double u = sample.u[*result.k_hat - 1];
    if (u == 0.0) {
        result.lambda1_hat = std::numeric_limits<double>::infinity();
        result.degenerate = true;
    } else {
        result.lambda1_hat = static_cast<double>(*result.k_hat) / u;
    }
    result.lambda2_hat = static_cast<double>(n - *result.k_hat) / (1.0 - u);
    return result;
}

GlrOutcome run_test(const TransformedSample& sample) {
    GlrOutcome out;
    out.mode = sample.mode;
    out.tau_max = sample.tau_max;
    out.u_max = sample.u_max;
    out.n = sample.size();
    out.degenerate = sample.degenerate;
    if (out.n == 0) {
        out.p_value = 1.0;
        return out;
    }

    MaximizeResult m = maximize(sample);
    out.log_t = m.log_t;
    out.k_hat = m.k_hat;
    out.lambda1_hat = m.lambda1_hat;
    out.lambda2_hat = m.lambda2_hat;
    out.degenerate = out.degenerate || m.degenerate;
    if (!m.k_hat) {
        out.p_value = 1.0;  // empty feasible set under a cap: conservative unit statistic
        return out;
    }

    // Smallest response time among entries tied at u_{k_hat}.
    double winning_u = sample.u[*m.k_hat - 1];
    double tau = sample.response[*m.k_hat - 1];
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (sample.u[i] == winning_u) tau = std::min(tau, sample.response[i]);
    }
    out.tau_hat = tau;

    if (std::isinf(out.log_t)) {
        out.p_value = 0.0;  // coincident target/source timestamps; see degenerate flag
    } else if (!(out.log_t > 0.0)) {
        out.p_value = 1.0;
    } else {
        out.p_value = exact_p_value(out.log_t, out.n, sample.u_max);
    }
    return out;
}

GlrOutcome run_test(const PointPattern& a, const PointPattern& b,
                    const NullIntensity& intensity, const TestOptions& options) {
    return run_test(transform(a, b, intensity, options.mode, options.tau_max));
}

}  // namespace ppassoc

#include "ppassoc/exactp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppassoc/glrt.hpp"

namespace ppassoc {

ThresholdVector solve_thresholds(double log_t, std::size_t n, double x_tol) {
    if (n == 0) throw std::invalid_argument("solve_thresholds: n must be positive");
    if (!(log_t > 0.0)) {
        throw std::invalid_argument("solve_thresholds: log_t must be positive (a unit statistic has p-value one)");
    }
    ThresholdVector tv;
    tv.n = n;
    tv.o.resize(n);
    for (std::size_t i = 1; i <= n; ++i) {
        // log_ell(i, n, x) decreases from +inf at x -> 0 to 0 at x = i/n.
        double lo = 0.0;
        double hi = static_cast<double>(i) / static_cast<double>(n);
        while (hi - lo > x_tol) {
            double mid = 0.5 * (lo + hi);
            if (log_ell(i, n, mid) > log_t) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        tv.o[i - 1] = 0.5 * (lo + hi);
    }
    return tv;
}

namespace {

void check_boundaries(std::span<const double> o) {
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (!(o[i] >= 0.0) || !(o[i] <= 1.0)) {
            throw std::invalid_argument("ordered_uniform boundaries must lie in [0, 1]");
        }
        if (i > 0 && o[i] < o[i - 1]) {
            throw std::invalid_argument("ordered_uniform boundaries must be nondecreasing");
        }
    }
}

}  // namespace

// First-violation decomposition. Reverse the sample (v = 1 - u) so the event
// becomes v_(j) <= h_j with h_j = 1 - o_{n+1-j} nondecreasing. The first rank
// j violating v_(j) <= h_j forces the count below h_j to equal exactly j-1,
// and conditional on that count the j-1 points below h_j are iid uniform on
// [0, h_j]. That makes the no-violation probability gamma_j of the reduced
// problem independent of n and yields
//   P[violation] = sum_k C(n, k-1) h_k^{k-1} (1-h_k)^{n-k+1} gamma_k,
//   gamma_k = 1 - sum_{j<k} C(k-1, j-1) r^{j-1} (1-r)^{k-j} gamma_j,
// with r = h_j / h_k. Every term is a probability, so nothing large is ever
// subtracted; binomial weights are assembled in log space.
double ordered_uniform_crossing(std::span<const double> o) {
    check_boundaries(o);
    const std::size_t n = o.size();
    if (n == 0) return 0.0;
    if (o.back() >= 1.0) return 1.0;  // u_(i) >= 1 is impossible for a uniform

    std::vector<double> h(n + 1);
    for (std::size_t j = 1; j <= n; ++j) h[j] = 1.0 - o[n - j];

    std::vector<double> lf(n + 2);  // log i!
    for (std::size_t i = 1; i <= n + 1; ++i) lf[i] = std::lgamma(static_cast<double>(i) + 1.0);

    std::vector<double> gamma(n + 1, 0.0);
    gamma[1] = 1.0;
    for (std::size_t k = 2; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j < k; ++j) {
            if (gamma[j] == 0.0) continue;
            double diff = o[n - j] - o[n - k];  // h[k] - h[j] without the complement round-trip
            if (diff <= 0.0) continue;          // equal boundaries contribute nothing for j < k
            double lp = lf[k - 1] - lf[j - 1] - lf[k - j];
            if (j > 1) lp += static_cast<double>(j - 1) * std::log(h[j] / h[k]);
            lp += static_cast<double>(k - j) * std::log(diff / h[k]);
            s += std::exp(lp) * gamma[j];
        }
        gamma[k] = std::clamp(1.0 - s, 0.0, 1.0);
    }

    double crossing = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (gamma[k] == 0.0) continue;
        double q = o[n - k];  // 1 - h[k], taken from the original boundary exactly
        if (q <= 0.0) continue;
        double lp = lf[n] - lf[k - 1] - lf[n - k + 1];
        if (k > 1) lp += static_cast<double>(k - 1) * std::log(h[k]);
        lp += static_cast<double>(n - k + 1) * std::log(q);
        crossing += std::exp(lp) * gamma[k];
    }
    return std::clamp(crossing, 0.0, 1.0);
}

double ordered_uniform_survival(std::span<const double> o) {
    return 1.0 - ordered_uniform_crossing(o);
}

double exact_p_value(double log_t, std::size_t n, std::optional<double> u_max) {
    if (n == 0) return 1.0;
    if (std::isinf(log_t)) return 0.0;  // degenerate data: zero u-value
    if (!(log_t > 0.0)) return 1.0;     // T = 1 is the floor of the statistic
    ThresholdVector tv = solve_thresholds(log_t, n);
    if (u_max) {
        if (!(*u_max > 0.0) || !(*u_max <= 1.0)) {
            throw std::invalid_argument("exact_p_value: u_max must lie in (0, 1]");
        }
        for (double& x : tv.o) x = std::min(x, *u_max);
    }
    // The roots are nondecreasing in exact arithmetic, but the absolute
    // bisection tolerance can jumble thresholds that sit below 1e-12.
    std::sort(tv.o.begin(), tv.o.end());
    return ordered_uniform_crossing(tv.o);
}

}  // namespace ppassoc

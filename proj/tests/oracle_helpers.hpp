#pragma once

// Independent oracles used by the tests. These deliberately avoid the
// implementation paths they check: survival probabilities come from raw Monte
// Carlo counting, likelihood maxima from grid search over the original
// three-parameter likelihood, and tail probabilities from quadrature.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ppassoc/measure.hpp"
#include "ppassoc/rng.hpp"
#include "ppassoc/types.hpp"

namespace oracle {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// P[u_(i) >= o_i for all i] estimated by direct simulation.
inline McEstimate mc_ordered_uniform_survival(std::span<const double> o, std::size_t draws,
                                              ppassoc::RngSeed seed) {
    auto engine = ppassoc::make_engine(seed);
    const std::size_t n = o.size();
    std::vector<double> sample(n);
    std::size_t hits = 0;
    for (std::size_t d = 0; d < draws; ++d) {
        for (double& x : sample) x = ppassoc::uniform_open01(engine);
        std::sort(sample.begin(), sample.end());
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (sample[i] < o[i]) {
                ok = false;
                break;
            }
        }
        if (ok) ++hits;
    }
    McEstimate est;
    est.value = static_cast<double>(hits) / static_cast<double>(draws);
    est.std_error = std::sqrt(std::max(est.value * (1.0 - est.value), 1e-12) / static_cast<double>(draws));
    return est;
}

// Closed form for two order statistics: P[min >= o1, max >= o2] with o1 <= o2.
inline double survival_two_points(double o1, double o2) {
    return (1.0 - o1) * (1.0 - o1) - (o2 - o1) * (o2 - o1);
}

// Brute-force maximisation of the two-level likelihood
//   K log(l1) - l1 * rho + (n - K) log(l2) - l2 * (1 - rho)
// over response ranges and rates l1 > l2 >= 0, by grid search plus local
// refinement. Only the raw region machinery is shared with the library.
struct GridMaxResult {
    double log_lik = 0.0;
    double tau_star = 0.0;
    std::size_t k_star = 0;  // response times within tau_star
};

inline GridMaxResult grid_maximize_likelihood(const ppassoc::PointPattern& a,
                                              const ppassoc::PointPattern& b,
                                              const ppassoc::NullIntensity& intensity) {
    using namespace ppassoc;
    const ObservationWindow& window = intensity.window();
    const std::size_t n = b.size();

    std::vector<double> responses;
    for (double t : b.times()) {
        auto times = a.times();
        auto it = std::upper_bound(times.begin(), times.end(), t);
        responses.push_back(t - *(it - 1));
    }

    // Candidate response ranges: a dense sweep plus every observed response.
    std::vector<double> taus(responses.begin(), responses.end());
    double top = window.length();
    for (int i = 1; i <= 400; ++i) taus.push_back(top * static_cast<double>(i) / 400.0);

    auto loglik_at = [&](double l1, double l2, std::size_t k, double mass) {
        double value = -l1 * mass - l2 * (1.0 - mass);
        if (k > 0) value += (l1 > 0.0) ? static_cast<double>(k) * std::log(l1)
                                       : -std::numeric_limits<double>::infinity();
        if (n - k > 0) value += (l2 > 0.0) ? static_cast<double>(n - k) * std::log(l2)
                                           : -std::numeric_limits<double>::infinity();
        return value;
    };

    GridMaxResult best;
    best.log_lik = -std::numeric_limits<double>::infinity();
    std::vector<double> grid{0.0};
    for (int i = 0; i <= 160; ++i) grid.push_back(0.01 * std::pow(1.1, i));  // up to ~4.3e4

    for (double tau : taus) {
        if (!(tau > 0.0)) continue;
        double mass = rho(intensity, triggered_set(a, window, tau));
        std::size_t k = 0;
        for (double r : responses) {
            if (r <= tau) ++k;
        }

        double local_best = -std::numeric_limits<double>::infinity();
        double best_l1 = 0.0, best_l2 = 0.0;
        for (double l1 : grid) {
            for (double l2 : grid) {
                if (!(l1 > l2)) continue;
                double value = loglik_at(l1, l2, k, mass);
                if (value > local_best) {
                    local_best = value;
                    best_l1 = l1;
                    best_l2 = l2;
                }
            }
        }
        // Coordinate-wise ternary refinement around the winning cell.
        for (int round = 0; round < 4; ++round) {
            auto refine = [&](double lo, double hi, auto eval) {
                for (int it = 0; it < 120; ++it) {
                    double m1 = lo + (hi - lo) / 3.0;
                    double m2 = hi - (hi - lo) / 3.0;
                    if (eval(m1) < eval(m2)) {
                        lo = m1;
                    } else {
                        hi = m2;
                    }
                }
                return 0.5 * (lo + hi);
            };
            best_l1 = refine(best_l2 + 1e-12, best_l1 * 3.0 + 1.0,
                             [&](double l1) { return loglik_at(l1, best_l2, k, mass); });
            best_l2 = refine(0.0, best_l1 - 1e-12,
                             [&](double l2) { return loglik_at(best_l1, l2, k, mass); });
            local_best = loglik_at(best_l1, best_l2, k, mass);
        }

        if (local_best > best.log_lik) {
            best.log_lik = local_best;
            best.tau_star = tau;
            best.k_star = k;
        }
    }
    return best;
}

// Adaptive Simpson integration.
inline double simpson(double (*f)(double, double), double param, double lo, double hi, double tol) {
    struct Rec {
        static double step(double (*f)(double, double), double p, double a, double b, double fa,
                           double fb, double fm, double whole, double tol, int depth) {
            double m = 0.5 * (a + b);
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm, p), frm = f(rm, p);
            double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth > 40 || std::abs(left + right - whole) < 15.0 * tol) {
                return left + right + (left + right - whole) / 15.0;
            }
            return step(f, p, a, m, fa, fm, flm, left, tol / 2.0, depth + 1) +
                   step(f, p, m, b, fm, fb, frm, right, tol / 2.0, depth + 1);
        }
    };
    double fa = f(lo, param), fb = f(hi, param), fm = f(0.5 * (lo + hi), param);
    double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return Rec::step(f, param, lo, hi, fa, fb, fm, whole, tol, 0);
}

inline double chi_square_density(double x, double df) {
    double a = 0.5 * df;
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

// Upper tail of the chi-square distribution by quadrature on the lower tail.
inline double chi_square_survival_quadrature(double df, double x) {
    if (x <= 0.0) return 1.0;
    return 1.0 - simpson(&chi_square_density, df, 1e-12, x, 1e-13);
}

}  // namespace oracle

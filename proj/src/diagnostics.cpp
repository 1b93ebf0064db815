#include "ppassoc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppassoc/glrt.hpp"

namespace ppassoc {

std::vector<std::pair<double, double>> ecdf_table(std::span<const double> sorted_u) {
    if (sorted_u.empty()) throw std::invalid_argument("ecdf_table: empty sample");
    const double n = static_cast<double>(sorted_u.size());
    std::vector<std::pair<double, double>> knots;
    for (std::size_t i = 0; i < sorted_u.size(); ++i) {
        if (i + 1 < sorted_u.size() && sorted_u[i + 1] == sorted_u[i]) continue;
        knots.emplace_back(sorted_u[i], static_cast<double>(i + 1) / n);
    }
    return knots;
}

FisherResult fisher_combine(std::span<const double> u) {
    FisherResult result;
    double stat = 0.0;
    for (double x : u) {
        if (!(x >= 0.0) || !(x < 1.0)) {
            throw std::invalid_argument("fisher_combine: values must lie in [0, 1)");
        }
        if (x == 0.0) {
            result.degenerate = true;
        } else {
            stat += -2.0 * std::log(x);
        }
    }
    result.statistic = result.degenerate ? std::numeric_limits<double>::infinity() : stat;
    result.p_value = result.degenerate ? 0.0 : chi_square_survival(2.0 * static_cast<double>(u.size()), stat);
    return result;
}

double weighted_ks_plus(std::span<const double> sorted_u, const KsConfig& config) {
    if (!(config.gamma1 > 0.0) || !(config.gamma1 < config.gamma2) || !(config.gamma2 < 1.0)) {
        throw std::invalid_argument("weighted_ks_plus: need 0 < gamma1 < gamma2 < 1");
    }
    const std::size_t n = sorted_u.size();
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double best = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        double u = sorted_u[i - 1];
        double f_hat = static_cast<double>(i) / static_cast<double>(n);
        if (u > f_hat || u < config.gamma1 || u > config.gamma2) continue;
        double value = sqrt_n * (f_hat - u) / std::sqrt(u * (1.0 - u));
        best = std::max(best, value);
    }
    return best;
}

double restricted_statistic(std::span<const double> sorted_u, const KsConfig& config) {
    if (!(config.gamma1 > 0.0) || !(config.gamma1 < config.gamma2) || !(config.gamma2 < 1.0)) {
        throw std::invalid_argument("restricted_statistic: need 0 < gamma1 < gamma2 < 1");
    }
    const std::size_t n = sorted_u.size();
    double best_log = 0.0;
    bool any = false;
    for (std::size_t i = 1; i <= n; ++i) {
        double u = sorted_u[i - 1];
        if (u > static_cast<double>(i) / static_cast<double>(n)) continue;
        if (u < config.gamma1 || u > config.gamma2) continue;
        double value = log_ell(i, n, u);
        if (!any || value > best_log) best_log = value;
        any = true;
    }
    return any ? std::exp(best_log) : 1.0;
}

// Regularised incomplete gamma, series expansion (converges fast for x < a+1).
static double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularised upper incomplete gamma via Lentz continued fraction (x >= a+1).
static double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_survival(double df, double x) {
    if (!(df > 0.0)) throw std::invalid_argument("chi_square_survival: df must be positive");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double ks_distance_uniform(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("ks_distance_uniform: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, hi - values[i], values[i] - lo});
    }
    return d;
}

double ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < xs.size() || j < ys.size()) {
        double v = (i < xs.size() && (j >= ys.size() || xs[i] <= ys[j])) ? xs[i] : ys[j];
        while (i < xs.size() && xs[i] <= v) ++i;  // consume ties at v on both sides
        while (j < ys.size() && ys[j] <= v) ++j;
        double fx = static_cast<double>(i) / static_cast<double>(xs.size());
        double fy = static_cast<double>(j) / static_cast<double>(ys.size());
        d = std::max(d, std::abs(fx - fy));
    }
    return d;
}

double kolmogorov_critical(double alpha, std::size_t n) {
    // K(x) = 1 - 2 sum (-1)^{j-1} exp(-2 j^2 x^2); invert by bisection.
    if (n == 0) throw std::invalid_argument("kolmogorov_critical: n must be positive");
    auto survival = [](double x) {
        double s = 0.0;
        for (int j = 1; j <= 100; ++j) {
            double term = 2.0 * std::exp(-2.0 * static_cast<double>(j) * static_cast<double>(j) * x * x);
            s += (j % 2 == 1) ? term : -term;
            if (term < 1e-16) break;
        }
        return s;
    };
    double lo = 0.2, hi = 3.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (survival(mid) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

}  // namespace ppassoc

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ppassoc {

// Interval restriction for the weighted one-sided K-S statistic and its
// likelihood-ratio analogue. The weight is fixed at phi(x) = 1/(x(1-x)).
struct KsConfig {
    double gamma1 = 0.01;
    double gamma2 = 0.99;
};

// Step-function knots of the empirical CDF: one (value, fraction) pair per
// distinct value, for plotting against the diagonal.
std::vector<std::pair<double, double>> ecdf_table(std::span<const double> sorted_u);

struct FisherResult {
    double statistic = 0.0;  // -2 sum log u_i
    double p_value = 1.0;    // chi-square upper tail on 2n degrees of freedom
    bool degenerate = false; // some u_i was zero
};

FisherResult fisher_combine(std::span<const double> u);

// max over {i : u_i <= i/n, gamma1 <= u_i <= gamma2} of
// sqrt(n) (i/n - u_i) sqrt(phi(u_i)); zero when the set is empty.
double weighted_ks_plus(std::span<const double> sorted_u, const KsConfig& config);

// max ell_i over the same index set, one when the set is empty.
double restricted_statistic(std::span<const double> sorted_u, const KsConfig& config);

// Regularised incomplete gamma functions (series / continued-fraction split).
double gamma_p(double a, double x);  // lower
double gamma_q(double a, double x);  // upper

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_survival(double df, double x);

// Kolmogorov-Smirnov utilities shared by the experiments and tests.
double ks_distance_uniform(std::vector<double> values);              // sup |F_hat - x| on [0,1]
double ks_two_sample(std::vector<double> xs, std::vector<double> ys);
double kolmogorov_critical(double alpha, std::size_t n);             // asymptotic c(alpha)/sqrt(n)

}  // namespace ppassoc

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ppassoc/glrt.hpp"
#include "ppassoc/intensity.hpp"
#include "ppassoc/measure.hpp"
#include "ppassoc/rng.hpp"
#include "ppassoc/types.hpp"

namespace ppassoc {

struct PoissonCount {
    double rate = 1.0;
};
struct FixedCount {
    std::size_t n = 0;
};

// Null draws: event count from the Poisson rate (or fixed), positions iid with
// density r via the inverse of R.
PointPattern sample_null(const NullIntensity& intensity, PoissonCount count, RngSeed seed);
PointPattern sample_null(const NullIntensity& intensity, FixedCount count, RngSeed seed);

// Two-level multiplicative alternative around a source pattern: rate lambda1
// within response range tau of the most recent source event, lambda2 beyond.
// fixed_n switches from the Poisson count to placing exactly n iid points.
struct AlternativeSpec {
    PointPattern a;
    NullIntensity intensity;
    double tau = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::optional<std::size_t> fixed_n;
};

// Samples in rho-time: a two-level mixture on [0, 1) split at w = mu(tau) is
// mapped back through the generalised inverse of mu, then attributed to a
// source segment with probability proportional to the local density.
PointPattern sample_alternative(const AlternativeSpec& spec, RngSeed seed);

struct CalibrationConfig {
    NullIntensity intensity;
    PointPattern a;
    double rate = 50.0;
    std::size_t replicates = 2000;
    Mode mode = Mode::triggering;
    std::optional<double> tau_max;
    int threads = 1;
};

struct CalibrationSummary {
    std::size_t replicates = 0;
    double ks_distance = 0.0;
    double ks_critical_1pct = 0.0;
    double reject_rate_1pct = 0.0;
    double reject_rate_5pct = 0.0;
    std::size_t zero_event_replicates = 0;
    std::vector<double> p_values;
};

// Repeated null draws through the full test; the p-values should look uniform.
CalibrationSummary calibration_experiment(const CalibrationConfig& config, RngSeed seed);

// Reference configuration: non-uniform three-cell intensity on [0, 1), twenty
// source events, Poisson targets with mean fifty.
CalibrationConfig default_calibration_config();

struct Figure1Config {
    std::size_t n = 1000;
    double gamma1 = 0.01;
    double gamma2 = 0.99;
    std::size_t replicates = 1000;
    int threads = 1;
};

struct Figure1Result {
    std::vector<double> t_scaled;  // sorted sqrt(2n (T_restricted - 1)) per replicate
    std::vector<double> g_plus;    // sorted weighted one-sided K-S per replicate
    double sup_distance = 0.0;     // between the two empirical CDFs
};

// Null replicates of the interval-restricted statistic against the weighted
// K-S statistic; their empirical distributions should agree.
Figure1Result figure1_experiment(const Figure1Config& config, RngSeed seed);

struct ConsistencyConfig {
    double ratio = 3.0;  // lambda1 / lambda2
    double tau = 0.1;
    PointPattern a;
    NullIntensity intensity;
    std::vector<double> lambda_ladder;  // lambda2 values, increasing
    std::size_t replicates = 200;
    int threads = 1;
};

struct ConsistencyRow {
    double lambda2 = 0.0;
    double median_abs_error = 0.0;  // median |tau_hat - tau|
    double power_5pct = 0.0;
    std::size_t replicates = 0;
};

// Estimation error of tau_hat as the rates climb the ladder at fixed ratio.
std::vector<ConsistencyRow> consistency_experiment(const ConsistencyConfig& config, RngSeed seed);

}  // namespace ppassoc

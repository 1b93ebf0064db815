#include "ppassoc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppassoc/diagnostics.hpp"
#include "ppassoc/parallel.hpp"

namespace ppassoc {

namespace {

// Sorted draws can collide at double resolution; nudge rather than reject.
PointPattern pattern_from_draws(std::vector<double> times) {
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            times[i] = std::nextafter(times[i - 1], std::numeric_limits<double>::infinity());
        }
    }
    return PointPattern::from_sorted(std::move(times));
}

std::size_t draw_poisson(double mean, std::mt19937_64& engine) {
    std::poisson_distribution<long long> dist(mean);
    long long n = dist(engine);
    return n > 0 ? static_cast<std::size_t>(n) : 0;
}

}  // namespace

PointPattern sample_null(const NullIntensity& intensity, PoissonCount count, RngSeed seed) {
    if (!(count.rate >= 0.0)) throw std::invalid_argument("sample_null: rate must be nonnegative");
    auto engine = make_engine(seed);
    std::size_t n = draw_poisson(count.rate, engine);
    std::vector<double> times(n);
    for (double& t : times) t = intensity.inverse_cumulative(uniform_open01(engine));
    return pattern_from_draws(std::move(times));
}

PointPattern sample_null(const NullIntensity& intensity, FixedCount count, RngSeed seed) {
    auto engine = make_engine(seed);
    std::vector<double> times(count.n);
    for (double& t : times) t = intensity.inverse_cumulative(uniform_open01(engine));
    return pattern_from_draws(std::move(times));
}

PointPattern sample_alternative(const AlternativeSpec& spec, RngSeed seed) {
    if (!(spec.tau > 0.0)) throw std::invalid_argument("sample_alternative: tau must be positive");
    if (!(spec.lambda1 >= spec.lambda2) || !(spec.lambda2 >= 0.0)) {
        throw std::invalid_argument("sample_alternative: need lambda1 >= lambda2 >= 0");
    }

    ResponseMeasure mu(spec.a, spec.intensity, Mode::triggering);
    const double w = mu.value(spec.tau);
    const double total_mass = spec.lambda1 * w + spec.lambda2 * (1.0 - w);
    if (!(total_mass > 0.0)) {
        if (spec.fixed_n && *spec.fixed_n > 0) {
            throw std::invalid_argument("sample_alternative: cannot place events with zero total rate");
        }
        return PointPattern{};
    }
    const double p_triggered = spec.lambda1 * w / total_mass;

    auto engine = make_engine(seed);
    std::size_t n = spec.fixed_n ? *spec.fixed_n : draw_poisson(total_mass, engine);

    const auto& a = spec.a;
    const auto& r = spec.intensity;
    const ObservationWindow& window = r.window();
    const double max_reach = mu.max_response();

    std::vector<double> times;
    times.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = (uniform_open01(engine) < p_triggered) ? w * uniform_open01(engine)
                                                          : w + (1.0 - w) * uniform_open01(engine);
        double y = mu.inverse(x);
        if (y >= max_reach) y = std::nextafter(max_reach, 0.0);

        // Attribute the response time to a source segment with probability
        // proportional to the density at the landing point.
        std::vector<double> landing;
        std::vector<double> weight;
        double total_weight = 0.0;
        for (std::size_t s = 0; s < a.size(); ++s) {
            double reach = ((s + 1 < a.size()) ? a[s + 1] : window.end) - a[s];
            if (y >= reach) continue;
            landing.push_back(a[s] + y);
            weight.push_back(r.density_at(a[s] + y));
            total_weight += weight.back();
        }
        std::size_t pick = landing.size() - 1;
        if (total_weight > 0.0) {
            double target = uniform_open01(engine) * total_weight;
            double running = 0.0;
            for (std::size_t s = 0; s < landing.size(); ++s) {
                running += weight[s];
                if (target <= running) {
                    pick = s;
                    break;
                }
            }
        } else {
            // zero-density landing point (measure zero): any feasible segment
            pick = static_cast<std::size_t>(uniform_open01(engine) * static_cast<double>(landing.size()));
            pick = std::min(pick, landing.size() - 1);
        }
        times.push_back(landing[pick]);
    }
    return pattern_from_draws(std::move(times));
}

CalibrationSummary calibration_experiment(const CalibrationConfig& config, RngSeed seed) {
    if (config.replicates == 0) throw std::invalid_argument("calibration_experiment: need replicates");
    CalibrationSummary summary;
    summary.replicates = config.replicates;
    summary.p_values.resize(config.replicates);
    std::vector<unsigned char> empty_flags(config.replicates, 0);

    TestOptions options{config.mode, config.tau_max};
    parallel_for(config.replicates, config.threads, [&](std::size_t rep) {
        RngSeed rep_seed = substream(seed, rep);
        PointPattern b = sample_null(config.intensity, PoissonCount{config.rate}, rep_seed);
        GlrOutcome outcome = run_test(config.a, b, config.intensity, options);
        summary.p_values[rep] = outcome.p_value;
        empty_flags[rep] = outcome.n == 0 ? 1 : 0;
    });

    for (unsigned char f : empty_flags) summary.zero_event_replicates += f;
    std::size_t reject1 = 0, reject5 = 0;
    for (double p : summary.p_values) {
        if (p <= 0.01) ++reject1;
        if (p <= 0.05) ++reject5;
    }
    summary.reject_rate_1pct = static_cast<double>(reject1) / static_cast<double>(config.replicates);
    summary.reject_rate_5pct = static_cast<double>(reject5) / static_cast<double>(config.replicates);
    summary.ks_distance = ks_distance_uniform(summary.p_values);
    summary.ks_critical_1pct = kolmogorov_critical(0.01, config.replicates);
    return summary;
}

CalibrationConfig default_calibration_config() {
    CalibrationConfig config;
    config.intensity = NullIntensity::build({0.0, 0.3, 0.7, 1.0}, {2.0, 0.5, 1.2});

    auto engine = make_engine(RngSeed{0xA11CEULL});
    std::vector<double> a_times{0.0};
    for (int i = 0; i < 19; ++i) a_times.push_back(uniform_open01(engine));
    config.a = PointPattern::from_unsorted(std::move(a_times));

    config.rate = 50.0;
    config.replicates = 2000;
    return config;
}

Figure1Result figure1_experiment(const Figure1Config& config, RngSeed seed) {
    if (config.n == 0 || config.replicates == 0) {
        throw std::invalid_argument("figure1_experiment: need n and replicates");
    }
    Figure1Result result;
    result.t_scaled.resize(config.replicates);
    result.g_plus.resize(config.replicates);
    KsConfig ks{config.gamma1, config.gamma2};

    parallel_for(config.replicates, config.threads, [&](std::size_t rep) {
        auto engine = make_engine(substream(seed, rep));
        std::vector<double> u(config.n);
        for (double& x : u) x = uniform_open01(engine);
        std::sort(u.begin(), u.end());
        double t_restricted = restricted_statistic(u, ks);
        result.t_scaled[rep] = std::sqrt(2.0 * static_cast<double>(config.n) * (t_restricted - 1.0));
        result.g_plus[rep] = weighted_ks_plus(u, ks);
    });

    result.sup_distance = ks_two_sample(result.t_scaled, result.g_plus);
    std::sort(result.t_scaled.begin(), result.t_scaled.end());
    std::sort(result.g_plus.begin(), result.g_plus.end());
    return result;
}

std::vector<ConsistencyRow> consistency_experiment(const ConsistencyConfig& config, RngSeed seed) {
    // ratio == 1 runs the ladder under the null (no consistency expected)
    if (!(config.ratio >= 1.0)) throw std::invalid_argument("consistency_experiment: ratio must be at least one");
    std::vector<ConsistencyRow> rows;
    for (std::size_t rung = 0; rung < config.lambda_ladder.size(); ++rung) {
        double lambda2 = config.lambda_ladder[rung];
        AlternativeSpec spec;
        spec.a = config.a;
        spec.intensity = config.intensity;
        spec.tau = config.tau;
        spec.lambda1 = config.ratio * lambda2;
        spec.lambda2 = lambda2;

        RngSeed rung_seed = substream(seed, 0x1000 + rung);
        std::vector<double> errors(config.replicates);
        std::vector<unsigned char> rejected(config.replicates, 0);
        parallel_for(config.replicates, config.threads, [&](std::size_t rep) {
            RngSeed rep_seed = substream(rung_seed, rep);
            PointPattern b = sample_alternative(spec, rep_seed);
            GlrOutcome outcome = run_test(config.a, b, config.intensity, TestOptions{});
            errors[rep] = outcome.tau_hat ? std::abs(*outcome.tau_hat - config.tau)
                                          : std::numeric_limits<double>::infinity();
            rejected[rep] = outcome.p_value <= 0.05 ? 1 : 0;
        });

        std::sort(errors.begin(), errors.end());
        std::size_t half = config.replicates / 2;
        double median = (config.replicates % 2 == 1) ? errors[half]
                                                     : 0.5 * (errors[half - 1] + errors[half]);
        std::size_t hits = 0;
        for (unsigned char f : rejected) hits += f;

        ConsistencyRow row;
        row.lambda2 = lambda2;
        row.median_abs_error = median;
        row.power_5pct = static_cast<double>(hits) / static_cast<double>(config.replicates);
        row.replicates = config.replicates;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ppassoc

#include "ppassoc/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppassoc/parallel.hpp"

namespace ppassoc {

std::vector<std::size_t> bh_reject(std::span<const double> p_values, double q) {
    if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("bh_reject: q must lie in (0, 1)");
    const std::size_t m = p_values.size();
    std::vector<double> sorted(p_values.begin(), p_values.end());
    for (double p : sorted) {
        if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("bh_reject: p-values must lie in [0, 1]");
    }
    std::sort(sorted.begin(), sorted.end());

    double threshold = -1.0;
    for (std::size_t k = m; k >= 1; --k) {
        if (sorted[k - 1] <= q * static_cast<double>(k) / static_cast<double>(m)) {
            threshold = sorted[k - 1];
            break;
        }
    }
    std::vector<std::size_t> rejected;
    if (threshold < 0.0) return rejected;
    for (std::size_t i = 0; i < m; ++i) {
        if (p_values[i] <= threshold) rejected.push_back(i);
    }
    return rejected;
}

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::fdr_rejected: return "fdr-rejected";
        case Tier::nominal_005: return "nominal-0.05";
        default: return "not-significant";
    }
}

ScreenResult screen(const std::vector<PairInput>& pairs, const NullIntensity& intensity,
                    const ScreenOptions& options) {
    ScreenResult result;
    result.q = options.q;
    result.entries.resize(pairs.size());
    if (pairs.empty()) return result;

    // Validate up front: exceptions must not escape the parallel region.
    for (const PairInput& pair : pairs) {
        if (pair.a.empty()) {
            throw std::invalid_argument("screen: pair " + pair.source_id + "->" + pair.target_id + " has no source events");
        }
    }

    parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
        const PairInput& pair = pairs[i];
        ScreenEntry& entry = result.entries[i];
        entry.source_id = pair.source_id;
        entry.target_id = pair.target_id;

        NullIntensity local = intensity;
        PointPattern b = pair.b;
        if (options.test.mode == Mode::triggering) {
            double start = pair.a.front();
            if (start > intensity.window().start) {
                local = restrict_intensity(intensity, start, intensity.window().end);
            }
            if (options.clip_targets) {
                std::vector<double> kept;
                for (double t : pair.b.times()) {
                    if (t >= start) kept.push_back(t);
                }
                b = PointPattern::from_sorted(std::move(kept));
            }
        }
        entry.outcome = run_test(pair.a, b, local, options.test);
    });

    std::vector<double> p;
    p.reserve(result.entries.size());
    for (const ScreenEntry& e : result.entries) p.push_back(e.outcome.p_value);
    result.rejected = bh_reject(p, options.q);

    for (ScreenEntry& e : result.entries) {
        e.tier = (e.outcome.p_value < 0.05) ? Tier::nominal_005 : Tier::not_significant;
    }
    for (std::size_t idx : result.rejected) result.entries[idx].tier = Tier::fdr_rejected;
    return result;
}

TriggerReport triggering_report(const PointPattern& a, std::span<const std::string> a_payloads,
                                const PointPattern& b, std::span<const std::string> b_payloads,
                                const GlrOutcome& outcome) {
    TriggerReport report;
    if (a.empty() || b.empty()) {
        report.notice = "no source/target events to pair";
        return report;
    }

    // Closest source before a target: the target with the smallest response time.
    auto a_times = a.times();
    double best_lag = std::numeric_limits<double>::infinity();
    double trigger = 0.0;
    std::size_t trigger_idx = 0;
    for (double t : b.times()) {
        auto it = std::upper_bound(a_times.begin(), a_times.end(), t);
        if (it == a_times.begin()) continue;  // no source at or before this target
        double source = *(it - 1);
        if (t - source < best_lag) {
            best_lag = t - source;
            trigger = source;
            trigger_idx = static_cast<std::size_t>((it - 1) - a_times.begin());
        }
    }
    if (std::isinf(best_lag)) {
        report.notice = "no target event follows any source event";
        return report;
    }

    report.found = true;
    report.trigger_time = trigger;
    if (trigger_idx < a_payloads.size()) report.trigger_payload = a_payloads[trigger_idx];

    double tau = outcome.tau_hat.value_or(0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        double t = b[i];
        if (t < trigger || t > trigger + tau) continue;
        ReportEntry entry;
        entry.lag = t - trigger;
        entry.time = t;
        if (i < b_payloads.size()) entry.payload = b_payloads[i];
        report.responses.push_back(entry);
    }
    return report;
}

}  // namespace ppassoc

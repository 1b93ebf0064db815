#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppassoc/glrt.hpp"

namespace ppassoc {

// Benjamini-Hochberg step-up: indices of the rejected hypotheses at FDR level
// q. Ties at the boundary are grouped: everything at or below the winning
// sorted p-value is rejected.
std::vector<std::size_t> bh_reject(std::span<const double> p_values, double q);

enum class Tier { fdr_rejected, nominal_005, not_significant };

const char* tier_name(Tier t);

struct PairInput {
    std::string source_id;
    std::string target_id;
    PointPattern a;
    PointPattern b;
    std::vector<std::string> b_payloads;  // optional, parallel to b
};

struct ScreenEntry {
    std::string source_id;
    std::string target_id;
    GlrOutcome outcome;
    Tier tier = Tier::not_significant;
};

struct ScreenResult {
    std::vector<ScreenEntry> entries;
    double q = 0.1;
    std::vector<std::size_t> rejected;  // indices into entries
};

struct ScreenOptions {
    TestOptions test;
    double q = 0.1;
    int threads = 1;
    // Per pair the window is re-anchored at the pair's first source event and
    // the intensity renormalised over it; target events before that start are
    // dropped (triggering mode).
    bool clip_targets = true;
};

ScreenResult screen(const std::vector<PairInput>& pairs, const NullIntensity& intensity,
                    const ScreenOptions& options);

struct ReportEntry {
    double lag = 0.0;
    double time = 0.0;
    std::string payload;
};

struct TriggerReport {
    bool found = false;
    double trigger_time = 0.0;     // the source event of the closest pair
    std::string trigger_payload;
    std::vector<ReportEntry> responses;  // target events in [e, e + tau_hat]
    std::string notice;
};

// The closest (source, subsequent target) pair, then every target event within
// tau_hat after that source event, with lags.
TriggerReport triggering_report(const PointPattern& a, std::span<const std::string> a_payloads,
                                const PointPattern& b, std::span<const std::string> b_payloads,
                                const GlrOutcome& outcome);

}  // namespace ppassoc

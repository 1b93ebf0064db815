#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ppassoc/glrt.hpp"
#include "ppassoc/multiplicity.hpp"
#include "ppassoc/rng.hpp"
#include "ppassoc/simulate.hpp"
#include "ppassoc/types.hpp"

namespace ppassoc {

// One stream of a parsed event file, sorted by time with payloads carried
// alongside in the same order.
struct EventStream {
    std::string id;
    PointPattern pattern;
    std::vector<std::string> payloads;
};

// CSV with header `time[,stream][,payload]`. Duplicate timestamps within a
// stream are rejected with their row numbers unless jitter_eps is given, in
// which case duplicates are perturbed reproducibly from the seed.
std::vector<EventStream> parse_events(const std::filesystem::path& path,
                                      std::optional<double> jitter_eps = std::nullopt,
                                      RngSeed jitter_seed = {});

// CSV with header `breakpoint,density`; the final row carries the window end
// and its density is ignored.
NullIntensity parse_intensity(const std::filesystem::path& path);
void write_intensity(const std::filesystem::path& path, const NullIntensity& intensity);

// CSV with header `source,target`, one screened pair per row.
std::vector<std::pair<std::string, std::string>> parse_pairs(const std::filesystem::path& path);

void write_events(const std::filesystem::path& path, const PointPattern& pattern,
                  const std::string& stream_id = "");
void write_ecdf(const std::filesystem::path& path,
                const std::vector<std::pair<double, double>>& table);
void write_tier_matrix(const std::filesystem::path& path, const ScreenResult& result);

// CSV field quoting (RFC-style double quotes) for payload round trips.
std::string csv_quote(const std::string& field);
std::vector<std::string> csv_split(const std::string& line);

using json = nlohmann::json;

json to_json(const GlrOutcome& outcome);
GlrOutcome outcome_from_json(const json& j);

json to_json(const ScreenResult& result);
json to_json(const CalibrationSummary& summary);
json to_json(const Figure1Result& result);
json to_json(const TriggerReport& report);

}  // namespace ppassoc

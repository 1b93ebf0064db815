#include "ppassoc/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace ppassoc {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path.string());
    return out;
}

double parse_number(const std::string& field, std::size_t row) {
    try {
        std::size_t pos = 0;
        double value = std::stod(field, &pos);
        if (pos != field.size() || !std::isfinite(value)) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("row " + std::to_string(row) + ": malformed number '" + field + "'");
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"' && current.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

std::vector<EventStream> parse_events(const std::filesystem::path& path,
                                      std::optional<double> jitter_eps, RngSeed jitter_seed) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path.string() + ": empty file");
    auto header = csv_split(line);
    for (auto& h : header) h = trim(h);
    if (header.empty() || header[0] != "time") {
        throw std::invalid_argument(path.string() + ": first column must be 'time'");
    }
    bool has_stream = header.size() > 1 && header[1] == "stream";
    bool has_payload = (has_stream && header.size() > 2 && header[2] == "payload") ||
                       (!has_stream && header.size() > 1 && header[1] == "payload");
    if (header.size() > 1 + (has_stream ? 1u : 0u) + (has_payload ? 1u : 0u)) {
        throw std::invalid_argument(path.string() + ": unrecognised header columns");
    }

    struct Row {
        double time;
        std::string payload;
        std::size_t number;
    };
    std::vector<std::string> order;  // stream ids by first appearance
    std::map<std::string, std::vector<Row>> rows;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (trim(line).empty()) continue;
        auto fields = csv_split(line);
        std::size_t expected = 1 + (has_stream ? 1u : 0u) + (has_payload ? 1u : 0u);
        if (fields.size() < expected) {
            throw std::invalid_argument(path.string() + ": row " + std::to_string(row_number) + ": expected " + std::to_string(expected) + " fields");
        }
        Row row;
        row.time = parse_number(trim(fields[0]), row_number);
        row.number = row_number;
        std::string stream = has_stream ? trim(fields[1]) : "";
        if (has_payload) row.payload = fields[has_stream ? 2 : 1];
        if (rows.find(stream) == rows.end()) order.push_back(stream);
        rows[stream].push_back(row);
    }

    auto engine = make_engine(jitter_seed);
    std::vector<EventStream> streams;
    for (const std::string& id : order) {
        auto& stream_rows = rows[id];
        std::stable_sort(stream_rows.begin(), stream_rows.end(),
                         [](const Row& a, const Row& b) { return a.time < b.time; });
        if (jitter_eps) {
            for (Row& row : stream_rows) row.time += *jitter_eps * uniform_open01(engine);
            std::stable_sort(stream_rows.begin(), stream_rows.end(),
                             [](const Row& a, const Row& b) { return a.time < b.time; });
        }
        for (std::size_t i = 1; i < stream_rows.size(); ++i) {
            if (stream_rows[i].time == stream_rows[i - 1].time) {
                throw std::invalid_argument(path.string() + ": duplicate time " + std::to_string(stream_rows[i].time) +
                                            " in stream '" + id + "' (rows " + std::to_string(stream_rows[i - 1].number) +
                                            " and " + std::to_string(stream_rows[i].number) +
                                            "); rerun with --jitter to break ties");
            }
        }
        EventStream stream;
        stream.id = id;
        std::vector<double> times;
        times.reserve(stream_rows.size());
        for (const Row& row : stream_rows) {
            times.push_back(row.time);
            stream.payloads.push_back(row.payload);
        }
        stream.pattern = PointPattern::from_sorted(std::move(times));
        streams.push_back(std::move(stream));
    }
    return streams;
}

NullIntensity parse_intensity(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path.string() + ": empty file");
    auto header = csv_split(line);
    if (header.size() < 2 || trim(header[0]) != "breakpoint" || trim(header[1]) != "density") {
        throw std::invalid_argument(path.string() + ": expected header 'breakpoint,density'");
    }
    std::vector<double> breaks;
    std::vector<double> densities;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (trim(line).empty()) continue;
        auto fields = csv_split(line);
        if (fields.size() < 2) {
            throw std::invalid_argument(path.string() + ": row " + std::to_string(row_number) + ": expected two fields");
        }
        breaks.push_back(parse_number(trim(fields[0]), row_number));
        densities.push_back(parse_number(trim(fields[1]), row_number));
    }
    if (breaks.size() < 2) throw std::invalid_argument(path.string() + ": need at least two breakpoints");
    densities.pop_back();  // final row only carries the window end
    return NullIntensity::build(std::move(breaks), std::move(densities));
}

void write_intensity(const std::filesystem::path& path, const NullIntensity& intensity) {
    auto out = open_output(path);
    out << "breakpoint,density\n";
    out.precision(17);
    for (std::size_t j = 0; j + 1 < intensity.breakpoints().size(); ++j) {
        out << intensity.breakpoints()[j] << "," << intensity.densities()[j] << "\n";
    }
    out << intensity.breakpoints().back() << ",0\n";
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path.string() + ": empty file");
    auto header = csv_split(line);
    if (header.size() < 2 || trim(header[0]) != "source" || trim(header[1]) != "target") {
        throw std::invalid_argument(path.string() + ": expected header 'source,target'");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (trim(line).empty()) continue;
        auto fields = csv_split(line);
        if (fields.size() < 2) {
            throw std::invalid_argument(path.string() + ": row " + std::to_string(row_number) + ": expected two fields");
        }
        pairs.emplace_back(trim(fields[0]), trim(fields[1]));
    }
    return pairs;
}

void write_events(const std::filesystem::path& path, const PointPattern& pattern,
                  const std::string& stream_id) {
    auto out = open_output(path);
    out.precision(17);
    if (stream_id.empty()) {
        out << "time\n";
        for (double t : pattern.times()) out << t << "\n";
    } else {
        out << "time,stream\n";
        for (double t : pattern.times()) out << t << "," << csv_quote(stream_id) << "\n";
    }
}

void write_ecdf(const std::filesystem::path& path,
                const std::vector<std::pair<double, double>>& table) {
    auto out = open_output(path);
    out.precision(17);
    out << "u,ecdf\n";
    for (const auto& [u, f] : table) out << u << "," << f << "\n";
}

void write_tier_matrix(const std::filesystem::path& path, const ScreenResult& result) {
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    for (const ScreenEntry& e : result.entries) {
        if (std::find(sources.begin(), sources.end(), e.source_id) == sources.end()) sources.push_back(e.source_id);
        if (std::find(targets.begin(), targets.end(), e.target_id) == targets.end()) targets.push_back(e.target_id);
    }
    auto out = open_output(path);
    out << "source";
    for (const auto& t : targets) out << "," << csv_quote(t);
    out << "\n";
    for (const auto& s : sources) {
        out << csv_quote(s);
        for (const auto& t : targets) {
            std::string cell;
            for (const ScreenEntry& e : result.entries) {
                if (e.source_id == s && e.target_id == t) {
                    cell = tier_name(e.tier);
                    break;
                }
            }
            out << "," << cell;
        }
        out << "\n";
    }
}

namespace {

json number_or_null(double value) {
    if (std::isinf(value) || std::isnan(value)) return nullptr;
    return value;
}

json optional_number(const std::optional<double>& value) {
    if (!value) return nullptr;
    return number_or_null(*value);
}

}  // namespace

json to_json(const GlrOutcome& outcome) {
    json j;
    j["mode"] = mode_name(outcome.mode);
    j["n"] = outcome.n;
    j["log_t"] = number_or_null(outcome.log_t);
    j["t"] = std::isinf(outcome.log_t) ? json(nullptr) : json(std::exp(outcome.log_t));
    j["k_hat"] = outcome.k_hat ? json(*outcome.k_hat) : json(nullptr);
    j["tau_hat"] = optional_number(outcome.tau_hat);
    j["lambda1_hat"] = optional_number(outcome.lambda1_hat);
    j["lambda2_hat"] = optional_number(outcome.lambda2_hat);
    j["p_value"] = outcome.p_value;
    j["degenerate"] = outcome.degenerate;
    j["tau_max"] = optional_number(outcome.tau_max);
    j["u_max"] = optional_number(outcome.u_max);
    return j;
}

GlrOutcome outcome_from_json(const json& j) {
    GlrOutcome outcome;
    outcome.mode = j.at("mode").get<std::string>() == "correlation" ? Mode::correlation : Mode::triggering;
    outcome.n = j.at("n").get<std::size_t>();
    outcome.degenerate = j.at("degenerate").get<bool>();
    outcome.p_value = j.at("p_value").get<double>();
    outcome.log_t = j.at("log_t").is_null() ? std::numeric_limits<double>::infinity()
                                            : j.at("log_t").get<double>();
    if (!j.at("k_hat").is_null()) outcome.k_hat = j.at("k_hat").get<std::size_t>();
    if (!j.at("tau_hat").is_null()) outcome.tau_hat = j.at("tau_hat").get<double>();
    if (outcome.k_hat) {
        // a null lambda1 with k_hat present is the degenerate +inf sentinel
        outcome.lambda1_hat = j.at("lambda1_hat").is_null() ? std::numeric_limits<double>::infinity()
                                                            : j.at("lambda1_hat").get<double>();
        outcome.lambda2_hat = j.at("lambda2_hat").get<double>();
    }
    if (!j.at("tau_max").is_null()) outcome.tau_max = j.at("tau_max").get<double>();
    if (!j.at("u_max").is_null()) outcome.u_max = j.at("u_max").get<double>();
    return outcome;
}

json to_json(const ScreenResult& result) {
    json entries = json::array();
    for (const ScreenEntry& e : result.entries) {
        json entry;
        entry["source"] = e.source_id;
        entry["target"] = e.target_id;
        entry["outcome"] = to_json(e.outcome);
        entry["tier"] = tier_name(e.tier);
        entries.push_back(entry);
    }
    json j;
    j["q"] = result.q;
    j["entries"] = entries;
    j["rejected"] = result.rejected;
    return j;
}

json to_json(const CalibrationSummary& summary) {
    json j;
    j["replicates"] = summary.replicates;
    j["ks_distance"] = summary.ks_distance;
    j["ks_critical_1pct"] = summary.ks_critical_1pct;
    j["reject_rate_1pct"] = summary.reject_rate_1pct;
    j["reject_rate_5pct"] = summary.reject_rate_5pct;
    j["zero_event_replicates"] = summary.zero_event_replicates;
    return j;
}

json to_json(const Figure1Result& result) {
    json j;
    j["replicates"] = result.t_scaled.size();
    j["sup_distance"] = result.sup_distance;
    return j;
}

json to_json(const TriggerReport& report) {
    json j;
    j["found"] = report.found;
    if (!report.notice.empty()) j["notice"] = report.notice;
    if (report.found) {
        j["trigger_time"] = report.trigger_time;
        j["trigger_payload"] = report.trigger_payload;
        json responses = json::array();
        for (const ReportEntry& e : report.responses) {
            responses.push_back({{"lag", e.lag}, {"time", e.time}, {"payload", e.payload}});
        }
        j["responses"] = responses;
    }
    return j;
}

}  // namespace ppassoc

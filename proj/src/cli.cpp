#include "ppassoc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "ppassoc/diagnostics.hpp"
#include "ppassoc/io.hpp"
#include "ppassoc/multiplicity.hpp"
#include "ppassoc/parallel.hpp"
#include "ppassoc/simulate.hpp"

namespace ppassoc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

void emit_json(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot write file: " + out_path);
        out << j.dump(2) << "\n";
    }
}

EventStream load_single_stream(const std::string& path, std::optional<double> jitter, RngSeed seed) {
    auto streams = parse_events(path, jitter, seed);
    if (streams.size() != 1) {
        throw std::invalid_argument(path + ": expected a single event stream, found " + std::to_string(streams.size()));
    }
    return std::move(streams.front());
}

PointPattern clip_pattern(const PointPattern& p, const ObservationWindow& w,
                          std::vector<std::string>* payloads = nullptr) {
    std::vector<double> kept;
    std::vector<std::string> kept_payloads;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!w.contains(p[i])) continue;
        kept.push_back(p[i]);
        if (payloads && i < payloads->size()) kept_payloads.push_back((*payloads)[i]);
    }
    if (payloads) *payloads = std::move(kept_payloads);
    return PointPattern::from_sorted(std::move(kept));
}

struct PairedInputs {
    PointPattern a;
    PointPattern b;
    std::vector<std::string> a_payloads;
    std::vector<std::string> b_payloads;
    NullIntensity intensity;
};

// Shared ingestion for test/correlate/diagnose: loads both streams, settles
// the window and null intensity, optionally clipping targets to the window.
PairedInputs load_paired(const std::string& a_path, const std::string& b_path,
                         const std::string& intensity_path, double end_flag, double start_flag,
                         Mode mode, bool clip, std::optional<double> jitter, RngSeed seed) {
    PairedInputs in;
    EventStream a_stream = load_single_stream(a_path, jitter, seed);
    EventStream b_stream = load_single_stream(b_path, jitter, substream(seed, 1));
    if (a_stream.pattern.empty()) throw std::invalid_argument(a_path + ": no source events");
    in.a = std::move(a_stream.pattern);
    in.a_payloads = std::move(a_stream.payloads);
    in.b_payloads = std::move(b_stream.payloads);

    double start;
    double end;
    if (!intensity_path.empty()) {
        NullIntensity base = parse_intensity(intensity_path);
        end = base.window().end;
        if (mode == Mode::triggering) {
            start = in.a.front();
            if (start < base.window().start) {
                throw std::invalid_argument("first source event precedes the intensity window");
            }
            in.intensity = (start > base.window().start) ? restrict_intensity(base, start, end)
                                                         : std::move(base);
        } else {
            start = base.window().start;
            in.intensity = std::move(base);
        }
    } else {
        if (std::isnan(end_flag)) {
            throw std::invalid_argument("--end is required when no --intensity file is given");
        }
        end = end_flag;
        if (mode == Mode::triggering) {
            start = in.a.front();
        } else {
            start = std::isnan(start_flag)
                        ? std::min(in.a.front(), b_stream.pattern.empty() ? in.a.front() : b_stream.pattern.front())
                        : start_flag;
        }
        in.intensity = uniform_intensity(make_window(start, end));
    }

    in.b = clip ? clip_pattern(b_stream.pattern, in.intensity.window(), &in.b_payloads)
                : std::move(b_stream.pattern);
    return in;
}

struct CommonFlags {
    std::string out;
    bool strict = false;
    int threads = 0;
    std::uint64_t seed = 0;
};

void add_output_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out", flags.out, "Write the JSON result to this file instead of stdout");
    cmd->add_flag("--strict", flags.strict, "Exit with status 3 when the data are degenerate");
}

int finish(const json& j, const std::string& out, bool strict, bool degenerate) {
    emit_json(j, out);
    if (degenerate) {
        std::cerr << "warning: degenerate data (coincident source/target timestamps); "
                     "p-values at zero are an artefact of ties -- consider --jitter\n";
        if (strict) return kExitDegenerate;
    }
    return kExitOk;
}

// Expands `--config file` in place: each `key=value` (or `key value`) line
// becomes `--key value` unless that flag already appears, so explicit flags
// win. '#' starts a comment.
std::vector<std::string> expand_config_args(std::vector<std::string> args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        std::size_t span = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            span = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            span = 1;
        }
        if (span == 0) continue;

        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file: " + path);
        std::vector<std::string> injected;
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            auto sep = line.find_first_of("= \t");
            if (sep == std::string::npos) continue;
            auto strip = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string key = strip(line.substr(0, sep));
            std::string value = strip(line.substr(sep + 1));
            if (key.empty() || value.empty()) continue;
            std::string flag = "--" + key;
            bool overridden = false;
            for (const std::string& a : args) {
                if (a == flag || a.rfind(flag + "=", 0) == 0) overridden = true;
            }
            if (!overridden) {
                injected.push_back(flag);
                injected.push_back(value);
            }
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i + span));
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(i), injected.begin(), injected.end());
        break;
    }
    return args;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Exact likelihood-ratio tests for association between event streams"};
    app.require_subcommand(1);

    int exit_code = kExitOk;
    // listed for --help; the actual token is consumed by expand_config_args
    auto config_path_display = std::make_shared<std::string>();

    // ---- test / correlate ----------------------------------------------
    struct TestFlags {
        std::string a_path, b_path, intensity_path;
        double end = std::numeric_limits<double>::quiet_NaN();
        double start = std::numeric_limits<double>::quiet_NaN();
        double tau_max = std::numeric_limits<double>::quiet_NaN();
        double jitter = std::numeric_limits<double>::quiet_NaN();
        bool clip = false;
        bool report = false;
        CommonFlags common;
    };
    auto add_test_command = [&](const char* name, const char* help, Mode mode) {
        auto flags = std::make_shared<TestFlags>();
        CLI::App* cmd = app.add_subcommand(name, help);
        cmd->add_option("--a", flags->a_path, "Source events CSV (header: time[,payload])")->required();
        cmd->add_option("--b", flags->b_path, "Target events CSV")->required();
        cmd->add_option("--intensity", flags->intensity_path, "Null intensity CSV (header: breakpoint,density)");
        cmd->add_option("--end", flags->end, "Window end when no intensity file is given");
        if (mode == Mode::correlation) {
            cmd->add_option("--start", flags->start, "Window start (default: earliest event)");
        }
        cmd->add_option("--tau-max", flags->tau_max, "Cap the response range (same units as the data)");
        cmd->add_option("--jitter", flags->jitter, "Break duplicate timestamps by this much, seeded");
        cmd->add_flag("--clip", flags->clip, "Drop target events outside the window instead of failing");
        if (mode == Mode::triggering) {
            cmd->add_flag("--report", flags->report, "Include the triggered-event report in the output");
        }
        cmd->add_option("--seed", flags->common.seed, "Seed for --jitter");
        add_output_flags(cmd, flags->common);
        cmd->callback([&exit_code, flags, mode]() {
            std::optional<double> jitter;
            if (!std::isnan(flags->jitter)) jitter = flags->jitter;
            PairedInputs in = load_paired(flags->a_path, flags->b_path, flags->intensity_path,
                                          flags->end, flags->start, mode, flags->clip, jitter,
                                          RngSeed{flags->common.seed});
            TestOptions options;
            options.mode = mode;
            if (!std::isnan(flags->tau_max)) options.tau_max = flags->tau_max;
            GlrOutcome outcome = run_test(in.a, in.b, in.intensity, options);
            json j = to_json(outcome);
            if (flags->report) {
                j["report"] = to_json(triggering_report(in.a, in.a_payloads, in.b, in.b_payloads, outcome));
            }
            exit_code = finish(j, flags->common.out, flags->common.strict, outcome.degenerate);
        });
    };
    add_test_command("test", "Test whether source events trigger target events", Mode::triggering);
    add_test_command("correlate", "Test whether target events cluster around source events", Mode::correlation);

    // ---- diagnose --------------------------------------------------------
    {
        auto flags = std::make_shared<TestFlags>();
        auto gamma1 = std::make_shared<double>(0.01);
        auto gamma2 = std::make_shared<double>(0.99);
        auto ecdf_out = std::make_shared<std::string>();
        auto mode_name_flag = std::make_shared<std::string>("triggering");
        CLI::App* cmd = app.add_subcommand("diagnose", "Dependence diagnostics from the transformed sample");
        cmd->add_option("--a", flags->a_path)->required();
        cmd->add_option("--b", flags->b_path)->required();
        cmd->add_option("--intensity", flags->intensity_path);
        cmd->add_option("--end", flags->end);
        cmd->add_option("--mode", *mode_name_flag, "triggering or correlation")->check(CLI::IsMember({"triggering", "correlation"}));
        cmd->add_option("--gamma1", *gamma1, "Lower restriction for the weighted statistics");
        cmd->add_option("--gamma2", *gamma2, "Upper restriction for the weighted statistics");
        cmd->add_option("--ecdf-out", *ecdf_out, "Write the ECDF table as CSV (u,ecdf)");
        cmd->add_option("--jitter", flags->jitter);
        cmd->add_flag("--clip", flags->clip);
        cmd->add_option("--seed", flags->common.seed);
        add_output_flags(cmd, flags->common);
        cmd->callback([&exit_code, flags, gamma1, gamma2, ecdf_out, mode_name_flag]() {
            Mode mode = (*mode_name_flag == "correlation") ? Mode::correlation : Mode::triggering;
            std::optional<double> jitter;
            if (!std::isnan(flags->jitter)) jitter = flags->jitter;
            PairedInputs in = load_paired(flags->a_path, flags->b_path, flags->intensity_path,
                                          flags->end, flags->start, mode, flags->clip, jitter,
                                          RngSeed{flags->common.seed});
            TransformedSample sample = transform(in.a, in.b, in.intensity, mode);
            if (sample.size() == 0) throw std::invalid_argument("diagnose: no target events in the window");

            KsConfig ks{*gamma1, *gamma2};
            FisherResult fisher = fisher_combine(sample.u);
            json j;
            j["mode"] = mode_name(mode);
            j["n"] = sample.size();
            j["u"] = sample.u;
            j["fisher_statistic"] = std::isinf(fisher.statistic) ? json(nullptr) : json(fisher.statistic);
            j["fisher_p_value"] = fisher.p_value;
            j["weighted_ks_plus"] = weighted_ks_plus(sample.u, ks);
            j["restricted_statistic"] = restricted_statistic(sample.u, ks);
            j["gamma1"] = ks.gamma1;
            j["gamma2"] = ks.gamma2;
            j["degenerate"] = sample.degenerate || fisher.degenerate;
            if (!ecdf_out->empty()) write_ecdf(*ecdf_out, ecdf_table(sample.u));
            exit_code = finish(j, flags->common.out, flags->common.strict, j["degenerate"].get<bool>());
        });
    }

    // ---- screen ----------------------------------------------------------
    {
        struct ScreenFlags {
            std::string events_path, pairs_path, intensity_path, matrix_out;
            double end = std::numeric_limits<double>::quiet_NaN();
            double tau_max = std::numeric_limits<double>::quiet_NaN();
            double jitter = std::numeric_limits<double>::quiet_NaN();
            double q = 0.1;
            bool report = false;
            CommonFlags common;
        };
        auto flags = std::make_shared<ScreenFlags>();
        CLI::App* cmd = app.add_subcommand("screen", "Run all pairwise triggering tests with FDR control");
        cmd->add_option("--events", flags->events_path, "Multi-stream events CSV (header: time,stream[,payload])")->required();
        cmd->add_option("--pairs", flags->pairs_path, "Pairs CSV (header: source,target)")->required();
        cmd->add_option("--intensity", flags->intensity_path);
        cmd->add_option("--end", flags->end);
        cmd->add_option("--q", flags->q, "False discovery rate level");
        cmd->add_option("--tau-max", flags->tau_max);
        cmd->add_option("--jitter", flags->jitter);
        cmd->add_option("--matrix-out", flags->matrix_out, "Write the tier matrix as CSV");
        cmd->add_flag("--report", flags->report, "Attach triggered-event reports for FDR rejections");
        cmd->add_option("--seed", flags->common.seed);
        cmd->add_option("--threads", flags->common.threads, "Worker threads (0 = all cores)")
            ->envname("PPASSOC_THREADS");
        add_output_flags(cmd, flags->common);
        cmd->callback([&exit_code, flags]() {
            std::optional<double> jitter;
            if (!std::isnan(flags->jitter)) jitter = flags->jitter;
            auto streams = parse_events(flags->events_path, jitter, RngSeed{flags->common.seed});
            auto find_stream = [&](const std::string& id) -> const EventStream& {
                for (const auto& s : streams) {
                    if (s.id == id) return s;
                }
                throw std::invalid_argument("stream '" + id + "' not present in " + flags->events_path);
            };

            double min_time = std::numeric_limits<double>::infinity();
            double max_time = -std::numeric_limits<double>::infinity();
            for (const auto& s : streams) {
                if (!s.pattern.empty()) {
                    min_time = std::min(min_time, s.pattern.front());
                    max_time = std::max(max_time, s.pattern.back());
                }
            }
            NullIntensity base;
            if (!flags->intensity_path.empty()) {
                base = parse_intensity(flags->intensity_path);
            } else {
                if (std::isnan(flags->end)) {
                    throw std::invalid_argument("--end is required when no --intensity file is given");
                }
                if (!(min_time < flags->end)) throw std::invalid_argument("--end must exceed every event time");
                base = uniform_intensity(make_window(min_time, flags->end));
            }

            std::vector<PairInput> inputs;
            for (const auto& [source, target] : parse_pairs(flags->pairs_path)) {
                const EventStream& sa = find_stream(source);
                const EventStream& sb = find_stream(target);
                PairInput pi;
                pi.source_id = source;
                pi.target_id = target;
                pi.a = sa.pattern;
                pi.b = sb.pattern;
                pi.b_payloads = sb.payloads;
                inputs.push_back(std::move(pi));
            }

            ScreenOptions options;
            options.q = flags->q;
            options.threads = flags->common.threads;
            if (!std::isnan(flags->tau_max)) options.test.tau_max = flags->tau_max;
            ScreenResult result = screen(inputs, base, options);

            json j = to_json(result);
            if (flags->report) {
                json reports = json::array();
                for (std::size_t idx : result.rejected) {
                    const PairInput& pi = inputs[idx];
                    const EventStream& sa = find_stream(pi.source_id);
                    json r = to_json(triggering_report(pi.a, sa.payloads, pi.b, pi.b_payloads,
                                                       result.entries[idx].outcome));
                    r["source"] = pi.source_id;
                    r["target"] = pi.target_id;
                    reports.push_back(r);
                }
                j["reports"] = reports;
            }
            if (!flags->matrix_out.empty()) write_tier_matrix(flags->matrix_out, result);
            bool degenerate = std::any_of(result.entries.begin(), result.entries.end(),
                                          [](const ScreenEntry& e) { return e.outcome.degenerate; });
            exit_code = finish(j, flags->common.out, flags->common.strict, degenerate);
        });
    }

    // ---- simulate ----------------------------------------------------------
    {
        struct SimulateFlags {
            std::string kind = "null";
            std::string intensity_path, a_path, out_csv;
            double end = std::numeric_limits<double>::quiet_NaN();
            double rate = 50.0;
            long long fixed_n = -1;
            double tau = 0.0, lambda1 = 0.0, lambda2 = 0.0;
            CommonFlags common;
        };
        auto flags = std::make_shared<SimulateFlags>();
        CLI::App* cmd = app.add_subcommand("simulate", "Generate synthetic event logs");
        cmd->add_option("--config", *config_path_display, "Read options from a key=value file (flags win)");
        cmd->add_option("--kind", flags->kind, "null or alt")->check(CLI::IsMember({"null", "alt"}));
        cmd->add_option("--intensity", flags->intensity_path);
        cmd->add_option("--end", flags->end, "Window end for a uniform intensity");
        cmd->add_option("--rate", flags->rate, "Poisson mean event count");
        cmd->add_option("--fixed-n", flags->fixed_n, "Place exactly this many events instead");
        cmd->add_option("--a", flags->a_path, "Source events CSV (alt kind)");
        cmd->add_option("--tau", flags->tau, "Triggered range (alt kind)");
        cmd->add_option("--lambda1", flags->lambda1, "Rate inside the triggered range (alt kind)");
        cmd->add_option("--lambda2", flags->lambda2, "Rate outside the triggered range (alt kind)");
        cmd->add_option("--seed", flags->common.seed);
        cmd->add_option("--events-out", flags->out_csv, "Write the events CSV here")->required();
        cmd->callback([&exit_code, flags]() {
            NullIntensity intensity;
            if (!flags->intensity_path.empty()) {
                intensity = parse_intensity(flags->intensity_path);
            } else {
                if (std::isnan(flags->end)) throw std::invalid_argument("--end or --intensity is required");
                intensity = uniform_intensity(make_window(0.0, flags->end));
            }
            PointPattern events;
            if (flags->kind == "null") {
                events = flags->fixed_n >= 0
                             ? sample_null(intensity, FixedCount{static_cast<std::size_t>(flags->fixed_n)},
                                           RngSeed{flags->common.seed})
                             : sample_null(intensity, PoissonCount{flags->rate}, RngSeed{flags->common.seed});
            } else {
                if (flags->a_path.empty()) throw std::invalid_argument("--a is required for --kind alt");
                EventStream a_stream = load_single_stream(flags->a_path, std::nullopt, RngSeed{});
                AlternativeSpec spec;
                spec.a = std::move(a_stream.pattern);
                spec.intensity = intensity;
                spec.tau = flags->tau;
                spec.lambda1 = flags->lambda1;
                spec.lambda2 = flags->lambda2;
                if (flags->fixed_n >= 0) spec.fixed_n = static_cast<std::size_t>(flags->fixed_n);
                events = sample_alternative(spec, RngSeed{flags->common.seed});
            }
            write_events(flags->out_csv, events);
            exit_code = kExitOk;
        });
    }

    // ---- calibrate ----------------------------------------------------------
    {
        struct CalibrateFlags {
            std::string intensity_path, a_path, p_out;
            std::size_t replicates = 2000;
            double rate = 50.0;
            CommonFlags common;
        };
        auto flags = std::make_shared<CalibrateFlags>();
        CLI::App* cmd = app.add_subcommand("calibrate", "Check null p-value uniformity by simulation");
        cmd->add_option("--config", *config_path_display, "Read options from a key=value file (flags win)");
        cmd->add_option("--replicates", flags->replicates);
        cmd->add_option("--rate", flags->rate, "Poisson mean target count per replicate");
        cmd->add_option("--intensity", flags->intensity_path, "Override the built-in non-uniform intensity");
        cmd->add_option("--a", flags->a_path, "Override the built-in source pattern");
        cmd->add_option("--p-out", flags->p_out, "Write simulated p-values as CSV");
        cmd->add_option("--seed", flags->common.seed);
        cmd->add_option("--threads", flags->common.threads)->envname("PPASSOC_THREADS");
        add_output_flags(cmd, flags->common);
        cmd->callback([&exit_code, flags]() {
            CalibrationConfig config = default_calibration_config();
            config.replicates = flags->replicates;
            config.rate = flags->rate;
            config.threads = flags->common.threads;
            if (!flags->intensity_path.empty()) config.intensity = parse_intensity(flags->intensity_path);
            if (!flags->a_path.empty()) {
                config.a = load_single_stream(flags->a_path, std::nullopt, RngSeed{}).pattern;
            }
            if (config.a.empty() || config.a.front() != config.intensity.window().start) {
                throw std::invalid_argument("calibrate: source pattern must start at the window start");
            }
            CalibrationSummary summary = calibration_experiment(config, RngSeed{flags->common.seed});
            if (!flags->p_out.empty()) {
                std::ofstream out(flags->p_out);
                if (!out) throw std::invalid_argument("cannot write file: " + flags->p_out);
                out.precision(17);
                out << "p\n";
                for (double p : summary.p_values) out << p << "\n";
            }
            emit_json(to_json(summary), flags->common.out);
            exit_code = kExitOk;
        });
    }

    // ---- figure1 ----------------------------------------------------------
    {
        struct Figure1Flags {
            Figure1Config config;
            std::string t_out, g_out;
            CommonFlags common;
        };
        auto flags = std::make_shared<Figure1Flags>();
        CLI::App* cmd = app.add_subcommand("figure1", "Compare the restricted statistic against the weighted K-S statistic under the null");
        cmd->add_option("--config", *config_path_display, "Read options from a key=value file (flags win)");
        cmd->add_option("--n", flags->config.n, "Sample size per replicate");
        cmd->add_option("--gamma1", flags->config.gamma1);
        cmd->add_option("--gamma2", flags->config.gamma2);
        cmd->add_option("--replicates", flags->config.replicates);
        cmd->add_option("--t-out", flags->t_out, "Write the ECDF of the scaled statistic as CSV");
        cmd->add_option("--g-out", flags->g_out, "Write the ECDF of the weighted K-S statistic as CSV");
        cmd->add_option("--seed", flags->common.seed);
        cmd->add_option("--threads", flags->common.threads)->envname("PPASSOC_THREADS");
        add_output_flags(cmd, flags->common);
        cmd->callback([&exit_code, flags]() {
            flags->config.threads = flags->common.threads;
            Figure1Result result = figure1_experiment(flags->config, RngSeed{flags->common.seed});
            auto to_table = [](const std::vector<double>& sorted) {
                std::vector<std::pair<double, double>> table;
                for (std::size_t i = 0; i < sorted.size(); ++i) {
                    table.emplace_back(sorted[i], static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
                }
                return table;
            };
            if (!flags->t_out.empty()) write_ecdf(flags->t_out, to_table(result.t_scaled));
            if (!flags->g_out.empty()) write_ecdf(flags->g_out, to_table(result.g_plus));
            emit_json(to_json(result), flags->common.out);
            exit_code = kExitOk;
        });
    }

    try {
        std::vector<std::string> expanded = expand_config_args(args);
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return exit_code;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace ppassoc::cli

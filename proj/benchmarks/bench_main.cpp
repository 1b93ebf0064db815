// Times the experiment kernels on the serial reference path (threads = 1)
// against the OpenMP path, and checks the outputs stay bit-identical.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>

#include "ppassoc/multiplicity.hpp"
#include "ppassoc/parallel.hpp"
#include "ppassoc/simulate.hpp"

using namespace ppassoc;

namespace {

template <typename F>
double time_seconds(F&& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name, serial,
                parallel, serial / parallel, identical ? "bit-identical" : "OUTPUT MISMATCH");
}

}  // namespace

int main() {
    const int workers = std::max(2, resolve_threads(0));  // always take the OpenMP path
    std::printf("parallel path uses %d thread(s)\n\n", workers);

    {
        CalibrationConfig config = default_calibration_config();
        config.replicates = 1000;
        CalibrationSummary serial_summary, parallel_summary;
        config.threads = 1;
        double serial = time_seconds([&] { serial_summary = calibration_experiment(config, RngSeed{1}); });
        config.threads = workers;
        double parallel = time_seconds([&] { parallel_summary = calibration_experiment(config, RngSeed{1}); });
        report("calibration (1000 reps)", serial, parallel,
               serial_summary.p_values == parallel_summary.p_values);
    }

    {
        Figure1Config config;
        config.replicates = 500;
        config.n = 1000;
        Figure1Result serial_result, parallel_result;
        config.threads = 1;
        double serial = time_seconds([&] { serial_result = figure1_experiment(config, RngSeed{2}); });
        config.threads = workers;
        double parallel = time_seconds([&] { parallel_result = figure1_experiment(config, RngSeed{2}); });
        report("figure1 (500 x n=1000)", serial, parallel,
               serial_result.t_scaled == parallel_result.t_scaled &&
                   serial_result.g_plus == parallel_result.g_plus);
    }

    {
        auto r = uniform_intensity(make_window(0.0, 1.0));
        std::vector<PairInput> pairs;
        for (int i = 0; i < 12; ++i) {
            std::vector<double> a_times{0.0};
            auto tail = sample_null(r, FixedCount{19}, substream(RngSeed{3}, 2 * i));
            a_times.insert(a_times.end(), tail.times().begin(), tail.times().end());
            auto a = PointPattern::from_unsorted(a_times);
            AlternativeSpec spec;
            spec.a = a;
            spec.intensity = r;
            spec.tau = 0.002;
            spec.lambda1 = 500.0;
            spec.lambda2 = 50.0;
            auto b = sample_alternative(spec, substream(RngSeed{3}, 2 * i + 1));
            for (int j = 0; j < 12; ++j) {
                PairInput pi;
                pi.source_id = std::to_string(j);
                pi.target_id = std::to_string(i);
                pi.a = a;
                pi.b = b;
                pairs.push_back(std::move(pi));
            }
        }
        ScreenOptions options;
        ScreenResult serial_result, parallel_result;
        options.threads = 1;
        double serial = time_seconds([&] { serial_result = screen(pairs, r, options); });
        options.threads = workers;
        double parallel = time_seconds([&] { parallel_result = screen(pairs, r, options); });
        bool identical = serial_result.rejected == parallel_result.rejected;
        for (std::size_t i = 0; identical && i < serial_result.entries.size(); ++i) {
            identical = serial_result.entries[i].outcome.p_value == parallel_result.entries[i].outcome.p_value;
        }
        report("screen (144 pairs)", serial, parallel, identical);
    }

    return 0;
}

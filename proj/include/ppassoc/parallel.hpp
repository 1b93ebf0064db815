#pragma once

#include <cstddef>
#include <exception>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppassoc {

// Resolves a thread-count request: 0 means "use available parallelism",
// anything else is taken literally. Callers pass 1 to force the serial
// reference path.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs body(i) for i in [0, count). threads == 1 uses a plain loop (the serial
// reference used by the tests and the benchmark); otherwise iterations are
// spread over an OpenMP team. Bodies must be independent: each iteration may
// only write to its own slots. The first exception thrown by any iteration is
// captured and rethrown after the loop joins.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    threads = resolve_threads(threads);
#ifdef _OPENMP
    if (threads > 1) {
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(ppassoc_parallel_for_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return;
    }
#endif
    for (std::size_t i = 0; i < count; ++i) {
        body(i);
    }
}

}  // namespace ppassoc

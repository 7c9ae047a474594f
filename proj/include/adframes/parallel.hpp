#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adframes {

// Execution policy for the data-parallel kernels (per-grid-point work, sweep
// rows). Serial is the reference path; Parallel runs the same body under
// OpenMP. Bodies write to disjoint slots, so both paths produce identical
// output and the reduction order never matters.
enum class Exec { Serial, Parallel };

inline int hardware_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs body(i) for i in [0, n). workers <= 0 picks the OpenMP default.
/// The first exception thrown by any iteration is rethrown after the loop.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& body, Exec exec = Exec::Parallel, int workers = 0) {
#ifdef _OPENMP
    if (exec == Exec::Parallel && n > 1) {
        std::exception_ptr first_error;
        std::atomic<bool> failed{false};
        const int nthreads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                body(i);
            } catch (...) {
                bool expected = false;
                if (failed.compare_exchange_strong(expected, true)) {
                    first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)workers;
#endif
    (void)exec;
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

} // namespace adframes

#ifndef CFAUDIT_EXEC_HPP
#define CFAUDIT_EXEC_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cfaudit {

/**
 * Execution policy for the data-parallel kernels (world enumeration,
 * per-input constraint extraction, per-example augmentation, sampled
 * evaluation). Serial is the default and the reference: every kernel
 * produces identical results under both policies, which the test suite
 * asserts and the bench target measures.
 */
enum class Exec { serial, parallel };

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/**
 * Runs fn(0..n-1). Under Exec::parallel the iterations run on OpenMP
 * threads; each index must write only to its own output slot. If bodies
 * throw, the exception from the lowest index is rethrown after the loop,
 * matching what a serial run would have raised first.
 */
template <typename Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
#ifdef _OPENMP
    if (exec == Exec::parallel && n > 1) {
        std::exception_ptr first_error;
        std::size_t first_error_index = n;
        std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (static_cast<std::size_t>(i) < first_error_index) {
                    first_error_index = static_cast<std::size_t>(i);
                    first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#endif
    (void)exec;
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace cfaudit

#endif

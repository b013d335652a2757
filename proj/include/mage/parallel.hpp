#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace mage {

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Data-parallel loop over [0, count). The callable must only touch its own
// slot of any shared output; exceptions are captured on the worker and
// rethrown once on the calling thread.
template <class F>
void par_for(std::size_t count, F&& fn) {
#if defined(_OPENMP)
    std::exception_ptr err;
    std::mutex err_mu;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < (long long)count; ++i) {
        try {
            fn((std::size_t)i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
#else
    for (std::size_t i = 0; i < count; ++i) fn(i);
#endif
}

} // namespace mage

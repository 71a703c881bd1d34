#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace rr {

/// Calls body(begin, end) on `threads` contiguous slices of [0, n). The
/// slicing only affects scheduling: callers write results by index so the
/// outcome is independent of the thread count. The first exception thrown
/// by any slice is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body)
{
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t slices = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(slices);
    pool.reserve(slices);
    for (std::size_t s = 0; s < slices; ++s) {
        const std::size_t begin = n * s / slices;
        const std::size_t end = n * (s + 1) / slices;
        pool.emplace_back([&, s, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[s] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Thread count from an explicit value, else ROBUST_RATES_THREADS, else 1.
unsigned resolve_threads(unsigned requested);

} // namespace rr

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace viewmetric {

/// Maximum number of worker threads used by parallel loops.
/// Defaults to the hardware concurrency; capped via set_thread_cap()
/// (the CLI wires VIEWMETRIC_THREADS to this).
int thread_cap();
void set_thread_cap(int n);

namespace detail {
inline int& thread_cap_storage() {
    static int cap = std::max(1u, std::thread::hardware_concurrency());
    return cap;
}
}  // namespace detail

inline int thread_cap() { return detail::thread_cap_storage(); }

inline void set_thread_cap(int n) { detail::thread_cap_storage() = std::max(1, n); }

/// Runs body(begin, end) over contiguous chunks of [0, n).
/// Chunks are disjoint, so loops whose bodies write only to their own
/// index range produce the same result for any thread count.
template <typename Body>
void parallel_for(std::ptrdiff_t n, Body&& body) {
    if (n <= 0) return;
    const int workers = static_cast<int>(std::min<std::ptrdiff_t>(thread_cap(), n));
    if (workers <= 1) {
        body(std::ptrdiff_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::ptrdiff_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::ptrdiff_t begin = w * chunk;
        const std::ptrdiff_t end = std::min<std::ptrdiff_t>(begin + chunk, n);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace viewmetric

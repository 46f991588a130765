#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nsi3d {

inline unsigned default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n > 0 ? n : 1;
}

// Splits [0, n) into contiguous chunks, one worker thread per chunk.
// Each index is processed by exactly one thread, so results are independent
// of the worker count as long as fn touches only its own indices.
inline void parallel_for(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace nsi3d

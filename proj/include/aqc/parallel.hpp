#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace aqc {

inline int hardware_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Worker count from the THREADS environment variable, else the hardware.
inline int default_thread_count() {
    if (const char* env = std::getenv("THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return hardware_threads();
}

/// Runs fn(chunk_index) for chunk_index in [0, chunk_count). Work is split
/// only at chunk boundaries and callers write into per-chunk slots, so the
/// combined result is bit-identical for any thread count. fn must not throw.
template <class F>
void parallel_for_chunks(std::size_t chunk_count, int threads, F&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), chunk_count);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunk_count; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t c = next.fetch_add(1); c < chunk_count; c = next.fetch_add(1)) fn(c);
        });
    for (std::thread& t : pool) t.join();
}

}  // namespace aqc

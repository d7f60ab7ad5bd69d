#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace copra {

// Worker count resolution: explicit argument beats the COPRA_THREADS
// environment variable, which beats hardware concurrency. Outputs stay
// deterministic for any value: parallel loops write to per-index slots and
// are reduced sequentially afterwards.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("COPRA_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && n >= 1) return static_cast<unsigned>(std::min<long>(n, 4096));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(i) for every i in [0,n). Tasks must be independent and must not
// throw; anything to be reduced afterwards belongs in slot i of a
// preallocated buffer.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    if (n == 0) return;
    threads = static_cast<unsigned>(std::min<size_t>(threads, n));
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace copra

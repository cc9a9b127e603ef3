#ifndef ZEROONE_PARALLEL_HPP
#define ZEROONE_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace zeroone {

// Worker count: ZO_THREADS env var, default 1. Trials own disjoint output
// slots and per-trial substreams, so results are identical for any count.
inline int worker_count() {
    const char* env = std::getenv("ZO_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    if (v < 1) return 1;
    return v;
}

inline void parallel_trials(int trials, const std::function<void(int)>& body) {
    int workers = worker_count();
    if (workers <= 1 || trials <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int count = workers < trials ? workers : trials;
    pool.reserve(size_t(count));
    for (int w = 0; w < count; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                int t = next.fetch_add(1);
                if (t >= trials) return;
                body(t);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace zeroone

#endif

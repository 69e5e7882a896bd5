#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace nhberry {

inline int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Static index striding over [0, n); each item writes only its own output
// slot, so results are independent of scheduling and worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
    const int w = std::min<std::size_t>(resolve_workers(workers), n == 0 ? 1 : n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int tid = 0; tid < w; ++tid) {
        pool.emplace_back([&, tid] {
            for (std::size_t i = tid; i < n; i += w) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace nhberry

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace cntrap {

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// visited once; callers store results by index so output order is fixed.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace cntrap

/// @file parallel.hpp
/// @brief Minimal static-partition parallel map used by the sweeps.
#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace kinreg {

/// Calls body(i) for i in [0, n) on up to hardware_concurrency threads.
/// Each index is visited exactly once; callers write results into
/// per-index slots and reduce sequentially afterwards, which keeps
/// reductions independent of scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
}

}  // namespace kinreg

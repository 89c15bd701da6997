#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "portphase/network.hpp"

namespace portphase::detail {

// Runs body(i) for i in [0, n) on up to worker_threads() threads. Callers write
// results into per-index slots so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(size_t n, Body&& body) {
    const int T = std::min<int>(worker_threads(), int(std::max<size_t>(1, n)));
    if (T <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            try {
                for (size_t i = size_t(t); i < n; i += size_t(T)) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace portphase::detail

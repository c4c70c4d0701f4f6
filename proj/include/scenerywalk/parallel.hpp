#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scenerywalk {

/// Evaluates fn(i) for i in [0, n) on up to `jobs` threads and returns the
/// results indexed by i. Each replica owns its random stream, so the result
/// vector (and any reduction done over it in index order) does not depend
/// on `jobs`.
template <class Fn>
auto run_replicas(std::uint64_t n, int jobs, Fn&& fn) -> std::vector<decltype(fn(std::uint64_t{}))> {
    using T = decltype(fn(std::uint64_t{}));
    std::vector<T> out(n);
    const auto workers = static_cast<std::uint64_t>(std::max(1, jobs));
    if (workers == 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::uint64_t i = lo; i < hi; ++i) out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace scenerywalk

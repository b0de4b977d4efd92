#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace insights {

/// Runs `fn(i)` for i in [0, count) on at most `parallelism` threads.
/// The first exception (lowest index) is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t parallelism, Fn&& fn)
{
    if (count == 0) return;
    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace insights

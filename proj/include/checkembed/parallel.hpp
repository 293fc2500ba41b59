#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace checkembed::detail {

/// Runs fn(i) for every i in [0, count) on up to `workers` threads.
/// Returns one slot per index holding the exception that index raised, if any.
/// Results must be written by fn into index-keyed storage, so the outcome does
/// not depend on scheduling.
template <typename Fn>
std::vector<std::exception_ptr> run_indexed(std::size_t count, std::size_t workers, Fn&& fn) {
    std::vector<std::exception_ptr> failures(count);
    if (count == 0) {
        return failures;
    }
    workers = std::clamp<std::size_t>(workers, 1, count);

    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    if (workers == 1) {
        drain();
        return failures;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(drain);
    }
    drain();
    pool.clear();
    return failures;
}

} // namespace checkembed::detail

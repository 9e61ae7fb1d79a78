#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace apqho {

/// Worker count used by every parallel surface in the library. Initialised
/// from APQHO_WORKERS when set, otherwise from hardware_concurrency().
int worker_count() noexcept;
void set_worker_count(int workers) noexcept;

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

/// Static block partition of [0, n) over the configured workers. Each index is
/// visited exactly once and results must not depend on the partition, so
/// callers write to disjoint slots only. The exception raised by the lowest
/// failing block is rethrown. Calls made from inside a worker run serially.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_block = 64) {
    const std::size_t workers = static_cast<std::size_t>(std::max(1, worker_count()));
    const std::size_t blocks = std::min(workers, std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_block)));
    if (blocks <= 1 || detail::inside_parallel_region) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(blocks);
    std::vector<std::thread> threads;
    threads.reserve(blocks - 1);
    auto run = [&](std::size_t b) {
        const bool outer = detail::inside_parallel_region;
        detail::inside_parallel_region = true;
        const std::size_t lo = n * b / blocks;
        const std::size_t hi = n * (b + 1) / blocks;
        try {
            body(lo, hi);
        } catch (...) {
            errors[b] = std::current_exception();
        }
        detail::inside_parallel_region = outer;
    };
    for (std::size_t b = 1; b < blocks; ++b) threads.emplace_back(run, b);
    run(0);
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace apqho

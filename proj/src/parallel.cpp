#include "apqho/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace apqho {
namespace {

int initial_workers() noexcept {
    if (const char* env = std::getenv("APQHO_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& workers_slot() noexcept {
    static std::atomic<int> slot{initial_workers()};
    return slot;
}

}  // namespace

int worker_count() noexcept { return workers_slot().load(std::memory_order_relaxed); }

void set_worker_count(int workers) noexcept {
    workers_slot().store(workers > 0 ? workers : 1, std::memory_order_relaxed);
}

}  // namespace apqho

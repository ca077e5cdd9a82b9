#include "imscale/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace imscale::parallel {

namespace {

std::atomic<int>& budget_slot() {
    static std::atomic<int> budget{0};  // 0 = unset, resolve lazily
    return budget;
}

int resolve_default() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int thread_budget() {
    int b = budget_slot().load(std::memory_order_relaxed);
    if (b == 0) {
        b = resolve_default();
        budget_slot().store(b, std::memory_order_relaxed);
    }
    return b;
}

void set_thread_budget(int threads) {
    budget_slot().store(std::max(1, threads), std::memory_order_relaxed);
}

void for_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (count == 0)
        return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), count);
    if (workers <= 1) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::atomic_flag error_seen = ATOMIC_FLAG_INIT;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                if (!error_seen.test_and_set())
                    first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

}  // namespace imscale::parallel

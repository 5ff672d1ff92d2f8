#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace latprof {

// THREADS env var caps worker parallelism; defaults to the logical core count.
int resolve_threads();

// Runs fn(i) for i in [0, trials) on a work-stealing index counter.  Each
// trial writes only its own slot, and aggregation happens afterwards in
// index order, so results are identical for any thread count.  The lowest
// failing trial's exception is rethrown after all workers join.
template <class Fn>
void run_trials(std::int64_t trials, int threads, Fn&& fn) {
    if (trials <= 0) return;
    if (threads <= 1) {
        for (std::int64_t i = 0; i < trials; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::int64_t first_error_trial = -1;

    auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= trials) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error_trial < 0 || i < first_error_trial) {
                    first_error_trial = i;
                    first_error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace latprof

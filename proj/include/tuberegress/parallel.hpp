#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tuberegress {

inline unsigned effective_jobs(unsigned requested, size_t n_items) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned jobs = (requested == 0) ? hw : requested;
    if (jobs > n_items) jobs = static_cast<unsigned>(n_items);
    return jobs == 0 ? 1 : jobs;
}

// Run fn(i) for i in [0, n). Work items must be independent; any seeds they
// use are pre-derived by index, so the schedule cannot change results.
// The first exception thrown by a worker is rethrown on the calling thread.
inline void parallel_for(size_t n, unsigned n_jobs, const std::function<void(size_t)>& fn) {
    n_jobs = effective_jobs(n_jobs, n);
    if (n == 0) return;
    if (n_jobs <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_jobs);
    for (unsigned t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace tuberegress

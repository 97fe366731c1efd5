#ifndef PCS_PARALLEL_HPP
#define PCS_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pcs {

/// Runs fn(0..n_tasks-1) on up to `workers` threads. Tasks are independent;
/// results must be written to pre-sized slots keyed by task index so the
/// outcome cannot depend on completion order. The lowest-index exception is
/// rethrown after all threads join.
inline void parallel_for(std::size_t n_tasks, int workers,
                         const std::function<void(std::size_t)>& fn) {
    if (n_tasks == 0)
        return;
    const std::size_t n_threads =
        std::min<std::size_t>(std::max(workers, 1), n_tasks);
    if (n_threads == 1) {
        for (std::size_t i = 0; i < n_tasks; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = n_tasks;
    std::exception_ptr err;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (err)
        std::rethrow_exception(err);
}

} // namespace pcs

#endif

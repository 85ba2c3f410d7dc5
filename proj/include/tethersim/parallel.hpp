#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tethersim {

/// Runs task(i) for i in [0, n_tasks) on up to `workers` threads. Tasks must write only
/// to their own output slot; the caller reduces in index order, so results do not
/// depend on the worker count. The first exception thrown by a task is rethrown.
template <typename Task>
void parallel_for(std::size_t n_tasks, std::size_t workers, Task&& task)
{
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n_tasks, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) {
            task(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_tasks) {
                return;
            }
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n_tasks);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace tethersim

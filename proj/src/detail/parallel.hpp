#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rbp::detail
{

/*!
 * Run fn(i) for i in [0, count) on up to `threads` workers.
 *
 * Work is handed out by an atomic counter. Callers write results into
 * per-index slots, so the outcome never depends on scheduling. The first
 * exception thrown by any task is rethrown after all workers stop.
 */
template<class F>
void parallel_for(std::size_t count, int threads, F&& fn)
{
    std::size_t const workers = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(threads, 1)), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed))
        {
            std::size_t const i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace rbp::detail

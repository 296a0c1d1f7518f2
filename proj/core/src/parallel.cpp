#include "cpboot/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cpboot {

namespace {

std::atomic<int> g_max_threads{0};

int default_threads() {
    if (const char* env = std::getenv("CPBOOT_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) {
            return parsed;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

thread_local bool t_in_parallel_region = false;

}  // namespace

void set_max_threads(int threads) noexcept {
    g_max_threads.store(threads > 0 ? threads : 0, std::memory_order_relaxed);
}

int max_threads() noexcept {
    const int configured = g_max_threads.load(std::memory_order_relaxed);
    return configured > 0 ? configured : default_threads();
}

namespace detail {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    if (count == 0) {
        return;
    }
    const auto limit = static_cast<std::size_t>(max_threads());
    const std::size_t workers = std::min(limit, count);
    if (t_in_parallel_region || workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&] {
        const bool was_nested = t_in_parallel_region;
        t_in_parallel_region = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count || failed.load(std::memory_order_relaxed)) {
                break;
            }
            try {
                body(i);
            } catch (...) {
                const std::scoped_lock lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
            }
        }
        t_in_parallel_region = was_nested;
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) {
            pool.emplace_back(run);
        }
        run();
    }  // jthread destructors join

    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace detail
}  // namespace cpboot

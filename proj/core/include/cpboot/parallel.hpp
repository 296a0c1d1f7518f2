#pragma once

#include <cstddef>
#include <functional>

namespace cpboot {

/// Caps the worker threads used by the engine's internal loops. 0 restores
/// the default (CPBOOT_THREADS environment variable, else hardware
/// concurrency). Results never depend on the thread count.
void set_max_threads(int threads) noexcept;

int max_threads() noexcept;

namespace detail {

/// Runs body(0) .. body(count-1), possibly across several threads. The body
/// must write results into index-keyed slots; the assignment of indices to
/// workers is unspecified. Calls nested inside a running parallel_for
/// execute serially on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace detail
}  // namespace cpboot

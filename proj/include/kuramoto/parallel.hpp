#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace kuramoto {

/// Worker count for row loops, read once from KURAMOTO_THREADS (default 1).
std::size_t configured_threads();

/// Runs body(begin, end) over disjoint chunks of [0, count). Falls back to a
/// single call when one thread is configured or the range is small.
template <typename Body>
void parallel_for_rows(std::size_t count, Body&& body, std::size_t min_chunk = 1024) {
    const std::size_t threads = std::min(configured_threads(), count / std::max<std::size_t>(min_chunk, 1));
    if (threads <= 1) {
        body(std::size_t{0}, count);
        return;
    }
    const std::size_t chunk = (count + threads - 1) / threads;
    std::vector<std::jthread> workers;
    workers.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) {
        const std::size_t begin = std::min(count, t * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        workers.emplace_back([&body, begin, end] { body(begin, end); });
    }
    body(std::size_t{0}, std::min(count, chunk));
}

}  // namespace kuramoto

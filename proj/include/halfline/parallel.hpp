#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace halfline {

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on up to
/// `threads` workers. Each index is visited by exactly one worker, so any
/// per-index reduction order is independent of the thread count.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin < end) {
            pool.emplace_back([&fn, begin, end] { fn(begin, end); });
        }
    }
    fn(std::size_t{0}, std::min(n, chunk));
}

} // namespace halfline

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hyperclust {

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, n) into fixed chunks of `chunk` items and calls
// fn(chunk_index, begin, end) for each, on up to `workers` threads. Chunk
// boundaries do not depend on the worker count, so per-chunk results that
// are stitched together by chunk index are deterministic.
template <typename Fn>
void for_each_chunk(std::size_t n, std::size_t chunk, unsigned workers, Fn&& fn) {
    if (n == 0)
        return;
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), chunks));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks)
                return;
            try {
                fn(c, c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = chunks;
                return;
            }
        }
    };

    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(run);
    }
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace hyperclust

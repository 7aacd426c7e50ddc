#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace wlab {

inline unsigned default_thread_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Runs fn(begin, end) over [0, count) split into fixed-size chunks handed out
// by an atomic counter. Chunk boundaries depend only on (count, chunk), never
// on the number of threads, so any output indexed by item stays identical
// across thread counts.
inline void parallel_for_chunks(std::size_t count, std::size_t chunk, unsigned threads,
                                const std::function<void(std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    if (chunk == 0) chunk = 1;
    std::size_t n_chunks = (count + chunk - 1) / chunk;
    if (threads <= 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) fn(c * chunk, std::min(count, (c + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            fn(c * chunk, std::min(count, (c + 1) * chunk));
        }
    };
    std::vector<std::thread> pool;
    unsigned n_threads = std::min<std::size_t>(threads, n_chunks);
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// Deterministic map/reduce: per-chunk partial results land in a slot indexed
// by chunk, then reduce runs sequentially in chunk order. Result is
// bit-identical for any thread count.
template <typename R>
R parallel_reduce_ordered(std::size_t count, std::size_t chunk, unsigned threads, R init,
                          const std::function<R(std::size_t, std::size_t)>& map,
                          const std::function<R(R, R)>& reduce) {
    if (count == 0) return init;
    if (chunk == 0) chunk = 1;
    std::size_t n_chunks = (count + chunk - 1) / chunk;
    std::vector<R> parts(n_chunks, init);
    parallel_for_chunks(count, chunk, threads, [&](std::size_t b, std::size_t e) {
        parts[b / chunk] = map(b, e);
    });
    R acc = init;
    for (std::size_t c = 0; c < n_chunks; ++c) acc = reduce(acc, parts[c]);
    return acc;
}

}  // namespace wlab

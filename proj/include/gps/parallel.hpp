#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace gps {

// Deterministic work splitting: the chunk grid depends only on `n_chunks`,
// never on the worker count, so per-chunk partial results can be combined in
// chunk order and the total is bit-identical for 1 and N workers.
inline int effective_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk_index) for chunk_index in [0, n_chunks). Chunks are assigned
// to workers round-robin by index; fn must not touch another chunk's state.
inline void parallel_for_chunks(std::size_t n_chunks, int workers,
                                const std::function<void(std::size_t)>& fn) {
    int w = effective_workers(workers);
    if (w <= 1 || n_chunks <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    if (static_cast<std::size_t>(w) > n_chunks) w = static_cast<int>(n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t c = t; c < n_chunks; c += static_cast<std::size_t>(w)) fn(c);
        });
    }
    for (auto& th : pool) th.join();
}

// Splits [0, n) into chunks of at most `chunk_size` items.
struct ChunkGrid {
    std::size_t n, chunk_size, n_chunks;
    ChunkGrid(std::size_t n_, std::size_t chunk_size_)
        : n(n_), chunk_size(chunk_size_),
          n_chunks(n_ == 0 ? 0 : (n_ + chunk_size_ - 1) / chunk_size_) {}
    std::size_t begin(std::size_t c) const { return c * chunk_size; }
    std::size_t end(std::size_t c) const {
        std::size_t e = (c + 1) * chunk_size;
        return e < n ? e : n;
    }
};

// Kahan-compensated accumulator; used wherever long sums of mixed magnitude
// must be deterministic and accurate in a fixed order.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace gps

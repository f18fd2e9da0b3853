#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace texflow {

/// Number of workers to use for `jobs` requested (0 = hardware).
inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Fixed-size chunk decomposition. The chunk boundaries depend only on n,
// never on the worker count, so any chunk-ordered reduction is
// reproducible across --jobs settings.
inline constexpr std::size_t kParallelChunk = 2048;

/// Run fn(begin, end) over [0, n) in fixed chunks on `jobs` workers.
/// fn must only write to per-index or per-chunk slots.
template <class Fn>
void parallel_for_chunks(std::size_t n, int jobs, Fn&& fn) {
    jobs = resolve_jobs(jobs);
    const std::size_t nchunks = (n + kParallelChunk - 1) / kParallelChunk;
    if (n == 0) return;
    if (jobs <= 1 || nchunks <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) {
            const std::size_t b = c * kParallelChunk;
            fn(b, std::min(n, b + kParallelChunk));
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            const std::size_t b = c * kParallelChunk;
            fn(b, std::min(n, b + kParallelChunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

/// Run n independent coarse tasks on `jobs` workers (one task per index).
/// Task results must be written to per-index slots; collection order is
/// then deterministic no matter how tasks were scheduled.
template <class Fn>
void parallel_tasks(std::size_t n, int jobs, Fn&& fn) {
    jobs = resolve_jobs(jobs);
    if (n == 0) return;
    if (jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int w = std::min<int>(jobs, static_cast<int>(n));
    pool.reserve(static_cast<std::size_t>(w));
    for (int j = 0; j < w; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

/// Deterministic all-of over [0, n): returns true iff pred(i) for every i.
/// Workers may stop early once any predicate fails; the result is a pure
/// AND so early exit cannot change it.
template <class Pred>
bool parallel_all_of(std::size_t n, int jobs, Pred&& pred) {
    std::atomic<bool> ok{true};
    parallel_for_chunks(n, jobs, [&](std::size_t b, std::size_t e) {
        if (!ok.load(std::memory_order_relaxed)) return;
        for (std::size_t i = b; i < e; ++i) {
            if (!pred(i)) {
                ok.store(false, std::memory_order_relaxed);
                return;
            }
        }
    });
    return ok.load();
}

}  // namespace texflow

#pragma once

// Minimal fork-join helpers. Work is split into contiguous chunks whose
// results never depend on the thread count: loops only write to indices they
// own, and reductions sum fixed-size blocks in ascending block order.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace gpair {

struct Execution {
    unsigned threads = 1;
    // Echoed in run logs; all kernels in this library are order-preserving,
    // so this only affects tooling that records wall-clock data.
    bool deterministic = false;
};

inline unsigned threads_from_env() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GPAIR_THREADS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw * 4);
        } catch (...) {
        }
    }
    return hw;
}

inline Execution& default_execution() {
    static Execution ex{threads_from_env(), false};
    return ex;
}

/// Calls body(lo, hi) over disjoint chunks covering [begin, end).
template <class Body>
void parallel_for(std::size_t begin, std::size_t end, Body&& body,
                  std::size_t min_chunk = 1, const Execution& ex = default_execution()) {
    if (end <= begin) return;
    const std::size_t n = end - begin;
    std::size_t workers = std::max<std::size_t>(1, ex.threads);
    workers = std::min(workers, std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
    if (workers == 1) {
        body(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](std::size_t lo, std::size_t hi) {
        try {
            body(lo, hi);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        std::size_t lo = begin + w * step;
        std::size_t hi = std::min(end, lo + step);
        if (lo < hi) pool.emplace_back(run, lo, hi);
    }
    run(begin, std::min(end, begin + step));
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

inline constexpr std::size_t kReductionBlock = 4096;

/// Deterministic sum of term(i) for i in [0, n).
template <class Term>
double parallel_sum(std::size_t n, Term&& term, const Execution& ex = default_execution()) {
    const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
    parallel_for(
        0, blocks,
        [&](std::size_t b0, std::size_t b1) {
            for (std::size_t b = b0; b < b1; ++b) {
                double s = 0.0;
                const std::size_t hi = std::min(n, (b + 1) * kReductionBlock);
                for (std::size_t i = b * kReductionBlock; i < hi; ++i) s += term(i);
                partial[b] = s;
            }
        },
        1, ex);
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace gpair

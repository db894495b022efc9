#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace coxinv {

// COXINV_THREADS caps worker threads; defaults to the hardware count.
inline int thread_budget() {
    static const int cached = [] {
        unsigned hw = std::thread::hardware_concurrency();
        int n = hw == 0 ? 1 : static_cast<int>(hw);
        if (const char* env = std::getenv("COXINV_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) n = v;
        }
        return n;
    }();
    return cached;
}

// fn(i) for i in [0, n); results returned in index order, so reductions over
// them are deterministic regardless of scheduling.
template <class F>
auto parallel_map(int n, F&& fn) -> std::vector<decltype(fn(0))> {
    using R = decltype(fn(0));
    std::vector<R> out(static_cast<size_t>(std::max(n, 0)));
    if (n <= 0) return out;
    int workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            int i;
            while ((i = next.fetch_add(1)) < n && !failed.load()) {
                try {
                    out[static_cast<size_t>(i)] = fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(err);
    return out;
}

}  // namespace coxinv

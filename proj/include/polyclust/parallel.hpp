#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace polyclust {

/// Worker cap from POLYCLUST_THREADS; unset or 0 means hardware concurrency.
inline unsigned thread_budget() {
    const char* env = std::getenv("POLYCLUST_THREADS");
    if (env != nullptr) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace detail {
inline thread_local bool in_parallel_worker = false;
} // namespace detail

/// Runs f(i) for i in [0, n). Each work item must write only to its own
/// output slot; results are then identical for any thread count. Nested
/// calls from inside a worker run serially (no thread explosion). The first
/// exception thrown by a worker is rethrown on the calling thread.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    const unsigned budget = thread_budget();
    if (detail::in_parallel_worker || budget <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(budget, n));
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            detail::in_parallel_worker = true;
            try {
                for (std::size_t i = w; i < n; i += workers) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace polyclust

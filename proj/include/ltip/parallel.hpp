#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace ltip {

/// Worker count used when a config asks for "all cores".
inline int default_thread_count() noexcept {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs body(begin, end) over contiguous row ranges covering [0, rows).
/// Each row is processed by exactly one call, so a body that writes only
/// its own rows produces the same result for any thread count.
template <typename Body>
void for_each_row_tile(int rows, int threads, Body&& body) {
    const int workers = std::clamp(threads, 1, std::max(rows, 1));
    if (workers == 1 || rows < 2) {
        body(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (rows + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(rows, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace ltip

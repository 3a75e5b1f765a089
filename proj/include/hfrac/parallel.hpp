#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace hfrac {

// Static contiguous split of [0, n) over `threads` workers. Callers write
// per-index results only, so the output never depends on the split.
template <typename F>
void parallel_for(std::size_t n, int threads, const F& body) {
    const std::size_t T = std::max<std::size_t>(1, std::min<std::size_t>(threads < 1 ? 1 : threads, n));
    if (T == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(T);
    const std::size_t chunk = (n + T - 1) / T;
    for (std::size_t k = 0; k < T; ++k) {
        const std::size_t b = k * chunk, e = std::min(n, b + chunk);
        pool.emplace_back([&, k, b, e] {
            try {
                if (b < e) body(b, e);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Pairwise (tree) summation in a fixed order.
inline double tree_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return tree_sum(v.first(h)) + tree_sum(v.subspan(h));
}

} // namespace hfrac

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace polytomo {

using real = double;
using cplx = std::complex<double>;

inline constexpr real kPi = std::numbers::pi_v<real>;

// Error taxonomy used across the library.  Everything derives from
// std::runtime_error so callers can catch coarsely.
struct domain_error_pt : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct definiteness_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct tangency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct non_simple_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct chart_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct coverage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pairwise (cascade) summation: deterministic and accurate independent of
// how the inputs were produced.
template <class T>
T pairwise_sum(std::span<const T> v) {
    const std::size_t n = v.size();
    if (n == 0) return T{};
    if (n <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

// Data-parallel map over [0, n).  Each index writes only its own slot, so
// results are identical for any thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned threads = 1) {
    if (threads <= 1 || n < 2 * threads) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Least-squares slope of y against x.
inline real fit_slope(std::span<const real> x, std::span<const real> y) {
    const std::size_t n = x.size();
    real mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= real(n);
    my /= real(n);
    real num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

inline real sqr(real x) { return x * x; }

}  // namespace polytomo

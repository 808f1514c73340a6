#pragma once

#include "polytomo/common.hpp"

namespace polytomo {

struct QuadRule {
    std::vector<real> nodes;    // in [-1, 1]
    std::vector<real> weights;
};

// Gauss-Legendre rule on [-1,1] by Newton iteration on the Legendre
// polynomial (Golub-Welsch is overkill at these sizes).
inline QuadRule gauss_legendre(int n) {
    QuadRule q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess.
        real x = std::cos(kPi * (real(i) + 0.75) / (real(n) + 0.5));
        real pp = 0;
        for (int it = 0; it < 100; ++it) {
            real p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1);
            real dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[n - 1 - i] = x;
        q.weights[n - 1 - i] = 2 / ((1 - x * x) * pp * pp);
    }
    return q;
}

inline QuadRule scaled_rule(const QuadRule& base, real a, real b) {
    QuadRule q = base;
    const real mid = (a + b) / 2, half = (b - a) / 2;
    for (auto& x : q.nodes) x = mid + half * x;
    for (auto& w : q.weights) w *= half;
    return q;
}

// Composite Gauss-Legendre on [a,b] with `panels` panels of `order` points.
template <class F>
auto integrate_gl(F&& f, real a, real b, int panels, int order = 4)
    -> decltype(f(real{})) {
    using R = decltype(f(real{}));
    static thread_local int cached_order = -1;
    static thread_local QuadRule cached;
    if (cached_order != order) {
        cached = gauss_legendre(order);
        cached_order = order;
    }
    std::vector<R> vals;
    vals.reserve(std::size_t(panels) * order);
    const real w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const real lo = a + p * w;
        for (int k = 0; k < order; ++k) {
            const real t = lo + w * (cached.nodes[k] + 1) / 2;
            vals.push_back(f(t) * (cached.weights[k] * w / 2));
        }
    }
    return pairwise_sum(std::span<const R>(vals));
}

// Composite Simpson (odd number of samples).
template <class F>
auto integrate_simpson(F&& f, real a, real b, int n_intervals) -> decltype(f(real{})) {
    using R = decltype(f(real{}));
    if (n_intervals % 2) ++n_intervals;
    const real h = (b - a) / n_intervals;
    std::vector<R> vals;
    vals.reserve(n_intervals + 1);
    for (int i = 0; i <= n_intervals; ++i) {
        real c = (i == 0 || i == n_intervals) ? 1 : (i % 2 ? 4 : 2);
        vals.push_back(f(a + i * h) * (c * h / 3));
    }
    return pairwise_sum(std::span<const R>(vals));
}

}  // namespace polytomo

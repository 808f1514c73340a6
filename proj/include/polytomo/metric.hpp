#pragma once

#include "polytomo/domain.hpp"

#include <array>

namespace polytomo {

namespace detail {
// Finite-difference step for first derivatives of a quantity with the given
// length scale: eps^(1/3) * scale.
inline real fd_step(real scale = 1.0) {
    return std::cbrt(std::numeric_limits<real>::epsilon()) * scale;
}
}  // namespace detail

// Christoffel symbols Gamma^i_{jk}; symmetric in (j,k).
struct Christoffels {
    // c[i][j][k]
    std::array<std::array<std::array<real, 2>, 2>, 2> c{};
    real operator()(int i, int j, int k) const { return c[i][j][k]; }
};

// A transversal simple metric g0 on a star-shaped region D in R^2, supplied
// as callables.  First/second derivatives may be analytic; otherwise a
// central finite-difference fallback is used and flagged.
class MetricField2D {
public:
    using MatFn = std::function<Mat2(Vec2)>;
    using DMatFn = std::function<std::array<Mat2, 2>(Vec2)>;       // (d1 g0, d2 g0)
    using D2MatFn = std::function<std::array<Mat2, 3>(Vec2)>;      // (d11, d12, d22)

    static constexpr real kEpsPd = 1e-8;   // definiteness floor
    static constexpr real kTauCapFactor = 100.0;  // exit-time cap, x diameter

    MetricField2D(StarDomain dom, MatFn g0, DMatFn dg0 = nullptr, D2MatFn d2g0 = nullptr)
        : domain_(std::move(dom)),
          g0_(std::move(g0)),
          dg0_(std::move(dg0)),
          d2g0_(std::move(d2g0)) {}

    static MetricField2D euclidean_disk() {
        return MetricField2D(StarDomain::unit_disk(), [](Vec2) { return Mat2::identity(); },
                             [](Vec2) { return std::array<Mat2, 2>{Mat2{}, Mat2{}}; },
                             [](Vec2) { return std::array<Mat2, 3>{Mat2{}, Mat2{}, Mat2{}}; });
    }

    // Conformal metric exp(2*u(x)) * I with analytic derivatives of u.
    static MetricField2D conformal(StarDomain dom, std::function<real(Vec2)> u,
                                   std::function<Vec2(Vec2)> du,
                                   std::function<Mat2(Vec2)> d2u) {
        auto g = [u](Vec2 x) {
            const real e = std::exp(2 * u(x));
            return Mat2{e, 0, e};
        };
        auto dg = [u, du](Vec2 x) {
            const real e = std::exp(2 * u(x));
            const Vec2 g1 = du(x);
            return std::array<Mat2, 2>{Mat2{2 * e * g1.x, 0, 2 * e * g1.x},
                                       Mat2{2 * e * g1.y, 0, 2 * e * g1.y}};
        };
        auto d2g = [u, du, d2u](Vec2 x) {
            const real e = std::exp(2 * u(x));
            const Vec2 g1 = du(x);
            const Mat2 h = d2u(x);
            auto scal = [e](real v) { return Mat2{2 * e * v, 0, 2 * e * v}; };
            return std::array<Mat2, 3>{scal(h.a11 + 2 * g1.x * g1.x),
                                       scal(h.a12 + 2 * g1.x * g1.y),
                                       scal(h.a22 + 2 * g1.y * g1.y)};
        };
        return MetricField2D(std::move(dom), g, dg, d2g);
    }

    const StarDomain& domain() const { return domain_; }
    bool has_analytic_d1() const { return bool(dg0_); }
    bool has_analytic_d2() const { return bool(d2g0_); }

    Mat2 at(Vec2 x) const { return g0_(x); }

    std::array<Mat2, 2> d1(Vec2 x) const {
        if (dg0_) return dg0_(x);
        const real h = detail::fd_step();
        std::array<Mat2, 2> out;
        out[0] = (g0_({x.x + h, x.y}) - g0_({x.x - h, x.y})) * (1 / (2 * h));
        out[1] = (g0_({x.x, x.y + h}) - g0_({x.x, x.y - h})) * (1 / (2 * h));
        return out;
    }

    std::array<Mat2, 3> d2(Vec2 x) const {
        if (d2g0_) return d2g0_(x);
        const real h = std::sqrt(std::sqrt(std::numeric_limits<real>::epsilon()));
        std::array<Mat2, 3> out;
        out[0] = (g0_({x.x + h, x.y}) + g0_({x.x - h, x.y}) - g0_(x) * 2) * (1 / (h * h));
        out[2] = (g0_({x.x, x.y + h}) + g0_({x.x, x.y - h}) - g0_(x) * 2) * (1 / (h * h));
        out[1] = (g0_({x.x + h, x.y + h}) + g0_({x.x - h, x.y - h}) - g0_({x.x + h, x.y - h}) -
                  g0_({x.x - h, x.y + h})) *
                 (1 / (4 * h * h));
        return out;
    }

    real dot(Vec2 x, Vec2 v, Vec2 w) const {
        const Mat2 g = at(x);
        return v.x * (g.a11 * w.x + g.a12 * w.y) + v.y * (g.a12 * w.x + g.a22 * w.y);
    }
    real norm(Vec2 x, Vec2 v) const { return std::sqrt(dot(x, v, v)); }

    // g0-unit normalization of v at x.
    Vec2 normalize(Vec2 x, Vec2 v) const {
        const real n = norm(x, v);
        if (!(n > 0)) throw definiteness_error("normalize: zero vector");
        return v / n;
    }

    // g0-orthonormal frame at x: (e1, e2) with e1 along the Euclidean x-axis
    // direction, by Gram-Schmidt.
    std::array<Vec2, 2> frame(Vec2 x) const {
        Vec2 e1 = normalize(x, {1, 0});
        Vec2 c = {0, 1};
        Vec2 e2v = c - e1 * dot(x, c, e1);
        Vec2 e2 = normalize(x, e2v);
        return {e1, e2};
    }

    // g0-unit vector g0-orthogonal to v (v assumed unit), consistent
    // orientation: det(v, n) > 0 scaled by sqrt(det g0).
    Vec2 unit_normal(Vec2 x, Vec2 v) const {
        const Mat2 g = at(x);
        const real sd = std::sqrt(g.det());
        const Vec2 gv = g.apply(v);
        return Vec2{-gv.y, gv.x} / sd;
    }

    Christoffels christoffels(Vec2 x) const {
        if (!domain_.inside(x, -1e-9)) throw domain_error_pt("christoffels: point outside D");
        const Mat2 g = at(x);
        if (g.eig_min() < kEpsPd) throw definiteness_error("christoffels: g0 not positive definite");
        return christoffels_raw(x);
    }

    // No domain check: integrator stages probe slightly past the boundary.
    Christoffels christoffels_raw(Vec2 x) const {
        const Mat2 g = at(x);
        const Mat2 gi = g.inverse();
        const auto dg = d1(x);
        Christoffels G;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = j; k < 2; ++k) {
                    real s = 0;
                    for (int l = 0; l < 2; ++l)
                        s += gi(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
                    G.c[i][j][k] = 0.5 * s;
                    G.c[i][k][j] = G.c[i][j][k];
                }
        return G;
    }

    // Gauss curvature from the curvature tensor; needs second derivatives.
    real gauss_curvature(Vec2 x) const {
        const auto dg = d1(x);
        const auto hg = d2(x);
        const Mat2 g = at(x);
        const Mat2 gi = g.inverse();
        // dGamma^i_{jk}/dx^a assembled from analytic pieces:
        // Gamma^i_{jk} = 1/2 gi^{il} T_{ljk},  T_{ljk} = d_j g_{lk} + d_k g_{lj} - d_l g_{jk}
        auto T = [&](int l, int j, int k) { return dg[j](l, k) + dg[k](l, j) - dg[l](j, k); };
        auto dT = [&](int a, int l, int j, int k) {
            auto h2 = [&](int p, int q, int r, int s) {
                // d_p d_q g_{rs} with (p,q) symmetric index into hg
                int idx = (p == 0 && q == 0) ? 0 : (p == 1 && q == 1) ? 2 : 1;
                return hg[idx](r, s);
            };
            return h2(a, j, l, k) + h2(a, k, l, j) - h2(a, l, j, k);
        };
        // d_a gi = -gi dg_a gi
        auto dgi = [&](int a, int i, int l) {
            real s = 0;
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) s += gi(i, p) * dg[a](p, q) * gi(q, l);
            return -s;
        };
        auto Gamma = christoffels_raw(x);
        auto dGamma = [&](int a, int i, int j, int k) {
            real s = 0;
            for (int l = 0; l < 2; ++l) s += dgi(a, i, l) * T(l, j, k) + gi(i, l) * dT(a, l, j, k);
            return 0.5 * s;
        };
        // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + G^i_{km} G^m_{lj} - G^i_{lm} G^m_{kj}
        auto Riem = [&](int i, int j, int k, int l) {
            real s = dGamma(k, i, l, j) - dGamma(l, i, k, j);
            for (int m = 0; m < 2; ++m)
                s += Gamma(i, k, m) * Gamma(m, l, j) - Gamma(i, l, m) * Gamma(m, k, j);
            return s;
        };
        // K = R_{1212} / det g = g_{1i} R^i_{212} / det g
        real R1212 = 0;
        for (int i = 0; i < 2; ++i) R1212 += g(0, i) * Riem(i, 1, 0, 1);
        return R1212 / g.det();
    }

    // Validation per the type invariants: symmetry is structural (Mat2),
    // so check positive definiteness on a dense sample and (when analytic
    // derivatives are supplied) their consistency with central differences.
    struct Validation {
        real min_eig = std::numeric_limits<real>::infinity();
        real max_d1_defect = 0;
        bool pass = false;
        bool fd_fallback = false;
    };

    Validation validate(int samples = 400, unsigned rng_seed = 7) const {
        Validation rep;
        rep.fd_fallback = !dg0_;
        std::uint64_t s = rng_seed;
        auto rnd = [&s]() {
            s = s * 6364136223846793005ull + 1442695040888963407ull;
            return real((s >> 11) % (1ull << 40)) / real(1ull << 40);
        };
        const real h = 1e-5;
        for (int i = 0; i < samples; ++i) {
            const real u = 2 * kPi * rnd();
            const real t = std::sqrt(rnd()) * 0.98;
            const Vec2 x = domain_.boundary(u) * t;
            rep.min_eig = std::min(rep.min_eig, at(x).eig_min());
            if (dg0_) {
                auto ana = dg0_(x);
                Mat2 fd0 = (g0_({x.x + h, x.y}) - g0_({x.x - h, x.y})) * (1 / (2 * h));
                Mat2 fd1 = (g0_({x.x, x.y + h}) - g0_({x.x, x.y - h})) * (1 / (2 * h));
                for (auto [m, f] : {std::pair{ana[0], fd0}, std::pair{ana[1], fd1}}) {
                    Mat2 d = m - f;
                    rep.max_d1_defect = std::max(
                        {rep.max_d1_defect, std::abs(d.a11), std::abs(d.a12), std::abs(d.a22)});
                }
            }
        }
        rep.pass = rep.min_eig >= kEpsPd && rep.max_d1_defect < 1e-6;
        return rep;
    }

private:
    StarDomain domain_;
    MatFn g0_;
    DMatFn dg0_;
    D2MatFn d2g0_;
};

// Admissible product metric g = c(x) * (dx1^2 (+) g0) on M inside R x D.
class ConformalProduct {
public:
    // c(x1, x'), with optional analytic gradient (d_x1 c, d_x' c).
    using CFn = std::function<real(real, Vec2)>;
    using DCFn = std::function<std::array<real, 3>(real, Vec2)>;

    static constexpr real kEpsC = 1e-8;

    ConformalProduct(MetricField2D base, CFn c, DCFn dc = nullptr,
                     std::array<real, 2> x1_range = {-1, 1})
        : base_(std::move(base)), c_(std::move(c)), dc_(std::move(dc)), x1_range_(x1_range) {}

    const MetricField2D& base() const { return base_; }
    std::array<real, 2> x1_range() const { return x1_range_; }

    real c(real x1, Vec2 xp) const {
        const real v = c_(x1, xp);
        if (!(v >= kEpsC)) throw definiteness_error("ConformalProduct: c below floor");
        return v;
    }

    std::array<real, 3> dc(real x1, Vec2 xp) const {
        if (dc_) return dc_(x1, xp);
        const real h = detail::fd_step();
        return {(c_(x1 + h, xp) - c_(x1 - h, xp)) / (2 * h),
                (c_(x1, {xp.x + h, xp.y}) - c_(x1, {xp.x - h, xp.y})) / (2 * h),
                (c_(x1, {xp.x, xp.y + h}) - c_(x1, {xp.x, xp.y - h})) / (2 * h)};
    }

    // Full 3x3 metric at (x1, x') as (c, c*g0); symmetric positive definite
    // whenever c > 0 and g0 is.
    real det(real x1, Vec2 xp) const {
        const real cc = c(x1, xp);
        return cc * cc * cc * base_.at(xp).det();
    }

private:
    MetricField2D base_;
    CFn c_;
    DCFn dc_;
    std::array<real, 2> x1_range_;
};

}  // namespace polytomo

#pragma once

#include "polytomo/metric.hpp"

#include <map>

namespace polytomo {

// Named metrics used by the test studies and the CLI.
//
//   euclidean_disk    g0 = I on the unit disk, c = 1
//   conformal_bump    g0 = (1 + 0.2 b(x')) I, c = 1 + 0.2 b3(x1, x')
//   sphere_cap_small  round metric 4k^2/(1+k^2|x|^2)^2 I, k = 0.55 (simple)
//   sphere_cap_large  same with k = 1.6: conjugate-point control (not simple)
//   perturbed_disk    g0 = diag(1 + 0.05 b1, 1 + 0.05 b2), c = 1
struct GalleryEntry {
    std::string name;
    MetricField2D transversal;
    ConformalProduct product;
};

namespace detail {

struct Bump {  // exp(-|x-p|^2 / w^2) with derivatives
    Vec2 p;
    real w;
    real operator()(Vec2 x) const {
        const Vec2 d = x - p;
        return std::exp(-dot(d, d) / (w * w));
    }
    Vec2 grad(Vec2 x) const {
        const Vec2 d = x - p;
        return d * (-2 / (w * w) * (*this)(x));
    }
    Mat2 hess(Vec2 x) const {
        const Vec2 d = x - p;
        const real b = (*this)(x), w2 = w * w;
        return Mat2{b * (4 * d.x * d.x / (w2 * w2) - 2 / w2), b * 4 * d.x * d.y / (w2 * w2),
                    b * (4 * d.y * d.y / (w2 * w2) - 2 / w2)};
    }
};

// g0 = s(x) I from a scalar factor with derivatives.
inline MetricField2D scalar_conformal(StarDomain dom, std::function<real(Vec2)> s,
                                      std::function<Vec2(Vec2)> ds,
                                      std::function<Mat2(Vec2)> d2s) {
    auto g = [s](Vec2 x) { const real v = s(x); return Mat2{v, 0, v}; };
    auto dg = [ds](Vec2 x) {
        const Vec2 d = ds(x);
        return std::array<Mat2, 2>{Mat2{d.x, 0, d.x}, Mat2{d.y, 0, d.y}};
    };
    auto d2g = [d2s](Vec2 x) {
        const Mat2 h = d2s(x);
        return std::array<Mat2, 3>{Mat2{h.a11, 0, h.a11}, Mat2{h.a12, 0, h.a12},
                                   Mat2{h.a22, 0, h.a22}};
    };
    return MetricField2D(std::move(dom), g, dg, d2g);
}

inline MetricField2D sphere_cap(real k) {
    auto s = [k](Vec2 x) {
        const real q = 1 + k * k * dot(x, x);
        return 4 * k * k / (q * q);
    };
    auto ds = [k](Vec2 x) {
        const real q = 1 + k * k * dot(x, x);
        const real f = -16 * k * k * k * k / (q * q * q);
        return Vec2{f * x.x, f * x.y};
    };
    auto d2s = [k](Vec2 x) {
        const real k2 = k * k, q = 1 + k2 * dot(x, x);
        const real A = -16 * k2 * k2 / (q * q * q), B = 96 * k2 * k2 * k2 / (q * q * q * q);
        return Mat2{A + B * x.x * x.x, B * x.x * x.y, A + B * x.y * x.y};
    };
    return scalar_conformal(StarDomain::unit_disk(), s, ds, d2s);
}

}  // namespace detail

inline GalleryEntry make_gallery_metric(const std::string& name) {
    using detail::Bump;
    const StarDomain disk = StarDomain::unit_disk();
    auto unit_c = [](real, Vec2) { return 1.0; };
    auto unit_dc = [](real, Vec2) { return std::array<real, 3>{0, 0, 0}; };

    if (name == "euclidean_disk") {
        MetricField2D g0 = MetricField2D::euclidean_disk();
        return {name, g0, ConformalProduct(g0, unit_c, unit_dc)};
    }
    if (name == "conformal_bump") {
        const Bump b{{0.2, -0.1}, 0.45};
        MetricField2D g0 = detail::scalar_conformal(
            disk, [b](Vec2 x) { return 1 + 0.2 * b(x); },
            [b](Vec2 x) { return b.grad(x) * 0.2; }, [b](Vec2 x) { return b.hess(x) * 0.2; });
        const real w3 = 0.55;
        const Vec2 p{0.2, -0.1};
        auto c = [w3, p](real x1, Vec2 xp) {
            const Vec2 d = xp - p;
            return 1 + 0.2 * std::exp(-(x1 * x1 + dot(d, d)) / (w3 * w3));
        };
        auto dc = [w3, p, c](real x1, Vec2 xp) {
            const Vec2 d = xp - p;
            const real e = c(x1, xp) - 1;
            return std::array<real, 3>{-2 * x1 / (w3 * w3) * e, -2 * d.x / (w3 * w3) * e,
                                       -2 * d.y / (w3 * w3) * e};
        };
        return {name, g0, ConformalProduct(g0, c, dc)};
    }
    if (name == "sphere_cap_small") {
        MetricField2D g0 = detail::sphere_cap(0.55);
        return {name, g0, ConformalProduct(g0, unit_c, unit_dc)};
    }
    if (name == "sphere_cap_large") {
        MetricField2D g0 = detail::sphere_cap(1.6);
        return {name, g0, ConformalProduct(g0, unit_c, unit_dc)};
    }
    if (name == "perturbed_disk") {
        const Bump b1{{-0.25, 0.2}, 0.55};
        const Bump b2{{0.3, 0.25}, 0.6};
        auto g = [b1, b2](Vec2 x) { return Mat2{1 + 0.05 * b1(x), 0, 1 + 0.05 * b2(x)}; };
        auto dg = [b1, b2](Vec2 x) {
            const Vec2 d1 = b1.grad(x) * 0.05, d2 = b2.grad(x) * 0.05;
            return std::array<Mat2, 2>{Mat2{d1.x, 0, d2.x}, Mat2{d1.y, 0, d2.y}};
        };
        auto d2g = [b1, b2](Vec2 x) {
            const Mat2 h1 = b1.hess(x) * 0.05, h2 = b2.hess(x) * 0.05;
            return std::array<Mat2, 3>{Mat2{h1.a11, 0, h2.a11}, Mat2{h1.a12, 0, h2.a12},
                                       Mat2{h1.a22, 0, h2.a22}};
        };
        MetricField2D g0(disk, g, dg, d2g);
        return {name, g0, ConformalProduct(g0, unit_c, unit_dc)};
    }
    throw config_error("unknown gallery metric: " + name);
}

inline std::vector<std::string> gallery_names() {
    return {"euclidean_disk", "conformal_bump", "sphere_cap_small", "sphere_cap_large",
            "perturbed_disk"};
}

}  // namespace polytomo

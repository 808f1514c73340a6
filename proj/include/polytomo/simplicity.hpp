#pragma once

#include "polytomo/geodesic.hpp"

namespace polytomo {

// Numerical simplicity diagnostics: (a) no conjugate points, detected by a
// sign change of the Jacobi field j (j(0)=0, j'(0)=1) along a fan of
// geodesics; (b) strict convexity of the boundary, via the geodesic
// curvature of the boundary curve against the inward normal.  The margins
// reported are min j(t)/t over all sampled rays and the minimum boundary
// curvature.
struct SimplicityReport {
    bool no_conjugate_points = true;
    bool strictly_convex = true;
    real jacobi_margin = std::numeric_limits<real>::infinity();   // min j(t)/t
    real convexity_margin = std::numeric_limits<real>::infinity();// min kappa_g
    bool pass() const { return no_conjugate_points && strictly_convex; }
};

inline SimplicityReport simplicity_diagnostics(const MetricField2D& metric, int samples = 24,
                                               GeodesicOptions opt = {}) {
    SimplicityReport rep;
    const StarDomain& dom = metric.domain();
    opt.with_jacobi = true;
    opt.rk_tol = std::max(opt.rk_tol, real(1e-11));

    // Boundary convexity: kappa = < x'' + Gamma(x',x') , n_in >_g / |x'|_g^2.
    for (int i = 0; i < 4 * samples; ++i) {
        const real u = 2 * kPi * i / (4 * samples);
        const Vec2 x = dom.boundary(u);
        const Vec2 xd = dom.dboundary(u);
        const Vec2 xdd = dom.d2boundary(u);
        const auto G = metric.christoffels(x * (1 - 1e-12));
        Vec2 acc = xdd;
        for (int a = 0; a < 2; ++a) {
            real s = 0;
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) s += G(a, j, k) * xd[j] * xd[k];
            acc[a] += s;
        }
        // Inward g0-unit normal from the boundary-defining gradient.
        const Mat2 gi = metric.at(x).inverse();
        Vec2 grad = gi.apply(dom.grad_bdf(x));
        Vec2 nu_in = metric.normalize(x, grad) * -1.0;
        const real kappa = metric.dot(x, acc, nu_in) / metric.dot(x, xd, xd);
        rep.convexity_margin = std::min(rep.convexity_margin, kappa);
    }
    rep.strictly_convex = rep.convexity_margin > 0;

    // Conjugate points along a fan from boundary points.
    for (int i = 0; i < samples; ++i) {
        const real u = 2 * kPi * i / samples;
        const Vec2 x = dom.boundary(u) * (1 - 1e-10);
        const Mat2 gi = metric.at(x).inverse();
        const Vec2 nu_in = metric.normalize(x, gi.apply(dom.grad_bdf(x))) * -1.0;
        const Vec2 tan = metric.unit_normal(x, nu_in);
        const int nphi = 9;
        for (int k = 1; k + 1 <= nphi; ++k) {
            const real phi = -kPi / 2 + kPi * k / (nphi + 1.0);
            Vec2 v = nu_in * std::cos(phi) + tan * std::sin(phi);
            GeodesicPath p;
            try {
                p = shoot_geodesic(metric, UnitTangent(metric, x, v), opt);
            } catch (const non_simple_error&) {
                rep.no_conjugate_points = false;
                rep.jacobi_margin = std::min(rep.jacobi_margin, real(-1));
                continue;
            }
            const int nt = 64;
            for (int q = 1; q <= nt; ++q) {
                const real t = p.tau * q / nt;
                if (t <= 0) continue;
                const real j = p.eval(t).j;
                rep.jacobi_margin = std::min(rep.jacobi_margin, j / t);
            }
        }
    }
    rep.no_conjugate_points = rep.no_conjugate_points && rep.jacobi_margin > 0;
    return rep;
}

}  // namespace polytomo

#pragma once

#include "polytomo/geodesic.hpp"

namespace polytomo {

// Polar normal coordinates (r, theta) on (D, g0) about a center omega:
// x' = exp_omega(r * theta).  Directions are measured against a fixed
// g0-orthonormal frame at omega.  The Jacobi field j along each radial
// geodesic (j(0)=0, j'(0)=1) supplies both the Newton derivative of the
// inverse map and the polar volume factor dVol_{g0} = j dr dtheta.
class PolarChart {
public:
    PolarChart(const MetricField2D& metric, Vec2 omega, GeodesicOptions opt = {})
        : metric_(&metric), omega_(omega), opt_(opt) {
        opt_.with_jacobi = true;
        // The Hermite dense output limits pointwise ray accuracy to
        // O(max_step^4); charts need a lower noise floor than transforms.
        opt_.max_step = std::min(opt_.max_step, real(0.02));
        frame_ = metric.frame(omega);
    }

    Vec2 center() const { return omega_; }
    const std::array<Vec2, 2>& frame() const { return frame_; }

    Vec2 direction(real theta) const {
        return frame_[0] * std::cos(theta) + frame_[1] * std::sin(theta);
    }

    // Radial geodesic (with Jacobi data) in direction theta, integrated to
    // the boundary of D.
    GeodesicPath ray(real theta) const {
        UnitTangent ut(*metric_, omega_, direction(theta));
        return shoot_geodesic(*metric_, ut, opt_);
    }

    Vec2 exp(real r, real theta) const { return ray(theta).eval(r).x; }

    real r_max(real theta) const { return ray(theta).tau; }

    // |det d exp| in polar form: the scalar Jacobi field j(r, theta).
    real jacobian(real r, real theta) const { return ray(theta).eval(r).j; }

    struct Polar {
        real r, theta;
    };

    // Inverse of the exponential map by Newton on (r, theta); the theta
    // derivative is the Jacobi field along the current ray.
    Polar polar_coords(Vec2 x, real tol = 1e-10) const {
        const Vec2 d = x - omega_;
        const real de = norm(d);
        if (de < 1e-14) throw chart_error("polar_coords: x == omega");
        // Euclidean initial guess projected on the frame.
        real r = de * metric_->norm(omega_, d / de) /* first-order length scale */;
        real th = std::atan2(dot(d, frame_[1]), dot(d, frame_[0]));
        real res_prev = std::numeric_limits<real>::infinity();
        for (int it = 0; it < 80; ++it) {
            GeodesicPath p = ray_to(th, r * 1.25 + 0.1);
            auto st = p.eval(r);
            const Vec2 F = st.x - x;
            const real res = std::max(std::abs(F.x), std::abs(F.y));
            if (res < tol) return {r, th};
            // Columns: d exp/dr = v(r); d exp/dtheta = j(r) * n(r) * s0
            const Vec2 n = metric_->unit_normal(st.x, st.v);
            const Vec2 dv_dth = frame_[0] * (-std::sin(th)) + frame_[1] * std::cos(th);
            const real s0 = metric_->dot(omega_, dv_dth, metric_->unit_normal(omega_, direction(th)));
            const Vec2 colr = st.v;
            const Vec2 colt = n * (st.j * s0);
            const real det = colr.x * colt.y - colr.y * colt.x;
            if (std::abs(det) < 1e-15) throw chart_error("polar_coords: singular Newton system");
            real dr = (-colt.y * F.x + colt.x * F.y) / det;
            real dt = (colr.y * F.x - colr.x * F.y) / det;
            // Damp when the previous step failed to reduce the residual.
            real damp = (res > res_prev) ? 0.5 : 1.0;
            res_prev = res;
            r += damp * std::clamp(dr, -0.4, 0.4);
            th += damp * std::clamp(dt, -0.4, 0.4);
            if (r < 1e-12) r = 1e-12;
        }
        throw chart_error("polar_coords: Newton did not converge");
    }

private:
    // Radial geodesic integrated to at least t_need (past the boundary if
    // necessary during Newton iterations near the edge).
    GeodesicPath ray_to(real theta, real t_need) const {
        UnitTangent ut(*metric_, omega_, direction(theta));
        GeodesicOptions o = opt_;
        // Newton iterates can momentarily ask for points outside D; integrate
        // on the metric's formula domain without boundary termination by
        // shooting in a virtually enlarged domain.
        GeodesicPath p = shoot_geodesic_unbounded(ut, t_need, o);
        return p;
    }

    GeodesicPath shoot_geodesic_unbounded(const UnitTangent& start, real t_end,
                                          const GeodesicOptions& o) const {
        using detail::OdeState;
        GeodesicPath path;
        path.has_jacobi = true;
        OdeState y{start.x, start.v, o.jacobi_j0, o.jacobi_jp0};
        auto f = [&](const OdeState& s) { return detail::geodesic_rhs(*metric_, s, true); };
        OdeState k1 = f(y);
        path.push({0, y.x, y.v, k1.x, k1.v, y.j, y.jp, k1.j, k1.jp});
        real t = 0, h = std::min(o.max_step, real(1e-3));
        while (t < t_end) {
            h = std::min({h, o.max_step, t_end - t + 1e-9});
            OdeState k2 = f(y.axpy(h / 5, k1));
            OdeState k3 = f(y.axpy(3 * h / 40, k1).axpy(9 * h / 40, k2));
            OdeState k4 = f(y.axpy(44 * h / 45, k1).axpy(-56 * h / 15, k2).axpy(32 * h / 9, k3));
            OdeState k5 = f(y.axpy(19372 * h / 6561, k1)
                                .axpy(-25360 * h / 2187, k2)
                                .axpy(64448 * h / 6561, k3)
                                .axpy(-212 * h / 729, k4));
            OdeState k6 = f(y.axpy(9017 * h / 3168, k1)
                                .axpy(-355 * h / 33, k2)
                                .axpy(46732 * h / 5247, k3)
                                .axpy(49 * h / 176, k4)
                                .axpy(-5103 * h / 18656, k5));
            OdeState ynew = y.axpy(35 * h / 384, k1)
                                .axpy(500 * h / 1113, k3)
                                .axpy(125 * h / 192, k4)
                                .axpy(-2187 * h / 6784, k5)
                                .axpy(11 * h / 84, k6);
            OdeState k7 = f(ynew);
            OdeState y4 = y.axpy(5179 * h / 57600, k1)
                              .axpy(7571 * h / 16695, k3)
                              .axpy(393 * h / 640, k4)
                              .axpy(-92097 * h / 339200, k5)
                              .axpy(187 * h / 2100, k6)
                              .axpy(h / 40, k7);
            const real err = std::max({std::abs(ynew.x.x - y4.x.x), std::abs(ynew.x.y - y4.x.y),
                                       std::abs(ynew.v.x - y4.v.x), std::abs(ynew.v.y - y4.v.y)});
            if (err > o.rk_tol && h > 1e-14) {
                h *= std::max<real>(0.2, 0.9 * std::pow(o.rk_tol / (err + 1e-300), 0.2));
                continue;
            }
            t += h;
            y = ynew;
            path.push({t, y.x, y.v, k7.x, k7.v, y.j, y.jp, k7.j, k7.jp});
            k1 = k7;
            if (err > 0) h *= std::min<real>(5.0, 0.9 * std::pow(o.rk_tol / err, 0.2));
        }
        path.tau = t;
        path.exit_point = y.x;
        path.exit_dir = y.v;
        return path;
    }

    const MetricField2D* metric_;
    Vec2 omega_;
    GeodesicOptions opt_;
    std::array<Vec2, 2> frame_;
};

}  // namespace polytomo

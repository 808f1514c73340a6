#pragma once

#include "polytomo/metric.hpp"

namespace polytomo {

// (x, v) with |v|_{g0(x)} = 1; normalized on construction.
struct UnitTangent {
    Vec2 x;
    Vec2 v;

    UnitTangent(const MetricField2D& g, Vec2 x0, Vec2 v0) : x(x0), v(g.normalize(x0, v0)) {}
};

struct GeodesicOptions {
    real rk_tol = 1e-13;       // local error target per step
    real max_step = 0.05;      // cap so the Hermite dense output stays tight
    real boundary_tol = 1e-12; // |b| at the located exit
    bool with_jacobi = false;  // carry (j, j') with j''(t) = -K j
    real jacobi_j0 = 0;
    real jacobi_jp0 = 1;
    real tau_cap_factor = MetricField2D::kTauCapFactor;
};

// Result of integrating the geodesic ODE  x''^i + Gamma^i_{jk} x'^j x'^k = 0
// from a unit tangent vector until the first boundary exit.
class GeodesicPath {
public:
    struct Node {
        real t;
        Vec2 x, v;      // state
        Vec2 dx, dv;    // derivative of the state (dx = v, dv = acceleration)
        real j = 0, jp = 0, dj = 0, djp = 0;
    };

    real tau = 0;
    Vec2 exit_point;
    Vec2 exit_dir;           // unit tangent at exit (outward along the ray)
    real energy_drift = 0;   // max |  |v|_g^2 - 1  | over accepted steps
    bool has_jacobi = false;

    const std::vector<Node>& nodes() const { return nodes_; }

    struct State {
        Vec2 x, v;
        real j = 0, jp = 0;
    };

    // Dense evaluation by per-step cubic Hermite interpolation.
    State eval(real t) const {
        if (t <= nodes_.front().t) return {nodes_.front().x, nodes_.front().v,
                                           nodes_.front().j, nodes_.front().jp};
        if (t >= nodes_.back().t) return {nodes_.back().x, nodes_.back().v,
                                          nodes_.back().j, nodes_.back().jp};
        std::size_t lo = 0, hi = nodes_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (nodes_[mid].t <= t ? lo : hi) = mid;
        }
        const Node& a = nodes_[lo];
        const Node& b = nodes_[lo + 1];
        const real h = b.t - a.t, s = (t - a.t) / h;
        const real h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const real h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        auto herm = [&](real ya, real da, real yb, real db) {
            return h00 * ya + h10 * h * da + h01 * yb + h11 * h * db;
        };
        State out;
        out.x = {herm(a.x.x, a.dx.x, b.x.x, b.dx.x), herm(a.x.y, a.dx.y, b.x.y, b.dx.y)};
        out.v = {herm(a.v.x, a.dv.x, b.v.x, b.dv.x), herm(a.v.y, a.dv.y, b.v.y, b.dv.y)};
        if (has_jacobi) {
            out.j = herm(a.j, a.dj, b.j, b.dj);
            out.jp = herm(a.jp, a.djp, b.jp, b.djp);
        }
        return out;
    }

    void push(Node n) { nodes_.push_back(n); }
    void pop() { nodes_.pop_back(); }

private:
    std::vector<Node> nodes_;
};

namespace detail {

struct OdeState {
    Vec2 x, v;
    real j = 0, jp = 0;

    OdeState axpy(real a, const OdeState& d) const {
        return {x + d.x * a, v + d.v * a, j + a * d.j, jp + a * d.jp};
    }
};

// Geodesic RHS without domain checks: stages may probe slightly outside D
// before the crossing is located, and the gallery metrics are defined by
// formulas on all of R^2.
inline OdeState geodesic_rhs(const MetricField2D& g, const OdeState& y, bool with_jacobi) {
    const Mat2 gm = g.at(y.x);
    if (gm.eig_min() < MetricField2D::kEpsPd)
        throw definiteness_error("geodesic: metric lost definiteness along the ray");
    const Mat2 gi = gm.inverse();
    const auto dg = g.d1(y.x);
    OdeState d;
    d.x = y.v;
    for (int i = 0; i < 2; ++i) {
        real acc = 0;
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                real G = 0;
                for (int l = 0; l < 2; ++l)
                    G += gi(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
                acc += 0.5 * G * y.v[j] * y.v[k];
            }
        d.v[i] = -acc;
    }
    if (with_jacobi) {
        const real K = g.gauss_curvature(y.x);
        d.j = y.jp;
        d.jp = -K * y.j;
    }
    return d;
}

// Classical RK4 with n fixed substeps over a duration dt (exit polishing).
inline OdeState rk4_advance(const MetricField2D& g, OdeState y, real dt, int n,
                            bool with_jacobi) {
    const real h = dt / n;
    for (int i = 0; i < n; ++i) {
        OdeState k1 = geodesic_rhs(g, y, with_jacobi);
        OdeState k2 = geodesic_rhs(g, y.axpy(h / 2, k1), with_jacobi);
        OdeState k3 = geodesic_rhs(g, y.axpy(h / 2, k2), with_jacobi);
        OdeState k4 = geodesic_rhs(g, y.axpy(h, k3), with_jacobi);
        y = y.axpy(h / 6, k1).axpy(h / 3, k2).axpy(h / 3, k3).axpy(h / 6, k4);
    }
    return y;
}

}  // namespace detail

// Integrate the geodesic from `start` (inside D, or on the boundary pointing
// inward) to its first boundary exit.  Dormand-Prince 5(4) with adaptive
// steps; the crossing is bracketed on the accepted step and polished by a
// safeguarded secant/bisection hybrid on the boundary-defining function.
inline GeodesicPath shoot_geodesic(const MetricField2D& metric, const UnitTangent& start,
                                   const GeodesicOptions& opt = {}) {
    using detail::OdeState;
    const StarDomain& dom = metric.domain();
    const real tau_cap = opt.tau_cap_factor * dom.euclidean_diameter();

    const real b0 = dom.bdf(start.x);
    if (b0 > 1e-9) throw domain_error_pt("shoot_geodesic: start outside D");

    OdeState y{start.x, start.v, opt.jacobi_j0, opt.jacobi_jp0};
    auto f = [&](const OdeState& s) { return detail::geodesic_rhs(metric, s, opt.with_jacobi); };

    // Boundary start: require a non-outgoing direction; a tangent start with
    // outward drift is rejected below when no progress is made.
    if (b0 > -1e-12) {
        const Vec2 gb = dom.grad_bdf(start.x);
        if (dot(gb, start.v) > 1e-9) {
            // Outward from the boundary: the first non-negative exit time is 0.
            GeodesicPath path;
            path.has_jacobi = opt.with_jacobi;
            GeodesicPath::Node n{0, y.x, y.v, y.v, f(y).v, y.j, y.jp, y.jp, 0};
            path.push(n);
            path.tau = 0;
            path.exit_point = start.x;
            path.exit_dir = start.v;
            return path;
        }
    }

    GeodesicPath path;
    path.has_jacobi = opt.with_jacobi;

    OdeState k1 = f(y);
    {
        GeodesicPath::Node n{0, y.x, y.v, k1.x, k1.v, y.j, y.jp, k1.j, k1.jp};
        path.push(n);
    }

    real t = 0, h = std::min(opt.max_step, real(1e-3));
    bool armed = b0 < -1e-12;  // crossing detection active once strictly inside

    const real energy0 = metric.dot(start.x, start.v, start.v);

    while (t < tau_cap) {
        h = std::min(h, opt.max_step);
        // Dormand-Prince stages.
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
        // Embedded 4th-order solution for the error estimate.
        OdeState y4 = y.axpy(5179 * h / 57600, k1)
                          .axpy(7571 * h / 16695, k3)
                          .axpy(393 * h / 640, k4)
                          .axpy(-92097 * h / 339200, k5)
                          .axpy(187 * h / 2100, k6)
                          .axpy(h / 40, k7);
        const real err = std::max({std::abs(ynew.x.x - y4.x.x), std::abs(ynew.x.y - y4.x.y),
                                   std::abs(ynew.v.x - y4.v.x), std::abs(ynew.v.y - y4.v.y)});
        if (err > opt.rk_tol && h > 1e-14) {
            h *= std::max<real>(0.2, 0.9 * std::pow(opt.rk_tol / (err + 1e-300), 0.2));
            if (h < 1e-14) throw tangency_error("shoot_geodesic: step underflow near boundary");
            continue;
        }

        const real tnew = t + h;
        GeodesicPath::Node node{tnew, ynew.x, ynew.v, k7.x, k7.v, ynew.j, ynew.jp, k7.j, k7.jp};
        path.push(node);

        const real drift = std::abs(metric.dot(ynew.x, ynew.v, ynew.v) - energy0);
        path.energy_drift = std::max(path.energy_drift, drift);

        const real bnew = dom.bdf(ynew.x);
        if (!armed && bnew < -1e-12) armed = true;
        if (!armed && tnew > 0.1 * dom.euclidean_diameter())
            throw tangency_error("shoot_geodesic: tangent start, ray never enters D");
        if (armed && bnew >= 0) {
            // Bracketed in [t, tnew].  First locate on the dense output with a
            // secant/bisection hybrid, then polish by re-integrating from the
            // last interior state (the Hermite interpolant alone limits the
            // exit accuracy to ~1e-9).
            real lo = t, hi = tnew;
            real blo = dom.bdf(path.eval(lo).x), bhi = bnew;
            real root = hi;
            for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
                real mid = (std::abs(bhi - blo) > 1e-300)
                               ? hi - bhi * (hi - lo) / (bhi - blo)
                               : (lo + hi) / 2;
                if (!(mid > lo && mid < hi)) mid = (lo + hi) / 2;
                const real bm = dom.bdf(path.eval(mid).x);
                if ((bm < 0) == (blo < 0)) { lo = mid; blo = bm; }
                else { hi = mid; bhi = bm; }
                root = (lo + hi) / 2;
            }
            // Re-integrate the final stretch once (RK4, substeps sized so the
            // truncation error sits below rk_tol), then Newton-correct the
            // exit time with single-step advances.
            const real L = std::max<real>(root - t, 1e-6);
            const int nsub = std::clamp<int>(
                int(std::ceil(L * std::pow(L / opt.rk_tol, 0.25))), 8, 64);
            OdeState yex = detail::rk4_advance(metric, y, root - t, nsub, opt.with_jacobi);
            for (int it = 0; it < 8; ++it) {
                const real b = dom.bdf(yex.x);
                if (std::abs(b) < opt.boundary_tol) break;
                const real db = dot(dom.grad_bdf(yex.x), yex.v);
                if (std::abs(db) < 1e-10) break;  // grazing exit: keep bracket value
                const real dt = std::clamp(-b / db, -h, h);
                yex = detail::rk4_advance(metric, yex, dt, 1, opt.with_jacobi);
                root += dt;
            }
            OdeState kex = f(yex);
            path.pop();  // drop the overshooting node so t stays increasing
            path.push({root, yex.x, yex.v, kex.x, kex.v, yex.j, yex.jp, kex.j, kex.jp});
            path.tau = root;
            path.exit_point = yex.x;
            path.exit_dir = yex.v;
            return path;
        }

        t = tnew;
        y = ynew;
        k1 = k7;  // FSAL
        if (err > 0) h *= std::min<real>(5.0, 0.9 * std::pow(opt.rk_tol / err, 0.2));
    }
    throw non_simple_error("shoot_geodesic: exit time exceeded cap (metric may be non-simple)");
}

}  // namespace polytomo

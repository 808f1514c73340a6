#pragma once

#include "polytomo/linalg.hpp"

namespace polytomo {

// Star-shaped planar region D = { R(u)*(cos u, sin u) : R > 0 } given by a
// smooth positive radius function.  The boundary-defining function
//   b(x) = |x| - R(atan2(x2, x1))
// is negative inside, zero on the boundary.  The unit disk is R == 1.
class StarDomain {
public:
    using RadiusFn = std::function<real(real)>;  // R(u), 2*pi periodic

    StarDomain() = default;  // unit disk

    StarDomain(RadiusFn R, RadiusFn dR, RadiusFn d2R)
        : radius_(std::move(R)), dradius_(std::move(dR)), d2radius_(std::move(d2R)) {}

    static StarDomain unit_disk() { return StarDomain(); }

    real radius(real u) const { return radius_ ? radius_(u) : 1.0; }
    real dradius(real u) const { return dradius_ ? dradius_(u) : 0.0; }
    real d2radius(real u) const { return d2radius_ ? d2radius_(u) : 0.0; }

    // Boundary-defining function, negative inside D.
    real bdf(Vec2 x) const {
        const real r = norm(x);
        if (r == 0) return -radius(0);
        return r - radius(std::atan2(x.y, x.x));
    }

    bool inside(Vec2 x, real tol = 0) const { return bdf(x) < -tol; }

    Vec2 grad_bdf(Vec2 x) const {
        const real r = norm(x);
        if (r < 1e-14) return {1, 0};
        const real u = std::atan2(x.y, x.x);
        // d/dx |x| = x/r ; du/dx = (-y, x)/r^2
        const real Rp = dradius(u);
        return {x.x / r + Rp * x.y / (r * r), x.y / r - Rp * x.x / (r * r)};
    }

    // Boundary curve and its parameter derivatives.
    Vec2 boundary(real u) const {
        const real R = radius(u);
        return {R * std::cos(u), R * std::sin(u)};
    }
    Vec2 dboundary(real u) const {
        const real R = radius(u), Rp = dradius(u);
        const real c = std::cos(u), s = std::sin(u);
        return {Rp * c - R * s, Rp * s + R * c};
    }
    Vec2 d2boundary(real u) const {
        const real R = radius(u), Rp = dradius(u), Rpp = d2radius(u);
        const real c = std::cos(u), s = std::sin(u);
        return {Rpp * c - 2 * Rp * s - R * c, Rpp * s + 2 * Rp * c - R * s};
    }

    // Parameter of a point assumed to lie on (or near) the boundary.
    real boundary_param(Vec2 x) const { return std::atan2(x.y, x.x); }

    real euclidean_diameter() const {
        real d = 0;
        for (int i = 0; i < 256; ++i) d = std::max(d, radius(2 * kPi * i / 256));
        return 2 * d;
    }

private:
    RadiusFn radius_, dradius_, d2radius_;
};

}  // namespace polytomo

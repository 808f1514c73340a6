#pragma once

#include "polytomo/geodesic.hpp"
#include "polytomo/quadrature.hpp"

namespace polytomo {

// Quadrature discretization of the influx bundle ∂₊SD, parameterized by the
// boundary parameter u (periodic) and the incidence angle phi in
// (-pi/2, pi/2) measured g0-orthonormally from the inward normal.  The
// product measure on ∂₊SD is |x'(u)|_g du dphi and the mu-weight is
// |<v, nu>_g| = cos(phi).
class InfluxGrid {
public:
    struct Node {
        Vec2 x;        // boundary point
        Vec2 v;        // inward g0-unit direction
        real u, phi;   // chart coordinates
        real w;        // quadrature weight for the (u, phi) product measure
        real mu;       // cos(phi)
    };

    InfluxGrid(const MetricField2D& metric, int n_u, int n_phi)
        : metric_(&metric), n_u_(n_u), n_phi_(n_phi) {
        const StarDomain& dom = metric.domain();
        QuadRule qu = scaled_rule(gauss_legendre(n_u), 0, 2 * kPi);
        QuadRule qp = scaled_rule(gauss_legendre(n_phi), -kPi / 2, kPi / 2);
        u_nodes_ = qu.nodes;
        phi_nodes_ = qp.nodes;
        nodes_.reserve(std::size_t(n_u) * n_phi);
        for (int i = 0; i < n_u; ++i) {
            const real u = qu.nodes[i];
            const Vec2 x = dom.boundary(u);
            const real len = metric.norm(x, dom.dboundary(u));  // g0 length factor
            const auto [nu_in, tan] = frame_at(u);
            for (int j = 0; j < n_phi; ++j) {
                const real phi = qp.nodes[j];
                Node n;
                n.x = x;
                n.v = nu_in * std::cos(phi) + tan * std::sin(phi);
                n.u = u;
                n.phi = phi;
                n.w = qu.weights[i] * qp.weights[j] * len;
                n.mu = std::cos(phi);
                nodes_.push_back(n);
            }
        }
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    int n_u() const { return n_u_; }
    int n_phi() const { return n_phi_; }
    const MetricField2D& metric() const { return *metric_; }
    const std::vector<real>& u_nodes() const { return u_nodes_; }
    const std::vector<real>& phi_nodes() const { return phi_nodes_; }

    // Sum of w * mu: converges to the mu-volume of ∂₊SD under refinement.
    real mu_volume() const {
        std::vector<real> terms;
        terms.reserve(nodes_.size());
        for (const auto& n : nodes_) terms.push_back(n.w * n.mu);
        return pairwise_sum(terms);
    }

    // (inward normal, tangent) g0-orthonormal frame at boundary parameter u.
    std::pair<Vec2, Vec2> frame_at(real u) const {
        const StarDomain& dom = metric_->domain();
        const Vec2 x = dom.boundary(u);
        const Mat2 gi = metric_->at(x).inverse();
        const Vec2 nu_out = metric_->normalize(x, gi.apply(dom.grad_bdf(x)));
        const Vec2 nu_in = nu_out * -1.0;
        Vec2 tan = metric_->unit_normal(x, nu_in);
        return {nu_in, tan};
    }

    // Chart coordinates of an influx element (y on the boundary, v inward).
    std::pair<real, real> locate(Vec2 y, Vec2 v) const {
        const StarDomain& dom = metric_->domain();
        real u = dom.boundary_param(y);
        if (u < 0) u += 2 * kPi;
        const auto [nu_in, tan] = frame_at(u);
        const Vec2 yb = dom.boundary(u);
        const real c = metric_->dot(yb, v, nu_in);
        const real s = metric_->dot(yb, v, tan);
        return {u, std::atan2(s, c)};
    }

private:
    const MetricField2D* metric_;
    int n_u_, n_phi_;
    std::vector<Node> nodes_;
    std::vector<real> u_nodes_, phi_nodes_;
};

}  // namespace polytomo

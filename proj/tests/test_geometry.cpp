#include <catch2/catch_amalgamated.hpp>

#include "polytomo/gallery.hpp"
#include "polytomo/influx.hpp"
#include "polytomo/polar.hpp"
#include "polytomo/simplicity.hpp"

#include <random>

using namespace polytomo;
using Catch::Approx;

TEST_CASE("christoffels") {
    SECTION("euclidean metric has vanishing symbols") {
        auto g = MetricField2D::euclidean_disk();
        auto G = g.christoffels({0.3, -0.2});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) REQUIRE(G(i, j, k) == 0.0);
    }

    SECTION("conformal exp(2*x1) metric") {
        // g = e^{2u} I with u = x1: Gamma^1_{11} = 1, Gamma^1_{22} = -1,
        // Gamma^2_{12} = 1, the rest by symmetry or zero.
        auto g = MetricField2D::conformal(
            StarDomain::unit_disk(), [](Vec2 x) { return x.x; },
            [](Vec2) { return Vec2{1, 0}; }, [](Vec2) { return Mat2{}; });
        auto G = g.christoffels({0.1, 0.2});
        CHECK(G(0, 0, 0) == Approx(1.0).margin(1e-12));
        CHECK(G(0, 1, 1) == Approx(-1.0).margin(1e-12));
        CHECK(G(1, 0, 1) == Approx(1.0).margin(1e-12));
        CHECK(G(1, 1, 0) == Approx(1.0).margin(1e-12));
        CHECK(G(0, 0, 1) == Approx(0.0).margin(1e-12));
        CHECK(G(1, 0, 0) == Approx(0.0).margin(1e-12));
        CHECK(G(1, 1, 1) == Approx(0.0).margin(1e-12));

        // Cross-check against the finite-difference fallback of the same g0.
        auto gfd = MetricField2D(
            StarDomain::unit_disk(),
            [](Vec2 x) { const real e = std::exp(2 * x.x); return Mat2{e, 0, e}; });
        auto Gfd = gfd.christoffels({0.1, 0.2});
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    CHECK(Gfd(i, j, k) == Approx(G(i, j, k)).margin(1e-8));
    }

    SECTION("symmetry in the lower indices on random points") {
        auto entry = make_gallery_metric("perturbed_disk");
        std::mt19937 rng(11);
        std::uniform_real_distribution<real> U(-0.6, 0.6);
        for (int s = 0; s < 20; ++s) {
            Vec2 x{U(rng), U(rng)};
            auto G = entry.transversal.christoffels(x);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) REQUIRE(G(i, j, k) == G(i, k, j));
        }
    }

    SECTION("error paths") {
        auto g = MetricField2D::euclidean_disk();
        CHECK_THROWS_AS(g.christoffels({2.0, 0.0}), domain_error_pt);
        auto bad = MetricField2D(StarDomain::unit_disk(), [](Vec2) { return Mat2{1, 0, -1}; });
        CHECK_THROWS_AS(bad.christoffels({0, 0}), definiteness_error);
    }
}

TEST_CASE("shoot_geodesic on the euclidean disk") {
    auto g = MetricField2D::euclidean_disk();

    SECTION("diameter chord") {
        UnitTangent ut(g, {-1, 0}, {1, 0});
        auto p = shoot_geodesic(g, ut);
        CHECK(p.tau == Approx(2.0).margin(1e-11));
        CHECK(p.exit_point.x == Approx(1.0).margin(1e-11));
        CHECK(p.exit_point.y == Approx(0.0).margin(1e-11));
    }

    SECTION("chord length formula from boundary starts") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<real> U(0, 2 * kPi);
        std::uniform_real_distribution<real> P(-1.2, 1.2);
        for (int k = 0; k < 10; ++k) {
            const real s = U(rng), phi = P(rng);
            Vec2 x{std::cos(s), std::sin(s)};
            Vec2 nin = x * -1.0;
            Vec2 tan{-x.y, x.x};
            Vec2 v = nin * std::cos(phi) + tan * std::sin(phi);
            auto p = shoot_geodesic(g, UnitTangent(g, x, v));
            CHECK(p.tau == Approx(-2 * dot(x, v)).margin(1e-10));
        }
    }

    SECTION("tangent start errors out") {
        CHECK_THROWS_AS(shoot_geodesic(g, UnitTangent(g, {1, 0}, {0, 1})), tangency_error);
    }
}

TEST_CASE("shoot_geodesic on a perturbed metric matches a refined oracle") {
    // g0 = (1 + 0.1 exp(-|x|^2)) I
    detail::Bump b{{0, 0}, 1.0};
    auto g = detail::scalar_conformal(
        StarDomain::unit_disk(), [b](Vec2 x) { return 1 + 0.1 * b(x); },
        [b](Vec2 x) { return b.grad(x) * 0.1; }, [b](Vec2 x) { return b.hess(x) * 0.1; });

    GeodesicOptions opt;
    opt.rk_tol = 1e-11;
    opt.max_step = 0.02;  // dense-output error must sit below 10*rk_tol
    UnitTangent ut(g, {-0.9, 0.15}, {1, 0.12});
    auto p = shoot_geodesic(g, ut, opt);

    GeodesicOptions fine = opt;
    fine.rk_tol = 1e-13;
    fine.max_step = opt.max_step / 2;
    auto q = shoot_geodesic(g, ut, fine);

    CHECK(std::abs(p.tau - q.tau) < 10 * opt.rk_tol + 1e-12);
    for (real frac : {0.25, 0.5, 0.75}) {
        auto a = p.eval(frac * p.tau), c = q.eval(frac * p.tau);
        CHECK(norm(a.x - c.x) < 10 * opt.rk_tol);
    }

    SECTION("energy conservation and reversibility") {
        GeodesicOptions tight;
        tight.rk_tol = 1e-12;
        tight.max_step = 0.015;
        auto r = shoot_geodesic(g, ut, tight);
        CHECK(r.energy_drift < 100 * tight.rk_tol);
        // The reversed ray passes through the interior start point at
        // parameter tau.
        auto back = shoot_geodesic(g, UnitTangent(g, r.exit_point, r.exit_dir * -1.0), tight);
        REQUIRE(back.tau > r.tau - 1e-9);
        CHECK(norm(back.eval(r.tau).x - ut.x) < 10 * tight.rk_tol);
    }
}

TEST_CASE("gauss curvature of the round metric is 1") {
    auto cap = detail::sphere_cap(0.55);
    for (Vec2 x : {Vec2{0, 0}, Vec2{0.4, 0.1}, Vec2{-0.3, 0.5}})
        CHECK(cap.gauss_curvature(x) == Approx(1.0).margin(1e-7));
}

TEST_CASE("simplicity diagnostics") {
    SECTION("euclidean disk passes with unit margins") {
        auto rep = simplicity_diagnostics(MetricField2D::euclidean_disk(), 12);
        CHECK(rep.pass());
        CHECK(rep.convexity_margin == Approx(1.0).margin(1e-6));
        CHECK(rep.jacobi_margin == Approx(1.0).margin(1e-6));
    }
    SECTION("large sphere cap trips the conjugate point detector") {
        auto rep = simplicity_diagnostics(detail::sphere_cap(1.6), 12);
        CHECK_FALSE(rep.no_conjugate_points);
        CHECK_FALSE(rep.pass());
    }
    SECTION("small perturbations keep positive margins") {
        auto entry = make_gallery_metric("perturbed_disk");
        auto rep = simplicity_diagnostics(entry.transversal, 12);
        CHECK(rep.pass());
        CHECK(rep.jacobi_margin > 0.5);
        CHECK(rep.convexity_margin > 0.5);
    }
}

TEST_CASE("polar coordinates") {
    SECTION("flat chart is euclidean polar") {
        auto g = MetricField2D::euclidean_disk();
        PolarChart chart(g, {0, 0});
        auto pc = chart.polar_coords({0.3, 0.4});
        CHECK(pc.r == Approx(0.5).margin(1e-10));
        CHECK(pc.theta == Approx(std::atan2(0.4, 0.3)).margin(1e-10));
        CHECK(chart.jacobian(0.5, pc.theta) == Approx(0.5).margin(1e-9));
    }

    SECTION("roundtrip exp(polar(x)) == x on random points") {
        auto entry = make_gallery_metric("conformal_bump");
        PolarChart chart(entry.transversal, {-0.1, 0.05});
        std::mt19937 rng(17);
        std::uniform_real_distribution<real> U(-0.75, 0.75);
        int done = 0;
        for (int k = 0; done < 40 && k < 400; ++k) {
            Vec2 x{U(rng), U(rng)};
            if (norm(x) > 0.85 || norm(x - chart.center()) < 0.05) continue;
            auto pc = chart.polar_coords(x);
            Vec2 back = chart.exp(pc.r, pc.theta);
            REQUIRE(norm(back - x) < 1e-8);
            ++done;
        }
        REQUIRE(done == 40);
    }

    SECTION("radial conformal metric: closed-form distance, theta preserved") {
        // Round metric with k: distance from the origin is 2 atan(k |x|) / ...
        const real k = 0.55;
        auto cap = detail::sphere_cap(k);
        PolarChart chart(cap, {0, 0});
        Vec2 x{0.35, 0.45};
        auto pc = chart.polar_coords(x);
        // integral of sqrt(s(t)) dt = int 2k/(1+k^2 t^2) dt = 2 atan(k t)
        CHECK(pc.r == Approx(2 * std::atan(k * norm(x))).margin(1e-9));
        CHECK(pc.theta == Approx(std::atan2(x.y, x.x)).margin(1e-9));
    }
}

TEST_CASE("influx grid") {
    auto g = MetricField2D::euclidean_disk();

    SECTION("every node points inward") {
        InfluxGrid grid(g, 24, 16);
        for (const auto& n : grid.nodes()) {
            Vec2 nu_out = n.x;  // unit disk outward normal
            CHECK(dot(n.v, nu_out) <= 0);
            CHECK(g.norm(n.x, n.v) == Approx(1.0).margin(1e-12));
        }
    }

    SECTION("mu volume of the euclidean disk influx bundle is 4*pi") {
        InfluxGrid grid(g, 32, 24);
        CHECK(grid.mu_volume() == Approx(4 * kPi).margin(1e-8));
        InfluxGrid fine(g, 64, 48);
        CHECK(std::abs(fine.mu_volume() - 4 * kPi) <
              std::abs(grid.mu_volume() - 4 * kPi) + 1e-12);
    }

    SECTION("locate inverts node placement") {
        auto entry = make_gallery_metric("perturbed_disk");
        InfluxGrid grid(entry.transversal, 12, 8);
        for (const auto& n : grid.nodes()) {
            auto [u, phi] = grid.locate(n.x, n.v);
            CHECK(u == Approx(n.u).margin(1e-10));
            CHECK(phi == Approx(n.phi).margin(1e-10));
        }
    }
}

TEST_CASE("metric validation") {
    auto entry = make_gallery_metric("conformal_bump");
    auto rep = entry.transversal.validate();
    CHECK(rep.pass);
    CHECK_FALSE(rep.fd_fallback);
    CHECK(rep.min_eig >= MetricField2D::kEpsPd);
    CHECK(rep.max_d1_defect < 1e-8);

    auto fdonly = MetricField2D(StarDomain::unit_disk(),
                                [](Vec2 x) { const real e = 1 + 0.1 * x.x * x.x; return Mat2{e, 0, e}; });
    CHECK(fdonly.validate().fd_fallback);
}

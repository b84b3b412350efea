#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "sil/error.hpp"
#include "sil/potential.hpp"
#include "sil/quadrature.hpp"

using namespace sil;
using gen::vec;

namespace {
Potential spheres() { return Potential(ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0)); }
}

TEST_SUITE("potential")
{
    TEST_CASE("F vanishes on the wells and is positive off them")
    {
        Potential p = spheres();
        gen::Gen g(21);
        for (int k = 0; k < gen::kCases; ++k) {
            VecN dir = g.unit(2);
            CHECK(p.F_eval(VecN(vec({2, 0}) + dir)) == doctest::Approx(0.0).epsilon(1e-14));
            VecN u = g.box(vec({-3.5, -1.5}), vec({3.5, 1.5}));
            double F = p.F_eval(u);
            CHECK(F >= 0.0);
            if (p.manifold().dist_m(u) > 1e-6) CHECK(F > 0.0);
        }
    }

    TEST_CASE("grad F agrees with central differences")
    {
        Potential p = spheres();
        gen::Gen g(22);
        for (int k = 0; k < gen::kCases; ++k) {
            VecN u = vec({2, 0}) + g.uniform(0.8, 1.2) * g.unit(2);
            VecN gr = p.grad_F(u);
            for (int i = 0; i < 2; ++i) {
                VecN e = VecN::Zero(2);
                e[i] = 1e-6;
                double fd = (p.F_eval(VecN(u + e)) - p.F_eval(VecN(u - e))) / 2e-6;
                CHECK(gr[i] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
            }
        }
    }

    TEST_CASE("ramp constants glue f continuously")
    {
        Potential p = spheres();
        const PotentialParams& q = p.params();
        CHECK(q.c4 == doctest::Approx(3.0 * q.c3 / (q.delta0 * q.delta0)));
        double s = q.delta0 * q.delta0;
        CHECK(p.f_value(s * (1 - 1e-12)) == doctest::Approx(p.f_value(s * (1 + 1e-12))).epsilon(1e-9));
        CHECK(p.f_value(0.0) == 0.0);
        CHECK_THROWS_AS(p.f_eval(-1.0), Error);
    }

    TEST_CASE("quasi-distance endpoints and the gradient bound")
    {
        Potential p = spheres();
        CHECK(p.quasi_dist(vec({-1, 0})) == doctest::Approx(0.0));
        CHECK(p.quasi_dist(vec({1, 0})) == doctest::Approx(p.cF()).epsilon(1e-12));
        CHECK(p.cF() == doctest::Approx(2.0 * p.I(1.0)).epsilon(1e-12));
        gen::Gen g(23);
        for (int k = 0; k < gen::kCases; ++k) {
            VecN u = g.box(vec({-3.5, -1.5}), vec({3.5, 1.5}));
            double half = 0.5 * p.manifold().gap();
            if (std::abs(p.manifold().dist_component(u, Side::Plus) - half) < 1e-6 ||
                std::abs(p.manifold().dist_component(u, Side::Minus) - half) < 1e-6)
                continue;
            VecN gq = p.grad_quasi_dist(u);
            CHECK(gq.norm() <= std::sqrt(2.0 * p.F_eval(u)) + 1e-10);
            double v = p.quasi_dist(u);
            CHECK(v >= -1e-14);
            CHECK(v <= p.cF() + 1e-12);
        }
    }

    TEST_CASE("I is odd and its table matches adaptive quadrature")
    {
        Potential p = spheres();
        gen::Gen g(24);
        for (int k = 0; k < 50; ++k) {
            double a = g.uniform(0.0, 1.0);
            CHECK(p.I(-a) == doctest::Approx(-p.I(a)));
            double ref = adaptive_simpson([&](double l) { return std::sqrt(2.0 * p.f_value(l * l)); }, 0.0, a, 1e-12);
            CHECK(p.I(a) == doctest::Approx(ref).epsilon(1e-8));
        }
    }

    TEST_CASE("centralized potential is even")
    {
        Potential p = spheres();
        for (double l : {0.0, 0.2, 0.7, 0.99}) CHECK(p.centralized_potential(l) == p.centralized_potential(-l));
        CHECK(p.centralized_potential(1.0) == doctest::Approx(0.0));
    }

    TEST_CASE("quadrature oracles")
    {
        CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) == doctest::Approx(2.0).epsilon(1e-11));
        CHECK(gauss_legendre([](double x) { return std::exp(x); }, 0.0, 1.0, 4) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    }
}

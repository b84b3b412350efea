#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "sil/error.hpp"
#include "sil/profile_1d.hpp"

using namespace sil;
using gen::vec;

namespace {
Potential spheres() { return Potential(ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0)); }
}

TEST_SUITE("profile_1d")
{
    TEST_CASE("surface tension from three routes agrees")
    {
        for (double c3 : {1.0, 0.25, 3.0}) {
            Potential p(ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0), c3);
            CHECK(compute_cF(p) == doctest::Approx(compute_cF_tilde(p)).epsilon(1e-10));
            CHECK(compute_cF(p) == doctest::Approx(p.cF()).epsilon(1e-9));
        }
    }

    TEST_CASE("profile solves the first-order ODE and is odd")
    {
        Potential p = spheres();
        ProfileTable t = build_profile(p);
        CHECK(t.ode_residual(p) <= 1e-6);
        CHECK(t.odd_residual() <= 1e-12);
        CHECK(t.eval_alpha(0.0) == doctest::Approx(0.0).scale(1.0));
        CHECK(t.tail_rate == doctest::Approx(std::sqrt(2.0 * p.params().c4)).epsilon(1e-2));
        CHECK(t.eval_alpha(10 * t.s_max) == t.half);
    }

    TEST_CASE("profile is increasing and alpha' matches finite differences")
    {
        Potential p = spheres();
        ProfileTable t = build_profile(p);
        gen::Gen g(31);
        for (int k = 0; k < gen::kCases; ++k) {
            double s1 = g.uniform(-t.s_max, t.s_max), s2 = g.uniform(-t.s_max, t.s_max);
            if (s1 > s2) std::swap(s1, s2);
            CHECK(t.eval_alpha(s1) <= t.eval_alpha(s2));
            double s = g.uniform(-0.8 * t.s_max, 0.8 * t.s_max);
            double fd = (t.eval_alpha(s + 1e-5) - t.eval_alpha(s - 1e-5)) / 2e-5;
            CHECK(t.eval_alpha_prime(s) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
            CHECK(t.eval_alpha_prime(s) == doctest::Approx(std::sqrt(2.0 * p.centralized_potential(t.eval_alpha(s)))).epsilon(1e-5).scale(1.0));
        }
    }

    TEST_CASE("connection between a minimal pair is the straight profile")
    {
        Potential p = spheres();
        ProfileTable t = build_profile(p);
        ConnectionResult r = minimal_connection(p, t, vec({1, 0}), vec({-1, 0}), 1001);
        CHECK(r.action == doctest::Approx(p.cF()).epsilon(5e-3));
        double off = 0.0;
        for (const auto& u : r.path) off = std::max(off, std::abs(u[1]));
        CHECK(off < 1e-10);
    }

    TEST_CASE("connection between scalar wells")
    {
        Potential p(ManifoldPair::two_points(1.0, -1.0, 0.5));
        ProfileTable t = build_profile(p);
        ConnectionResult r = minimal_connection(p, t, vec({1}), vec({-1}), 801);
        CHECK(r.action == doctest::Approx(p.cF()).epsilon(5e-3));
    }

    TEST_CASE("a non-minimal pair costs more than c_F")
    {
        Potential p = spheres();
        ProfileTable t = build_profile(p);
        ConnectionResult r = minimal_connection(p, t, vec({2, 1}), vec({-1, 0}), 1001);
        CHECK(r.action > p.cF() + 1e-3);
    }

    TEST_CASE("connection input errors")
    {
        Potential p = spheres();
        ProfileTable t = build_profile(p);
        try {
            minimal_connection(p, t, vec({1.5, 0}), vec({-1, 0}), 1001);
            FAIL("expected EndpointOffManifold");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EndpointOffManifold);
        }
        CHECK_THROWS_AS(minimal_connection(p, t, vec({1, 0}), vec({-1, 0}), 1000), Error);
    }
}

#include <doctest.h>

#include <cmath>

#include "bench.hpp"
#include "sil/error.hpp"

using namespace sil;
using gen::vec;
using gen::vecd;

TEST_SUITE("initial_data")
{
    TEST_CASE("collar and pair validation")
    {
        Potential p = bench::capsules();
        ProfileTable t = build_profile(p);
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.2);
        try {
            InitialData bad(p, t, c, bench::sliding(0.25));
            FAIL("expected CollarTooWide");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::CollarTooWide);
        }
        Potential s = bench::spheres();
        ProfileTable ts = build_profile(s);
        InitialMaps m = bench::constant_pair(0.05);
        m.p_plus = vec({2, 1});
        CHECK_THROWS_AS(InitialData(s, ts, c, m), Error);
        CHECK_THROWS_AS(InitialData(s, ts, c, bench::sliding(0.05)), Error);
    }

    TEST_CASE("bulk maps stay on their wells and the pair is minimal")
    {
        Potential p = bench::capsules();
        ProfileTable t = build_profile(p);
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.2);
        InitialData init(p, t, c, bench::sliding(0.12));
        gen::Gen g(51);
        for (int k = 0; k < gen::kCases; ++k) {
            VecD x = vecd({g.uniform(-1, 1), g.uniform(-1, 1)});
            VecN up = init.u_in(x, Side::Plus), um = init.u_in(x, Side::Minus);
            CHECK(p.manifold().dist_component(up, Side::Plus) < 1e-12);
            CHECK(p.manifold().dist_component(um, Side::Minus) < 1e-12);
            CHECK((up - um).norm() == doctest::Approx(p.dist_m()).epsilon(1e-12));
        }
    }

    TEST_CASE("squeeze maps [delta, 2 delta] onto [0, 2 delta] monotonically")
    {
        Potential p = bench::capsules();
        ProfileTable t = build_profile(p);
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.2);
        InitialData init(p, t, c, bench::sliding(0.1));
        CHECK(init.squeeze(0.1) == doctest::Approx(0.0).scale(1.0));
        CHECK(init.squeeze(0.2) == doctest::Approx(0.2));
        CHECK(init.squeeze(-0.15) == -init.squeeze(0.15));
        CHECK_THROWS_AS(init.squeeze(0.05), Error);
        gen::Gen g(52);
        for (int k = 0; k < gen::kCases; ++k) {
            double a = g.uniform(0.1, 0.2), b = g.uniform(0.1, 0.2);
            if (a > b) std::swap(a, b);
            CHECK(init.squeeze(a) <= init.squeeze(b) + 1e-15);
            CHECK(init.squeeze_prime(a) >= 0.0);
            double fd = (init.squeeze(a + 1e-7) - init.squeeze(a - 1e-7)) / 2e-7;
            if (a > 0.1 + 1e-6 && a < 0.2 - 1e-6) CHECK(init.squeeze_prime(a) == doctest::Approx(fd).epsilon(1e-5));
        }
    }

    TEST_CASE("glued field: far field equals the bulk map, interface sits at the pair midpoint")
    {
        Potential p = bench::capsules();
        ProfileTable t = build_profile(p);
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.2);
        InitialData init(p, t, c, bench::sliding(0.12));
        double eps = 0.04;
        VecD far = vecd({0.9, 0.3});
        CHECK((init.value(far, eps) - init.u_in(far, Side::Minus)).norm() < 1e-15);
        VecD in = vecd({0.05, -0.1});
        CHECK((init.value(in, eps) - init.u_in(in, Side::Plus)).norm() < 1e-15);
        VecD on = vecd({0.5 * std::cos(0.4), 0.5 * std::sin(0.4)});
        VecN mid = 0.5 * (init.u_in(on, Side::Plus) + init.u_in(on, Side::Minus));
        CHECK((init.value(on, eps) - mid).norm() < 1e-12);
        CHECK_THROWS_AS(init.psi_delta(on), Error);
        try {
            init.extend_u0(far, Side::Plus);
            FAIL("expected OutsideDomainOfSide");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::OutsideDomainOfSide);
        }
    }

    TEST_CASE("initial field stays within the wells' hull")
    {
        Potential p = bench::capsules();
        ProfileTable t = build_profile(p);
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.5, 0.2);
        InitialData init(p, t, c, bench::sliding(0.12));
        Grid g = Grid::make({-1, -1}, {1, 1}, {65, 65});
        Field f = init.build_initial_field(g, 0.04);
        CHECK(f.n == 2);
        CHECK(f.max_norm() <= std::sqrt(1.0 + 1.0) + 1e-12);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(f.at(i)[0]) <= 1.0 + 1e-12);
    }
}

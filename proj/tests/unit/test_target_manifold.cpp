#include <doctest.h>

#include "gen.hpp"
#include "sil/error.hpp"
#include "sil/target_manifold.hpp"

using namespace sil;
using gen::vec;

TEST_SUITE("target_manifold")
{
    TEST_CASE("sphere distances match the closed form")
    {
        auto m = ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0);
        CHECK(m.gap() == doctest::Approx(2.0));
        gen::Gen g(11);
        for (int k = 0; k < gen::kCases; ++k) {
            VecN u = g.box(vec({0.5, -1.5}), vec({3.5, 1.5}));
            double exact = (u - vec({2, 0})).norm() - 1.0;
            CHECK(m.dist_component(u, Side::Plus) == doctest::Approx(std::abs(exact)).epsilon(1e-12));
        }
    }

    TEST_CASE("capsule distance is the distance to its segment minus the radius")
    {
        auto m = ManifoldPair::two_capsules(vec({3, -1}), vec({3, 1}), 0.5, vec({-3, -1}), vec({-3, 1}), 0.5);
        CHECK(m.gap() == doctest::Approx(5.0));
        CHECK(m.dist_component(vec({2.0, 0.7}), Side::Plus) == doctest::Approx(0.5));
        CHECK(m.dist_component(vec({3.0, 2.0}), Side::Plus) == doctest::Approx(0.5));
        auto [mp, mm] = m.minimal_sets();
        CHECK(mp.a[0] == doctest::Approx(2.5));
        CHECK(mm.a[0] == doctest::Approx(-2.5));
        CHECK_FALSE(mp.is_point());
    }

    TEST_CASE("projection is idempotent and realises the distance")
    {
        auto m = ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0);
        gen::Gen g(12);
        for (int k = 0; k < gen::kCases; ++k) {
            Side s = k % 2 ? Side::Plus : Side::Minus;
            VecN c = s == Side::Plus ? vec({2, 0}) : vec({-2, 0});
            VecN u = c + g.uniform(0.6, 1.4) * g.unit(2);
            VecN p = m.project_component(u, s);
            CHECK(m.dist_component(p, s) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK((m.project_component(p, s) - p).norm() < 1e-12);
            CHECK((u - p).norm() == doctest::Approx(m.dist_component(u, s)).epsilon(1e-12));
        }
    }

    TEST_CASE("minimal pairs")
    {
        auto m = ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0);
        CHECK(m.is_minimal_pair(vec({1, 0}), vec({-1, 0}), 1e-9));
        CHECK_FALSE(m.is_minimal_pair(vec({2, 1}), vec({-1, 0}), 1e-9));
    }

    TEST_CASE("invalid targets are rejected")
    {
        CHECK_THROWS_AS(ManifoldPair::two_spheres(vec({1, 0}), 1.0, vec({-0.5, 0}), 1.0), Error);
        CHECK_THROWS_AS(ManifoldPair::two_points(1.0, 1.0), Error);
        auto m = ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0);
        CHECK_THROWS_AS(m.project_component(vec({2, 0}), Side::Plus), Error);
    }
}

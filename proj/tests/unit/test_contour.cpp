#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "sil/contour.hpp"
#include "sil/error.hpp"

using namespace sil;

namespace {

double circle_error(int n, double R)
{
    Grid g = Grid::make({-1, -1}, {1, 1}, {n, n});
    std::vector<double> psi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) psi[i] = R - g.coord(i).norm();
    return std::abs(extract_level(g, psi, 0.0).measure - 2 * M_PI * R);
}

}  // namespace

TEST_SUITE("contour")
{
    TEST_CASE("circle perimeter converges at second order")
    {
        double e1 = circle_error(65, 0.43), e2 = circle_error(129, 0.43), e3 = circle_error(257, 0.43);
        CHECK(e2 < e1);
        CHECK(e3 < e2);
        CHECK(std::log2(e1 / e3) / 2.0 == doctest::Approx(2.0).epsilon(0.25));
    }

    TEST_CASE("level set vertices lie on the level of a linear field")
    {
        gen::Gen r(71);
        Grid g = Grid::make({0, 0}, {1, 1}, {33, 33});
        for (int k = 0; k < 20; ++k) {
            double a = r.uniform(-1, 1), b = r.uniform(-1, 1), c = r.uniform(0.2, 0.8);
            if (std::abs(a) + std::abs(b) < 0.1) continue;
            std::vector<double> psi(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                VecD x = g.coord(i);
                psi[i] = a * x[0] + b * x[1];
            }
            double level = c * (a * 0.5 + b * 0.5) + 1e-3;
            LevelSet ls;
            try {
                ls = extract_level(g, psi, level);
            } catch (const Error&) {
                continue;
            }
            for (const auto& p : ls.vertices()) CHECK(a * p[0] + b * p[1] == doctest::Approx(level).epsilon(1e-9).scale(1.0));
        }
    }

    TEST_CASE("saddle cells keep segments disjoint")
    {
        Grid g = Grid::make({-1, -1}, {1, 1}, {17, 17});
        std::vector<double> psi(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            VecD x = g.coord(i);
            psi[i] = x[0] * x[1];
        }
        LevelSet ls = extract_level(g, psi, 0.01);
        CHECK(ls.segments.size() > 0);
        CHECK(ls.measure > 0.0);
    }

    TEST_CASE("1-D crossings and empty sets")
    {
        Grid g = Grid::make({-1}, {1}, {21});
        std::vector<double> psi(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) psi[i] = g.coord(i)[0];
        LevelSet ls = extract_level(g, psi, 0.33);
        REQUIRE(ls.points.size() == 1);
        CHECK(ls.points[0] == doctest::Approx(0.33));
        CHECK(ls.measure == 1.0);
        try {
            extract_level(g, psi, 5.0);
            FAIL("expected EmptyLevelSet");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyLevelSet);
        }
    }
}

#include <doctest.h>

#include <sstream>

#include "gen.hpp"
#include "sil/error.hpp"
#include "sil/grid.hpp"

using namespace sil;

TEST_SUITE("grid")
{
    TEST_CASE("index and multi-index are inverse")
    {
        gen::Gen g(61);
        for (int k = 0; k < 20; ++k) {
            int dim = g.integer(1, 3);
            std::vector<double> lo(dim, -1.0), hi(dim, 1.0);
            std::vector<int> counts(dim, g.integer(16, 24));
            Grid grid = Grid::make(lo, hi, counts);
            for (int j = 0; j < 50; ++j) {
                std::size_t idx = static_cast<std::size_t>(g.integer(0, static_cast<int>(grid.size()) - 1));
                CHECK(grid.index(grid.multi(idx)) == idx);
            }
        }
    }

    TEST_CASE("axis 0 is slowest and the trapezoid weights integrate constants exactly")
    {
        Grid g = Grid::make({0, 0}, {1, 1}, {17, 17});
        CHECK(g.coord(1)[1] == doctest::Approx(1.0 / 16));
        CHECK(g.coord(17)[0] == doctest::Approx(1.0 / 16));
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) sum += g.trap_weight(i) * g.cell_volume();
        CHECK(sum == doctest::Approx(1.0));
        CHECK(g.is_boundary(0));
        CHECK_FALSE(g.is_boundary(g.index({8, 8, 0})));
    }

    TEST_CASE("grid validation")
    {
        CHECK_THROWS_AS(Grid::make({0}, {1}, {8}), Error);
        CHECK_THROWS_AS(Grid::make({0, 0}, {1, 2}, {17, 17}), Error);
    }

    TEST_CASE("snapshot round trip and corruption")
    {
        Grid g = Grid::make({-1, -1}, {1, 1}, {16, 20 - 4});
        Field f(g, 2);
        gen::Gen r(62);
        for (double& v : f.data) v = r.uniform(-1, 1);
        f.t = 0.125;
        std::stringstream ss;
        write_snapshot(ss, f, 0.05);
        std::string bytes = ss.str();
        CHECK(bytes.substr(0, 9) == "{\"dims\":2");
        double eps = 0.0;
        std::stringstream in(bytes);
        Field h = read_snapshot(in, &eps);
        CHECK(eps == 0.05);
        CHECK(h.t == 0.125);
        CHECK(h.data == f.data);
        std::stringstream cut(bytes.substr(0, bytes.size() - 8));
        try {
            read_snapshot(cut);
            FAIL("expected DataCorrupt");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DataCorrupt);
        }
    }

    TEST_CASE("boundary data holds the initial boundary values")
    {
        Grid g = Grid::make({0}, {1}, {20});
        Field f(g, 1);
        for (std::size_t i = 0; i < g.size(); ++i) f.at(i)[0] = static_cast<double>(i);
        BoundaryData bc = BoundaryData::from_field(f);
        CHECK(bc.nodes.size() == 2);
        f.at(0)[0] = 7.0;
        CHECK(bc.max_mismatch(f) == 7.0);
        bc.apply(f);
        CHECK(f.at(0)[0] == 0.0);
    }
}

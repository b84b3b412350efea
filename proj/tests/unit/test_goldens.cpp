#include <doctest.h>

#include <cmath>
#include <fstream>

#include "sil/harness.hpp"

using namespace sil;

namespace {

nlohmann::json goldens()
{
    std::ifstream is(SIL_GOLDENS);
    REQUIRE(is.good());
    return nlohmann::json::parse(is);
}

std::string cfg(const char* rel) { return std::string(SIL_CONFIG_DIR) + "/" + rel; }

}  // namespace

TEST_SUITE("goldens")
{
    TEST_CASE("surface tension matches straight-line Gauss-Legendre")
    {
        auto g = goldens();
        Config c = load_config(cfg("goldens.json"));
        for (const auto& [name, desc] : c.doc["goldens"]["targets"].items()) {
            Potential p(build_manifold(desc["manifold"]), desc.value("c3", 1.0));
            CHECK(p.cF() == doctest::Approx(g["cF"][name].get<double>()).epsilon(1e-9));
        }
    }

    TEST_CASE("Hessian bound dominates the sampled Hessian and is attained")
    {
        auto g = goldens();
        Config c = load_config(cfg("goldens.json"));
        Potential p(build_manifold(c.manifold), c.c3, c.ramp);
        double sampled = g["hessian_bound_sampled"].get<double>();
        CHECK(p.hessian_bound() >= sampled * (1 - 1e-6));
        CHECK(p.hessian_bound() <= sampled * 1.01);
    }

    TEST_CASE("default time step")
    {
        auto g = goldens();
        Model m = build_model(load_config(cfg("examples/default_2d.json")));
        Grid grid = m.cfg.domain->grid_for(m.cfg.solver.eps);
        double dt = dt_stability(grid.h, m.cfg.solver.eps, grid.dim, m.pot->hessian_bound(), m.cfg.solver.dt_safety);
        double ref = g["dt_default"].get<double>();
        CHECK(dt <= ref * (1 + 1e-12));
        CHECK(dt >= ref * 0.99);
    }

    TEST_CASE("non-minimal connection margin")
    {
        auto g = goldens();
        Model m = build_model(load_config(cfg("acceptance/connect.json")));
        const ConnectSpec& cs = *m.cfg.connect;
        Potential p(build_manifold(cs.q_manifold), m.cfg.c3, m.cfg.ramp);
        ProfileTable t = build_profile(p);
        ConnectionResult r = minimal_connection(p, t, cs.q_plus, cs.q_minus, cs.nodes, cs.s_half);
        CHECK(r.action - p.cF() == doctest::Approx(g["nonminimal_excess"].get<double>()).epsilon(1e-6));
    }

    TEST_CASE("marching-squares circle error")
    {
        auto g = goldens();
        Config c = load_config(cfg("goldens.json"));
        double R = c.doc["goldens"]["circle_radius"].get<double>();
        int n = c.doc["goldens"]["circle_counts"].get<int>();
        Grid grid = Grid::make({-1, -1}, {1, 1}, {n, n});
        std::vector<double> psi(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) psi[i] = R - grid.coord(i).norm();
        double err = std::abs(level_set_perimeter(grid, psi, 0.0) - 2 * M_PI * R);
        CHECK(err == doctest::Approx(g["circle_perimeter_error"].get<double>()).epsilon(1e-9));
        CHECK(err < grid.h * grid.h * 10);
    }

    TEST_CASE("one-dimensional layer L1 error")
    {
        auto g = goldens();
        Model m = build_model(load_config(cfg("acceptance/front_1d.json")));
        double eps = m.cfg.solver.eps;
        InitialData init(*m.pot, m.table, *m.iface, *m.cfg.maps);
        Field f = init.build_initial_field(m.cfg.domain->grid_for(eps), eps);
        CHECK(l1_front_error(m.context(eps, 0), f) == doctest::Approx(g["layer_l1"].get<double>()).epsilon(1e-9));
    }
}

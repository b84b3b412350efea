#include <doctest.h>

#include <cmath>

#include "bench.hpp"
#include "sil/error.hpp"
#include "sil/pde_solver.hpp"

using namespace sil;
using gen::vec;
using gen::vecd;

namespace {

Field front_1d(const Potential& p, const ProfileTable& t, const Interface& iface, double eps, int nodes)
{
    InitialData init(p, t, iface, bench::constant_pair(0.12));
    return init.build_initial_field(Grid::make({-1}, {1}, {nodes}), eps);
}

}  // namespace

TEST_SUITE("pde_solver")
{
    TEST_CASE("time step limits")
    {
        CHECK(dt_stability(0.01, 0.04, 2, 96.0, 0.5) == doctest::Approx(0.5 * 0.0016 / 192.0));
        CHECK(dt_stability(0.01, 0.4, 2, 6.0, 1.0) == doctest::Approx(0.0001 / 4.0));
        CHECK(dt_stability(0.01, 0.4, 2, 6.0, 1.0, Scheme::IMEX) == doctest::Approx(0.16 / 12.0));
        CHECK_THROWS_AS(dt_stability(0.01, 0.04, 2, 96.0, 1.5), Error);
    }

    TEST_CASE("discrete Laplacian is exact on quadratics")
    {
        Grid g = Grid::make({-1, -1}, {1, 1}, {21, 21});
        Field f(g, 2);
        for (std::size_t i = 0; i < g.size(); ++i) {
            VecD x = g.coord(i);
            f.at(i)[0] = x.squaredNorm();
            f.at(i)[1] = 3.0 * x[0] - x[1];
        }
        auto L = laplacian(f);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g.is_boundary(i)) {
                CHECK(L[2 * i] == 0.0);
                continue;
            }
            CHECK(L[2 * i] == doctest::Approx(4.0).epsilon(1e-10));
            CHECK(L[2 * i + 1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
        }
    }

    TEST_CASE("a constant well state is stationary with zero energy")
    {
        Potential p = bench::spheres();
        Grid g = Grid::make({-1}, {1}, {33});
        Field f(g, 2);
        for (std::size_t i = 0; i < g.size(); ++i) f.set(i, vec({1, 0}));
        SolverConfig cfg;
        cfg.eps = 0.05;
        Solver s(p, g, BoundaryData::from_field(f), cfg);
        std::vector<double> r;
        CHECK(s.rhs(f, r) == 0.0);
        for (double v : r) CHECK(v == 0.0);
    }

    TEST_CASE("gradient flow: energy decreases, sup norm bounded, boundary held")
    {
        Potential p = bench::spheres();
        ProfileTable t = build_profile(p);
        Interface iface = Interface::stationary_point(0.0, 0.5);
        for (Scheme sch : {Scheme::ExplicitHeun, Scheme::IMEX}) {
            Field f = front_1d(p, t, iface, 0.08, 161);
            SolverConfig cfg;
            cfg.eps = 0.08;
            cfg.scheme = sch;
            cfg.dt_safety = 0.5;
            cfg.T_final = 0.02;
            cfg.record_count = 4;
            int calls = 0;
            RunStats st = run(p, f, cfg, [&](const Field&, const std::vector<double>&, double) { ++calls; });
            CHECK(calls == 5);
            CHECK(st.worst_energy_increase <= 1e-12);
            CHECK(st.sup_max_norm <= st.initial_max_norm + p.delta0() + 1e-6);
            CHECK(st.boundary_mismatch == 0.0);
            CHECK(st.t_end == doctest::Approx(0.02));
        }
    }

    TEST_CASE("IMEX and Heun agree to first order in dt")
    {
        Potential p = bench::spheres();
        ProfileTable t = build_profile(p);
        Interface iface = Interface::stationary_point(0.1, 0.4);
        Field a = front_1d(p, t, iface, 0.08, 161), b = a;
        SolverConfig cfg;
        cfg.eps = 0.08;
        cfg.dt_safety = 0.5;
        cfg.T_final = 0.01;
        run(p, a, cfg, nullptr);
        cfg.scheme = Scheme::IMEX;
        cfg.dt_safety = 0.05;
        run(p, b, cfg, nullptr);
        double diff = 0.0;
        for (std::size_t i = 0; i < a.data.size(); ++i) diff = std::max(diff, std::abs(a.data[i] - b.data[i]));
        CHECK(diff < 5e-3);
    }

    TEST_CASE("an unstable step is detected")
    {
        Potential p = bench::spheres();
        ProfileTable t = build_profile(p);
        Interface iface = Interface::stationary_point(0.0, 0.5);
        Field f = front_1d(p, t, iface, 0.08, 161);
        SolverConfig cfg;
        cfg.eps = 0.08;
        Solver s(p, f.grid, BoundaryData::from_field(f), cfg);
        s.set_dt(200.0 * s.dt());
        bool threw = false;
        try {
            for (int k = 0; k < 50; ++k) s.step(f);
        } catch (const Error& e) {
            threw = e.code() == ErrorCode::StabilityViolation;
        }
        CHECK(threw);
    }

    TEST_CASE("runs stop at the interface horizon")
    {
        Potential p = bench::capsules();
        ProfileTable t = build_profile(p);
        Interface c = Interface::shrinking_sphere(vecd({0, 0}), 0.3, 0.1);
        InitialData init(p, t, c, bench::sliding(0.12));
        Field f = init.build_initial_field(Grid::make({-1, -1}, {1, 1}, {33, 33}), 0.1);
        SolverConfig cfg;
        cfg.eps = 0.1;
        cfg.T_final = 1.0;
        cfg.horizon = c.horizon();
        try {
            run(p, f, cfg, nullptr);
            FAIL("expected ExtinctionReached");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ExtinctionReached);
        }
    }
}

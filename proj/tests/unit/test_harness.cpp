#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "sil/error.hpp"
#include "sil/harness.hpp"

using namespace sil;
using nlohmann::json;

namespace {

json tiny_1d()
{
    return json::parse(R"({
      "version": 1,
      "manifold": {"kind": "two_spheres", "plus": {"center": [2, 0], "radius": 1}, "minus": {"center": [-2, 0], "radius": 1}},
      "interface": {"kind": "stationary_point", "x0": 0.0, "delta0": 0.5},
      "initial_data": {"kind": "constant_minimal_pair", "p_plus": [1, 0], "p_minus": [-1, 0], "delta": 0.12},
      "domain": {"lo": [-1], "hi": [1], "h_over_eps": 8},
      "solver": {"eps": 0.08, "dt_safety": 0.5, "T_final": 0.005, "record_count": 2},
      "sweep": {"eps_list": [0.1, 0.08]}
    })");
}

std::string config_error(const json& doc)
{
    try {
        parse_config(doc);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigInvalid);
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("harness")
{
    TEST_CASE("log-log fit recovers exact power laws")
    {
        std::vector<double> eps{0.08, 0.04, 0.02};
        std::vector<double> y1, y2;
        for (double e : eps) {
            y1.push_back(e);
            y2.push_back(3.0 * e * e);
        }
        LogLogFit f1 = fit_loglog(eps, y1);
        CHECK(std::abs(f1.slope - 1.0) < 1e-12);
        CHECK(f1.slope_se < 1e-12);
        LogLogFit f2 = fit_loglog(eps, y2);
        CHECK(std::abs(f2.slope - 2.0) < 1e-12);
        CHECK(f2.intercept == doctest::Approx(std::log(3.0)));
        CHECK_THROWS_AS(fit_loglog({0.1, 0.05}, {1.0, 2.0}), Error);
    }

    TEST_CASE("snapshot policy parsing")
    {
        CHECK(SnapshotPolicy::parse("none").kind == SnapshotPolicy::None);
        CHECK(SnapshotPolicy::parse("final").kind == SnapshotPolicy::Final);
        SnapshotPolicy p = SnapshotPolicy::parse("every:3");
        CHECK(p.kind == SnapshotPolicy::Every);
        CHECK(p.every == 3);
        CHECK_THROWS_AS(SnapshotPolicy::parse("every:0"), Error);
        CHECK_THROWS_AS(SnapshotPolicy::parse("sometimes"), Error);
    }

    TEST_CASE("config validation names the offending field")
    {
        json d = tiny_1d();
        d["version"] = 2;
        CHECK(config_error(d).find("version") != std::string::npos);

        d = json::parse(R"({
          "version": 1,
          "manifold": {"kind": "two_spheres", "plus": {"center": [2, 0], "radius": 1}, "minus": {"center": [-2, 0], "radius": 1}},
          "interface": {"kind": "shrinking_sphere", "center": [0, 0], "r0": 0.95, "delta0": 0.1},
          "domain": {"lo": [-1, -1], "hi": [1, 1], "counts": [64, 64]}
        })");
        CHECK(config_error(d).find("interface.r0") != std::string::npos);

        d = tiny_1d();
        d["solver"]["dt_safety"] = 1.5;
        CHECK(config_error(d).find("solver.dt_safety") != std::string::npos);
        d = tiny_1d();
        d["initial_data"]["delta"] = 0.2;
        CHECK(config_error(d).find("initial_data.delta") != std::string::npos);
        d = tiny_1d();
        d["manifold"]["kind"] = "torus";
        CHECK(config_error(d).find("manifold.kind") != std::string::npos);
        d = tiny_1d();
        d["connect"] = {{"p_plus", {1, 0}}, {"p_minus", {-1, 0}}, {"nodes", 1000}};
        CHECK(config_error(d).find("connect.nodes") != std::string::npos);
    }

    TEST_CASE("perimeter levels start at the smallest admissible k")
    {
        Model m = build_model(parse_config(tiny_1d()));
        int k0 = m.perimeter_k(0);
        CHECK(2.0 / k0 < m.pot->cF() / 2.0);
        CHECK(2.0 / (k0 - 1) >= m.pot->cF() / 2.0);
        CHECK(m.perimeter_k(2) == k0 + 2);
    }

    TEST_CASE("a two-eps sweep reports metrics without slopes")
    {
        Model m = build_model(parse_config(tiny_1d()));
        SweepReport rep = run_sweep(m, "", SnapshotPolicy{});
        CHECK(rep.runs.size() == 2);
        CHECK(rep.slopes.empty());
        CHECK(rep.metrics["sup_E"].size() == 2);
        CHECK_FALSE(rep.to_json().contains("slopes"));
    }
}

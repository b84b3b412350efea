#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sil/acceptance_checks.hpp"
#include "sil/error.hpp"
#include "sil/harness.hpp"

namespace py = pybind11;
using namespace sil;

namespace {

// json crosses the boundary as text; the Python side decodes it
std::string dump(const nlohmann::ordered_json& j) { return j.dump(); }

nlohmann::ordered_json record_json(const DiagnosticsRecord& r)
{
    return {{"t", r.t},
            {"A_eps", r.A_eps},
            {"E_eps", r.E_eps},
            {"B_eps", r.B_eps},
            {"g_eps", r.g_eps},
            {"h_eps", r.h_eps},
            {"l1_front_error", r.l1_front_error},
            {"coer", r.coer},
            {"max_norm", r.max_norm},
            {"radius_est", r.radius_est},
            {"perim_plus", r.perim_plus},
            {"perim_minus", r.perim_minus},
            {"mp_median", r.mp_median},
            {"mp_p90", r.mp_p90},
            {"diss", r.diss}};
}

std::string profile(const std::string& path)
{
    Model m = build_model(load_config(path));
    nlohmann::ordered_json j = {{"cF", m.pot->cF()},
                                {"cF_tilde", compute_cF_tilde(*m.pot)},
                                {"s_max", m.table.s_max},
                                {"tail_rate", m.table.tail_rate},
                                {"s", m.table.s_grid},
                                {"alpha", m.table.alpha},
                                {"alpha_prime", m.table.alpha_prime}};
    return dump(j);
}

std::string run_one(const std::string& path, double eps, const std::string& out_dir, const std::string& snapshots)
{
    Model m = build_model(load_config(path));
    if (!(eps > 0.0)) eps = m.cfg.solver.eps;
    RunOutput r = run_case(m, eps, {}, 0, SnapshotPolicy::parse(snapshots), out_dir, "run");
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) recs.push_back(record_json(rec));
    nlohmann::ordered_json j = {{"eps", r.eps},
                                {"h", r.grid.h},
                                {"steps", r.stats.steps},
                                {"dt", r.stats.dt},
                                {"worst_energy_increase", r.stats.worst_energy_increase},
                                {"initial_max_norm", r.stats.initial_max_norm},
                                {"sup_max_norm", r.stats.sup_max_norm},
                                {"records", recs}};
    return dump(j);
}

std::string sweep_all(const std::string& path, const std::string& out_dir)
{
    Model m = build_model(load_config(path));
    return dump(run_sweep(m, out_dir, SnapshotPolicy{}).to_json());
}

std::string goldens(const std::string& path) { return dump(make_goldens(load_config(path))); }

std::string acceptance(const std::string& config_dir, const std::string& goldens_path, const std::vector<int>& ids)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& r : run_acceptance({config_dir, goldens_path, ""}, ids))
        out.push_back({{"id", r.id}, {"pass", r.pass}, {"summary", r.summary}, {"seconds", r.seconds}});
    return dump(out);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    static py::exception<Error> sil_error(m, "SilError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(sil_error, (std::string(error_name(e.code())) + ": " + e.what()).c_str());
        }
    });
    m.def("profile", &profile, py::arg("config"));
    m.def("run", &run_one, py::arg("config"), py::arg("eps") = 0.0, py::arg("out_dir") = "",
          py::arg("snapshots") = "none");
    m.def("sweep", &sweep_all, py::arg("config"), py::arg("out_dir") = "");
    m.def("make_goldens", &goldens, py::arg("config"));
    m.def("acceptance", &acceptance, py::arg("config_dir"), py::arg("goldens"), py::arg("ids") = std::vector<int>{});
    m.def("fit_loglog", [](const std::vector<double>& x, const std::vector<double>& y) {
        LogLogFit f = fit_loglog(x, y);
        return py::make_tuple(f.slope, f.intercept, f.slope_se);
    });
}

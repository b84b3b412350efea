#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sil/acceptance_checks.hpp"
#include "sil/error.hpp"
#include "sil/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sil;

namespace {

struct Options {
    std::string config;
    std::string out;
    bool strict = false;
    std::string snapshots = "none";
};

std::string out_dir(const Options& o, const Config& cfg)
{
    std::string d = o.out.empty() ? cfg.out_dir : o.out;
    fs::create_directories(d);
    return d;
}

std::string path_in(const std::string& dir, const std::string& name)
{
    return (fs::path(dir) / name).string();
}

// prints the results; returns the exit code under --strict
int report(const std::vector<CriterionResult>& results, bool strict)
{
    bool ok = true;
    for (const auto& r : results) {
        std::cout << format_result(r) << '\n';
        ok = ok && r.pass;
    }
    return strict && !ok ? 3 : 0;
}

std::vector<int> configured_criteria(const Config& cfg)
{
    std::vector<int> ids;
    if (cfg.acceptance.is_object() && cfg.acceptance.contains("criteria"))
        for (const auto& v : cfg.acceptance["criteria"]) ids.push_back(v.get<int>());
    return ids;
}

double golden(const Config& cfg, const char* key)
{
    if (!cfg.acceptance.is_object() || !cfg.acceptance.contains("goldens"))
        throw Error(ErrorCode::ConfigInvalid, "acceptance.goldens: missing");
    std::string p = path_in(cfg.base_dir, cfg.acceptance["goldens"].get<std::string>());
    std::ifstream is(p);
    if (!is) throw Error(ErrorCode::ConfigInvalid, "acceptance.goldens: cannot open " + p);
    return nlohmann::json::parse(is).at(key).get<double>();
}

int cmd_run(const Options& o)
{
    Model m = build_model(load_config(o.config));
    SnapshotPolicy snaps = SnapshotPolicy::parse(o.snapshots);
    std::string dir = out_dir(o, m.cfg);
    RunOutput r = run_case(m, m.cfg.solver.eps, {}, 0, snaps, dir, "run");
    const DiagnosticsRecord& last = r.records.back();
    ordered_json j = {{"eps", r.eps},
                      {"h", r.grid.h},
                      {"steps", r.stats.steps},
                      {"dt", r.stats.dt},
                      {"t_end", r.stats.t_end},
                      {"A_eps", last.A_eps},
                      {"E_eps", last.E_eps},
                      {"B_eps", last.B_eps},
                      {"radius_est", last.radius_est},
                      {"initial_max_norm", r.stats.initial_max_norm},
                      {"sup_max_norm", r.stats.sup_max_norm},
                      {"worst_energy_increase", r.stats.worst_energy_increase},
                      {"csv", path_in(dir, "run.csv")}};
    std::cout << j.dump(2) << '\n';
    if (!o.strict) return 0;
    bool ok = r.stats.worst_energy_increase <= 1e-8 &&
              r.stats.sup_max_norm <= r.stats.initial_max_norm + m.pot->delta0() + 1e-6;
    std::cout << (ok ? "run checks: PASS" : "run checks: FAIL") << '\n';
    return ok ? 0 : 3;
}

int cmd_sweep(const Options& o)
{
    Model m = build_model(load_config(o.config));
    std::string dir = out_dir(o, m.cfg);
    SweepReport rep = run_sweep(m, dir, SnapshotPolicy{});
    ordered_json j = rep.to_json();
    std::vector<CriterionResult> results;
    std::vector<int> ids = configured_criteria(m.cfg);
    if (!ids.empty()) {
        FrontEvidence ev;
        if (m.iface->kind() == InterfaceKind::StationaryPoint) {
            ev.line = &m;
            ev.line_report = std::move(rep);
            for (const auto& run : ev.line_report.runs) ev.line_seconds += run.seconds;
        } else {
            ev.circle = &m;
            ev.circle_report = std::move(rep);
            for (const auto& run : ev.circle_report.runs) ev.circle_seconds += run.seconds;
        }
        ordered_json flags = ordered_json::array();
        for (int id : ids) {
            results.push_back(check_front(id, ev));
            flags.push_back({{"criterion", id}, {"pass", results.back().pass}, {"summary", results.back().summary}});
        }
        j["acceptance"] = flags;
    }
    std::ofstream(path_in(dir, "sweep_report.json")) << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return report(results, o.strict);
}

int cmd_profile(const Options& o)
{
    Model m = build_model(load_config(o.config));
    std::string dir = out_dir(o, m.cfg);
    write_profile_csv(path_in(dir, "profile.csv"), m.table);
    ordered_json j = {{"cF", m.pot->cF()},
                      {"cF_tilde", compute_cF_tilde(*m.pot)},
                      {"s_max", m.table.s_max},
                      {"tail_rate", m.table.tail_rate},
                      {"csv", path_in(dir, "profile.csv")}};
    std::cout << j.dump(2) << '\n';
    if (!o.strict) return 0;
    return report({check_cF(m), check_profile(m)}, true);
}

int cmd_connect(const Options& o)
{
    Model m = build_model(load_config(o.config));
    if (!m.cfg.connect) throw Error(ErrorCode::ConfigInvalid, "connect: missing");
    std::string dir = out_dir(o, m.cfg);
    const ConnectSpec& cs = *m.cfg.connect;
    ConnectionResult main, q;
    std::vector<CriterionResult> results;
    if (o.strict) {
        results.push_back(check_connection(m, golden(m.cfg, "nonminimal_excess"), &main, &q));
        results.back().id = 3;
    } else {
        main = minimal_connection(*m.pot, m.table, cs.p_plus, cs.p_minus, cs.nodes, cs.s_half);
    }
    write_path_csv(path_in(dir, "path.csv"), main);
    ordered_json j = {{"cF", m.pot->cF()}, {"action", main.action}, {"iterations", main.iterations},
                      {"grad_norm", main.grad_norm}, {"converged", main.converged}};
    if (o.strict && cs.has_nonminimal) {
        write_path_csv(path_in(dir, "path_nonminimal.csv"), q);
        j["nonminimal_action"] = q.action;
    }
    std::cout << j.dump(2) << '\n';
    return report(results, o.strict);
}

int cmd_init(const Options& o)
{
    Model m = build_model(load_config(o.config));
    if (!m.cfg.maps || !m.cfg.domain || !m.iface) throw Error(ErrorCode::ConfigInvalid, "init needs domain, interface and initial_data");
    std::string dir = out_dir(o, m.cfg);
    double eps = m.cfg.solver.eps;
    InitialData init(*m.pot, m.table, *m.iface, *m.cfg.maps);
    Field f = init.build_initial_field(m.cfg.domain->grid_for(eps), eps);
    write_snapshot(path_in(dir, "init.bin"), f, eps);
    SolverConfig sc = m.cfg.solver;
    sc.T_final = 0.0;
    std::vector<DiagnosticsRecord> recs;
    DiagContext ctx = m.context(eps, 0);
    run(*m.pot, f, sc, [&](const Field& g, const std::vector<double>& dudt, double A) {
        recs.push_back(compute_record(ctx, g, dudt, A));
    });
    write_records_csv(path_in(dir, "init.csv"), recs);
    const DiagnosticsRecord& r = recs.back();
    ordered_json j = {{"eps", eps},       {"E_eps", r.E_eps},        {"B_eps", r.B_eps},
                      {"E_over_eps", r.E_eps / eps}, {"B_over_eps", r.B_eps / eps}, {"max_norm", r.max_norm}};
    std::cout << j.dump(2) << '\n';
    if (!o.strict) return 0;
    return report({check_initial_data(m)}, true);
}

int cmd_check_geometry(const Options& o)
{
    Model m = build_model(load_config(o.config));
    CriterionResult r = check_geometry(m);
    r.id = 4;
    std::cout << r.detail.dump(2) << '\n';
    return report({r}, o.strict);
}

int cmd_make_goldens(const Options& o)
{
    Config cfg = load_config(o.config);
    ordered_json g = make_goldens(cfg);
    std::string target = o.out.empty()
                             ? path_in(cfg.base_dir, cfg.doc.at("goldens").value("output", "goldens.json"))
                             : path_in(o.out, "goldens.json");
    fs::create_directories(fs::path(target).parent_path());
    std::ofstream(target) << g.dump(2) << '\n';
    std::cout << g.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sharp-interface limit experiments for the vectorial Allen-Cahn equation"};
    app.require_subcommand(1);
    Options o;
    struct Cmd {
        const char* name;
        const char* help;
        int (*fn)(const Options&);
    };
    const Cmd cmds[] = {
        {"run", "one solver run with diagnostics", cmd_run},
        {"sweep", "eps sweep with rate fits", cmd_sweep},
        {"profile", "optimal profile table and surface tension", cmd_profile},
        {"connect", "minimal connection between two endpoints", cmd_connect},
        {"init", "well-prepared initial data", cmd_init},
        {"check-geometry", "finite-difference check of the interface identities", cmd_check_geometry},
        {"make-goldens", "regenerate the frozen reference numbers", cmd_make_goldens},
    };
    std::vector<std::pair<CLI::App*, const Cmd*>> subs;
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", o.config, "JSON config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory");
        sub->add_flag("--strict", o.strict, "nonzero exit when an acceptance check fails");
        if (std::string(c.name) == "run")
            sub->add_option("--snapshots", o.snapshots, "none, final or every:K (K-th record)");
        subs.emplace_back(sub, &c);
    }
    CLI11_PARSE(app, argc, argv);
    try {
        for (auto [sub, c] : subs)
            if (sub->parsed()) return c->fn(o);
    } catch (const Error& e) {
        std::cerr << "error [" << error_name(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

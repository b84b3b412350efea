#include "sil/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sil/error.hpp"
#include "sil/parallel.hpp"

namespace sil {

using nlohmann::ordered_json;

SnapshotPolicy SnapshotPolicy::parse(const std::string& s)
{
    SnapshotPolicy p;
    if (s == "none") return p;
    if (s == "final") {
        p.kind = Final;
        return p;
    }
    if (s.rfind("every:", 0) == 0) {
        std::string k = s.substr(6);
        char* end = nullptr;
        long v = std::strtol(k.c_str(), &end, 10);
        if (k.empty() || *end != '\0' || v < 1)
            throw Error(ErrorCode::ConfigInvalid, "--snapshots: every:K needs a positive integer K");
        p.kind = Every;
        p.every = static_cast<int>(v);
        return p;
    }
    throw Error(ErrorCode::ConfigInvalid, "--snapshots: expected none, final or every:K");
}

namespace {

std::string join(const std::string& dir, const std::string& name)
{
    return (std::filesystem::path(dir) / name).string();
}

std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// measure of the exact interface at time t (length in 2-D, point count in 1-D)
double interface_measure(const Interface& iface, double t)
{
    if (iface.kind() == InterfaceKind::StationaryPoint) return iface.dim() == 1 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    double r = iface.radius(t);
    switch (iface.dim()) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI * r;
    default: return 4.0 * M_PI * r * r;
    }
}

}  // namespace

RunOutput run_case(const Model& model, double eps, const std::vector<int>& counts, int sweep_index,
                   const SnapshotPolicy& snaps, const std::string& out_dir, const std::string& tag)
{
    const Config& cfg = model.cfg;
    if (!cfg.domain) throw Error(ErrorCode::ConfigInvalid, "domain: missing");
    if (!cfg.maps) throw Error(ErrorCode::ConfigInvalid, "initial_data: missing");
    if (!model.iface) throw Error(ErrorCode::ConfigInvalid, "interface: missing");
    auto t0 = std::chrono::steady_clock::now();
    RunOutput out;
    out.eps = eps;
    out.grid = cfg.domain->grid_for(eps, counts);
    if (out.grid.dim != model.iface->dim())
        throw Error(ErrorCode::ConfigInvalid, "interface: dimension differs from the domain");
    InitialData init(*model.pot, model.table, *model.iface, *cfg.maps);
    Field field = init.build_initial_field(out.grid, eps);

    SolverConfig sc = cfg.solver;
    sc.eps = eps;
    sc.horizon = model.iface->horizon();
    DiagContext ctx = model.context(eps, sweep_index);
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    int rec_index = 0;
    auto monitor = [&](const Field& f, const std::vector<double>& dudt, double A) {
        out.records.push_back(compute_record(ctx, f, dudt, A));
        if (!out_dir.empty() && snaps.kind == SnapshotPolicy::Every && rec_index % snaps.every == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "_snap%05d.bin", rec_index);
            write_snapshot(join(out_dir, tag + name), f, eps);
        }
        ++rec_index;
    };
    out.stats = run(*model.pot, field, sc, monitor);
    if (!out_dir.empty()) {
        if (snaps.kind == SnapshotPolicy::Final) write_snapshot(join(out_dir, tag + "_final.bin"), field, eps);
        write_records_csv(join(out_dir, tag + ".csv"), out.records);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) throw Error(ErrorCode::ConfigInvalid, "slope fit: size mismatch");
    if (x.size() < 3) throw Error(ErrorCode::ConfigInvalid, "slope fit needs at least 3 points");
    int n = static_cast<int>(x.size());
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::ConfigInvalid, "slope fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    LogLogFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = ly[i] - (f.intercept + f.slope * lx[i]);
        rss += r * r;
    }
    f.slope_se = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    return f;
}

ordered_json SweepReport::to_json() const
{
    ordered_json j;
    j["eps_list"] = eps_list;
    j["metrics"] = metrics;
    if (!slopes.empty()) j["slopes"] = slopes;
    return j;
}

SweepReport run_sweep(const Model& model, const std::string& out_dir, const SnapshotPolicy& snaps)
{
    const Config& cfg = model.cfg;
    SweepReport rep;
    rep.eps_list = cfg.sweep.eps_list;
    if (rep.eps_list.empty()) rep.eps_list = {cfg.solver.eps};
    std::size_t ne = rep.eps_list.size();
    rep.runs.resize(ne);
    parallel_chunks(ne, 1, [&](std::size_t i, std::size_t, std::size_t) {
        std::vector<int> counts = cfg.sweep.counts_list.empty() ? std::vector<int>{} : cfg.sweep.counts_list[i];
        char tag[64];
        std::snprintf(tag, sizeof tag, "eps_%02zu", i);
        rep.runs[i] = run_case(model, rep.eps_list[i], counts, static_cast<int>(i), snaps, out_dir, tag);
    });

    const Interface& iface = *model.iface;
    const double cF = model.pot->cF();
    auto metric = [&](const char* name, auto fn) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rep.runs) arr.push_back(fn(r));
        rep.metrics[name] = arr;
    };
    auto sup = [](const RunOutput& r, auto get) {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto& rec : r.records) m = std::max(m, get(rec));
        return m;
    };
    metric("h", [](const RunOutput& r) { return r.grid.h; });
    metric("E0", [](const RunOutput& r) { return r.records.front().E_eps; });
    metric("B0", [](const RunOutput& r) { return r.records.front().B_eps; });
    metric("E0_over_eps", [](const RunOutput& r) { return r.records.front().E_eps / r.eps; });
    metric("B0_over_eps", [](const RunOutput& r) { return r.records.front().B_eps / r.eps; });
    metric("sup_E", [&](const RunOutput& r) { return sup(r, [](const DiagnosticsRecord& d) { return d.E_eps; }); });
    metric("sup_l1", [&](const RunOutput& r) {
        return sup(r, [](const DiagnosticsRecord& d) { return d.l1_front_error; });
    });
    metric("E_T", [](const RunOutput& r) { return r.records.back().E_eps; });
    metric("l1_T", [](const RunOutput& r) { return r.records.back().l1_front_error; });
    metric("energy_gap_T", [&](const RunOutput& r) {
        double target = cF * interface_measure(iface, r.records.back().t);
        return std::abs(r.records.back().A_eps - target) / target;
    });
    metric("radius_err_max", [&](const RunOutput& r) {
        if (iface.kind() != InterfaceKind::ShrinkingSphere) return 0.0;
        return sup(r, [&](const DiagnosticsRecord& d) { return std::abs(d.radius_est - iface.radius(d.t)); });
    });
    metric("perim_plus_err_T", [&](const RunOutput& r) {
        return std::abs(r.records.back().perim_plus - interface_measure(iface, r.records.back().t));
    });
    metric("perim_minus_err_T", [&](const RunOutput& r) {
        return std::abs(r.records.back().perim_minus - interface_measure(iface, r.records.back().t));
    });
    metric("mp_median_T", [](const RunOutput& r) { return r.records.back().mp_median; });
    metric("C_hat", [](const RunOutput& r) {
        return r.records.size() >= 3 ? gronwall_monitor(r.records).C_hat : std::numeric_limits<double>::quiet_NaN();
    });
    metric("worst_energy_increase", [](const RunOutput& r) { return r.stats.worst_energy_increase; });
    metric("sup_max_norm", [](const RunOutput& r) { return r.stats.sup_max_norm; });
    metric("initial_max_norm", [](const RunOutput& r) { return r.stats.initial_max_norm; });
    metric("steps", [](const RunOutput& r) { return static_cast<double>(r.stats.steps); });
    metric("seconds", [](const RunOutput& r) { return r.seconds; });

    if (ne >= 3) {
        for (const char* name : {"E0", "B0", "sup_E", "sup_l1", "E_T", "l1_T"}) {
            std::vector<double> y;
            for (const auto& v : rep.metrics[name]) y.push_back(v.get<double>());
            bool positive = true;
            for (double v : y) positive = positive && v > 0.0;
            if (!positive) continue;
            LogLogFit f = fit_loglog(rep.eps_list, y);
            rep.slopes[name] = {{"slope", f.slope}, {"slope_se", f.slope_se}};
        }
    }
    return rep;
}

void write_profile_csv(const std::string& path, const ProfileTable& table)
{
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path);
    os << "s,alpha,alpha_prime\n";
    for (std::size_t i = 0; i < table.s_grid.size(); ++i)
        os << fmt17(table.s_grid[i]) << ',' << fmt17(table.alpha[i]) << ',' << fmt17(table.alpha_prime[i]) << '\n';
}

void write_path_csv(const std::string& path, const ConnectionResult& res)
{
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path);
    int n = res.path.empty() ? 0 : static_cast<int>(res.path.front().size());
    os << "s";
    for (int c = 1; c <= n; ++c) os << ",u_" << c;
    os << '\n';
    for (std::size_t k = 0; k < res.path.size(); ++k) {
        os << fmt17(res.s[k]);
        for (int c = 0; c < n; ++c) os << ',' << fmt17(res.path[k][c]);
        os << '\n';
    }
}

void write_records_csv(const std::string& path, const std::vector<DiagnosticsRecord>& records)
{
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path);
    write_csv_header(os);
    for (const auto& r : records) write_csv_row(os, r);
}

}  // namespace sil

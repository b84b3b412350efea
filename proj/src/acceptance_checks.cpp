#include "sil/acceptance_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "sil/error.hpp"

namespace sil {

using nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<double> metric(const SweepReport& rep, const char* name)
{
    std::vector<double> v;
    for (const auto& x : rep.metrics.at(name)) v.push_back(x.is_number() ? x.get<double>() : std::nan(""));
    return v;
}

// strictly decreasing in sweep order (eps decreasing)
bool decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i + 1] < v[i])) return false;
    return !v.empty();
}

double spread(const std::vector<double>& v)
{
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

double dist_to_segment(const VecN& x, const VecN& a, const VecN& b)
{
    VecN ab = b - a;
    double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (x - (a + t * ab)).norm();
}

std::vector<std::pair<const Model*, const SweepReport*>> present(const FrontEvidence& ev)
{
    std::vector<std::pair<const Model*, const SweepReport*>> v;
    if (ev.line) v.emplace_back(ev.line, &ev.line_report);
    if (ev.circle) v.emplace_back(ev.circle, &ev.circle_report);
    if (v.empty()) throw Error(ErrorCode::ConfigInvalid, "acceptance: no sweep evidence");
    return v;
}

template <class F>
CriterionResult guarded(int id, F body)
{
    auto t0 = Clock::now();
    CriterionResult r;
    r.id = id;
    try {
        r = body();
        r.id = id;
    } catch (const std::exception& e) {
        r.pass = false;
        r.summary = std::string("error: ") + e.what();
    }
    if (r.seconds == 0.0) r.seconds = since(t0);
    return r;
}

}  // namespace

CriterionResult check_cF(const Model& model)
{
    auto t0 = Clock::now();
    CriterionResult r;
    r.id = 1;
    double a = compute_cF(*model.pot);
    double b = compute_cF_tilde(*model.pot);
    double diff = std::abs(a - b);
    r.seconds = since(t0);
    r.pass = diff <= 1e-8 && r.seconds < 1.0;
    r.summary = "c_F=" + fmt("%.12f", a) + " |c_F - c_F~|=" + fmt("%.2e", diff) + " time=" + fmt("%.3fs", r.seconds);
    r.detail = {{"cF", a}, {"cF_tilde", b}, {"diff", diff}};
    return r;
}

CriterionResult check_profile(const Model& model)
{
    auto t0 = Clock::now();
    CriterionResult r;
    r.id = 2;
    ProfileTable tab = build_profile(*model.pot);
    double ode = tab.ode_residual(*model.pot);
    double odd = tab.odd_residual();
    double clamp = std::max({std::abs(tab.alpha.back() - tab.half), std::abs(tab.alpha.front() + tab.half),
                             std::abs(tab.eval_alpha(2.0 * tab.s_max) - tab.half),
                             std::abs(tab.eval_alpha(-2.0 * tab.s_max) + tab.half)});
    r.seconds = since(t0);
    r.pass = ode <= 1e-6 && odd <= 1e-12 && clamp <= 1e-12 && tab.tail_rate > 0.0 && r.seconds < 5.0;
    r.summary = "ode=" + fmt("%.2e", ode) + " odd=" + fmt("%.2e", odd) + " clamp=" + fmt("%.2e", clamp) +
                " tail_rate=" + fmt("%.4f", tab.tail_rate) + " time=" + fmt("%.2fs", r.seconds);
    r.detail = {{"ode_residual", ode}, {"odd_residual", odd}, {"clamp", clamp}, {"tail_rate", tab.tail_rate}};
    return r;
}

CriterionResult check_connection(const Model& model, double golden_margin, ConnectionResult* main_out,
                                 ConnectionResult* nonminimal_out)
{
    auto t0 = Clock::now();
    CriterionResult r;
    r.id = 3;
    if (!model.cfg.connect) throw Error(ErrorCode::ConfigInvalid, "connect: missing");
    const ConnectSpec& cs = *model.cfg.connect;
    ConnectionResult res = minimal_connection(*model.pot, model.table, cs.p_plus, cs.p_minus, cs.nodes, cs.s_half);
    double cF = model.pot->cF();
    double rel = std::abs(res.action - cF) / cF;
    double dev = 0.0;
    for (const auto& u : res.path) dev = std::max(dev, dist_to_segment(u, cs.p_minus, cs.p_plus));
    bool ok = rel <= 5e-3 && dev <= 1e-3;
    if (main_out) *main_out = res;
    r.detail = {{"action", res.action}, {"cF", cF}, {"rel_error", rel}, {"path_deviation", dev}};

    double excess = std::nan("");
    if (cs.has_nonminimal) {
        std::unique_ptr<Potential> qpot;
        const Potential* pq = model.pot.get();
        ProfileTable qtab;
        const ProfileTable* tq = &model.table;
        if (!cs.q_manifold.is_null()) {
            qpot = std::make_unique<Potential>(build_manifold(cs.q_manifold), model.cfg.c3, model.cfg.ramp);
            qtab = build_profile(*qpot);
            pq = qpot.get();
            tq = &qtab;
        }
        ConnectionResult q = minimal_connection(*pq, *tq, cs.q_plus, cs.q_minus, cs.nodes, cs.s_half);
        excess = q.action - pq->cF();
        if (nonminimal_out) *nonminimal_out = q;
        bool margin_ok = excess > 0.0 && std::abs(excess - golden_margin) <= 1e-4 * std::abs(golden_margin);
        ok = ok && margin_ok;
        r.detail["nonminimal_excess"] = excess;
        r.detail["golden_margin"] = golden_margin;
    }
    r.seconds = since(t0);
    r.pass = ok && r.seconds < 120.0;
    r.summary = "action rel err=" + fmt("%.2e", rel) + " path dev=" + fmt("%.2e", dev) + " excess=" +
                fmt("%.6f", excess) + " (golden " + fmt("%.6f", golden_margin) + ") time=" + fmt("%.1fs", r.seconds);
    return r;
}

CriterionResult check_geometry(const Model& model)
{
    auto t0 = Clock::now();
    CriterionResult r;
    r.id = 4;
    if (!model.iface) throw Error(ErrorCode::ConfigInvalid, "interface: missing");
    const Interface& I = *model.iface;
    const GeometrySpec& g = model.cfg.geometry;
    double t = g.t;
    double C_bound = model.cfg.acceptance.value("geometry_C", 1e4);

    std::vector<VecD> on, tube;
    int n = std::max(g.samples, 4);
    int dim = I.dim();
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * M_PI * (k + 0.37) / n;
        VecD dir = VecD::Zero(dim);
        dir[0] = std::cos(a);
        if (dim > 1) dir[1] = std::sin(a);
        if (I.kind() == InterfaceKind::StationaryPoint) {
            dir = VecD::Zero(dim);
            dir[0] = 1.0;
        }
        VecD base = I.kind() == InterfaceKind::ShrinkingSphere ? VecD(I.center() + I.radius(t) * dir)
                                                                : VecD(I.x0() * dir);
        on.push_back(base);
        for (double frac : {-0.45, -0.25, 0.2, 0.4}) tube.push_back(base - frac * I.delta0() * dir);
    }

    std::vector<double> hs = g.fd_steps;
    std::vector<double> ra, rb, rc, rd;
    for (double h : hs) {
        IdentityResiduals a = I.verify_identities(t, on, h);
        IdentityResiduals b = I.verify_identities(t, tube, h);
        ra.push_back(a.div_xi);
        rb.push_back(b.transport_d);
        rc.push_back(b.transport_xi);
        rd.push_back(b.transport_xi2);
    }
    bool ok = true;
    ordered_json det;
    auto judge = [&](const char* name, const std::vector<double>& res) {
        double C = 0.0;
        for (std::size_t i = 0; i < hs.size(); ++i) C = std::max(C, res[i] / (hs[i] * hs[i]));
        double slope = std::nan("");
        bool exact = *std::max_element(res.begin(), res.end()) <= 1e-12;
        if (!exact && hs.size() >= 3) slope = fit_loglog(hs, res).slope;
        bool pass = C <= C_bound && (exact || std::abs(slope - 2.0) <= 0.3);
        ok = ok && pass;
        det[name] = {{"residuals", res}, {"C", C}, {"slope", slope}, {"pass", pass}};
    };
    judge("a_on_sigma", ra);
    judge("b", rb);
    judge("c", rc);
    judge("d", rd);
    r.seconds = since(t0);
    r.pass = ok && r.seconds < 30.0;
    r.detail = det;
    std::ostringstream os;
    os << "slopes a=" << fmt("%.2f", det["a_on_sigma"]["slope"].get<double>())
       << " b=" << fmt("%.2f", det["b"]["slope"].get<double>()) << " c=" << fmt("%.2f", det["c"]["slope"].get<double>())
       << " d=" << fmt("%.2f", det["d"]["slope"].get<double>()) << " time=" << fmt("%.2fs", r.seconds);
    r.summary = os.str();
    return r;
}

CriterionResult check_initial_data(const Model& model)
{
    auto t0 = Clock::now();
    CriterionResult r;
    r.id = 5;
    SweepReport rep = run_sweep(model, "", SnapshotPolicy{});
    std::vector<double> e = metric(rep, "E0_over_eps");
    std::vector<double> b = metric(rep, "B0_over_eps");
    double se = spread(e), sb = spread(b);
    r.seconds = since(t0);
    r.pass = se <= 3.0 && sb <= 3.0 && r.seconds < 60.0;
    r.summary = "E/eps spread=" + fmt("%.2f", se) + " B/eps spread=" + fmt("%.2f", sb) + " time=" +
                fmt("%.1fs", r.seconds);
    r.detail = {{"eps", rep.eps_list}, {"E_over_eps", e}, {"B_over_eps", b}};
    return r;
}

CriterionResult check_front_1d(const FrontEvidence& ev)
{
    if (!ev.line) throw Error(ErrorCode::ConfigInvalid, "acceptance: criterion 6 needs a stationary-front sweep");
    CriterionResult r;
    const SweepReport& rep = ev.line_report;
    double sE = rep.slopes.at("sup_E").at("slope").get<double>();
    double sL = rep.slopes.at("sup_l1").at("slope").get<double>();
    r.seconds = ev.line_seconds;
    r.pass = sE >= 0.9 && sL >= 0.45 && r.seconds < 300.0;
    r.summary = "sup E slope=" + fmt("%.3f", sE) + " sup l1 slope=" + fmt("%.3f", sL) + " time=" +
                fmt("%.1fs", r.seconds);
    r.detail = {{"sup_E", rep.metrics.at("sup_E")}, {"sup_l1", rep.metrics.at("sup_l1")}, {"slopes", rep.slopes}};
    return r;
}

CriterionResult check_circle(const FrontEvidence& ev)
{
    if (!ev.circle) throw Error(ErrorCode::ConfigInvalid, "acceptance: needs a shrinking-circle sweep");
    CriterionResult r;
    const SweepReport& rep = ev.circle_report;
    const Interface& I = *ev.circle->iface;
    bool radius_ok = true, energy_ok = true;
    double worst_radius = 0.0, worst_energy = 0.0;
    for (const auto& run : rep.runs) {
        double tol = std::max(2.0 * run.eps, 3.0 * run.grid.h);
        double E0 = run.records.front().E_eps;
        for (const auto& rec : run.records) {
            double err = std::abs(rec.radius_est - I.radius(rec.t));
            worst_radius = std::max(worst_radius, err / tol);
            radius_ok = radius_ok && err <= tol;
            double bound = 3.0 * std::max(E0, run.eps);
            worst_energy = std::max(worst_energy, rec.E_eps / bound);
            energy_ok = energy_ok && rec.E_eps <= bound;
        }
        radius_ok = radius_ok && run.records.size() >= 6;
    }
    std::vector<double> gap = metric(rep, "energy_gap_T");
    bool gap_ok = decreasing(gap) && gap.back() <= 0.15;
    r.seconds = ev.circle_seconds;
    r.pass = radius_ok && energy_ok && gap_ok && r.seconds < 1800.0;
    r.summary = "radius err/tol max=" + fmt("%.3f", worst_radius) + " energy gap=" + fmt("%.4f", gap.front()) + "->" +
                fmt("%.4f", gap.back()) + " E/bound max=" + fmt("%.3f", worst_energy) + " time=" +
                fmt("%.1fs", r.seconds);
    r.detail = {{"energy_gap_T", gap}, {"radius_err_max", rep.metrics.at("radius_err_max")}};
    return r;
}

CriterionResult check_perimeters(const FrontEvidence& ev)
{
    if (!ev.circle) throw Error(ErrorCode::ConfigInvalid, "acceptance: needs a shrinking-circle sweep");
    CriterionResult r;
    std::vector<double> p = metric(ev.circle_report, "perim_plus_err_T");
    std::vector<double> m = metric(ev.circle_report, "perim_minus_err_T");
    r.pass = decreasing(p) && decreasing(m);
    r.summary = "perimeter err (upper) " + fmt("%.4f", p.front()) + "->" + fmt("%.4f", p.back()) + ", (lower) " +
                fmt("%.4f", m.front()) + "->" + fmt("%.4f", m.back());
    r.detail = {{"upper", p}, {"lower", m}};
    return r;
}

CriterionResult check_minimal_pair(const FrontEvidence& ev)
{
    if (!ev.circle) throw Error(ErrorCode::ConfigInvalid, "acceptance: needs a shrinking-circle sweep");
    CriterionResult r;
    std::vector<double> med = metric(ev.circle_report, "mp_median_T");
    double bound = 0.1 * ev.circle->pot->dist_m();
    r.pass = decreasing(med) && med.back() <= bound;
    r.summary = "median deviation " + fmt("%.3e", med.front()) + "->" + fmt("%.3e", med.back()) + " (bound " +
                fmt("%.3f", bound) + ")";
    r.detail = {{"mp_median_T", med}};
    return r;
}

CriterionResult check_dissipation(const FrontEvidence& ev)
{
    CriterionResult r;
    bool ok = true;
    double worst_inc = 0.0, worst_diss = 0.0;
    ordered_json det;
    for (auto [model, rep] : present(ev)) {
        (void)model;
        for (const auto& run : rep->runs) {
            worst_inc = std::max(worst_inc, run.stats.worst_energy_increase);
            for (const auto& rec : run.records)
                for (double d : rec.diss) worst_diss = std::min(worst_diss, d / rec.A_eps);
        }
        std::vector<double> C = metric(*rep, "C_hat");
        // rates whose growth over the horizon stays below 1e-3 count as zero
        double T = 0.0;
        for (const auto& run : rep->runs) T = std::max(T, run.records.back().t);
        double floor = T > 0.0 ? 1e-3 / T : 0.0;
        double hi = std::max(*std::max_element(C.begin(), C.end()), floor);
        double lo = std::max(*std::min_element(C.begin(), C.end()), floor);
        bool stable = hi <= 3.0 * lo;
        for (double c : C) stable = stable && std::isfinite(c);
        ok = ok && stable;
        det.push_back({{"C_hat", C}, {"C_floor", floor}, {"stable", stable}});
    }
    ok = ok && worst_inc <= 1e-8 && worst_diss >= -1e-8;
    r.pass = ok;
    r.summary = "worst dA/A0=" + fmt("%.2e", worst_inc) + " min diss/A=" + fmt("%.2e", worst_diss) + " C_hat";
    for (const auto& d : det) r.summary += " " + d["C_hat"].dump();
    r.detail = det;
    return r;
}

CriterionResult check_coercivity(const FrontEvidence& ev)
{
    CriterionResult r;
    bool ok = true;
    double worst_neg = 0.0, worst_ratio = 0.0;
    for (auto [model, rep] : present(ev)) {
        std::array<double, 5> K = coercivity_constants(*model->iface);
        for (const auto& run : rep->runs)
            for (const auto& rec : run.records)
                for (int i = 0; i < 5; ++i) {
                    double c = rec.coer[i];
                    double tol = 1e-8 * rec.A_eps;
                    worst_neg = std::min(worst_neg, c / rec.A_eps);
                    if (c < -1e-10 * rec.A_eps) ok = false;
                    double bound = K[i] * rec.E_eps + tol;
                    worst_ratio = std::max(worst_ratio, c / bound);
                    if (c > bound) ok = false;
                }
    }
    r.pass = ok;
    r.summary = "min term/A=" + fmt("%.2e", worst_neg) + " max term/bound=" + fmt("%.3f", worst_ratio);
    return r;
}

CriterionResult check_max_principle(const FrontEvidence& ev)
{
    CriterionResult r;
    bool ok = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (auto [model, rep] : present(ev))
        for (const auto& run : rep->runs) {
            double limit = run.stats.initial_max_norm + model->pot->delta0() + 1e-6;
            worst = std::max(worst, run.stats.sup_max_norm - limit);
            ok = ok && run.stats.sup_max_norm <= limit;
        }
    r.pass = ok;
    r.summary = "max over runs of sup|u| - limit=" + fmt("%.3e", worst);
    return r;
}

CriterionResult check_front(int id, const FrontEvidence& ev)
{
    using Check = CriterionResult (*)(const FrontEvidence&);
    static const Check table[] = {check_front_1d,     check_circle,      check_perimeters, check_minimal_pair,
                                  check_dissipation, check_coercivity, check_max_principle};
    if (id < 6 || id > 12) throw Error(ErrorCode::ConfigInvalid, "acceptance: criterion " + std::to_string(id) + " is not a sweep criterion");
    return guarded(id, [&] { return table[id - 6](ev); });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceSetup& setup, const std::vector<int>& ids)
{
    auto wanted = [&](int id) { return ids.empty() || std::find(ids.begin(), ids.end(), id) != ids.end(); };
    auto cfg_path = [&](const char* name) { return (std::filesystem::path(setup.config_dir) / name).string(); };
    std::vector<CriterionResult> out;

    if (wanted(1) || wanted(2)) {
        Model m = build_model(load_config(cfg_path("profile.json")));
        if (wanted(1)) out.push_back(guarded(1, [&] { return check_cF(m); }));
        if (wanted(2)) out.push_back(guarded(2, [&] { return check_profile(m); }));
    }
    if (wanted(3))
        out.push_back(guarded(3, [&] {
            std::ifstream is(setup.goldens);
            if (!is) throw Error(ErrorCode::ConfigInvalid, "goldens: cannot open " + setup.goldens);
            nlohmann::json g = nlohmann::json::parse(is);
            Model m = build_model(load_config(cfg_path("connect.json")));
            return check_connection(m, g.at("nonminimal_excess").get<double>());
        }));
    if (wanted(4))
        out.push_back(guarded(4, [&] { return check_geometry(build_model(load_config(cfg_path("geometry.json")))); }));
    if (wanted(5))
        out.push_back(
            guarded(5, [&] { return check_initial_data(build_model(load_config(cfg_path("initial_data.json")))); }));

    bool fronts = false;
    for (int id = 6; id <= 12; ++id) fronts = fronts || wanted(id);
    if (!fronts) return out;

    FrontEvidence ev;
    std::string err;
    Model line, circle;
    try {
        line = build_model(load_config(cfg_path("front_1d.json")));
        circle = build_model(load_config(cfg_path("circle.json")));
        ev.line = &line;
        ev.circle = &circle;
        std::string od = setup.out_dir;
        auto t0 = Clock::now();
        ev.line_report = run_sweep(line, od.empty() ? od : od + "/front_1d", SnapshotPolicy{});
        ev.line_seconds = since(t0);
        t0 = Clock::now();
        ev.circle_report = run_sweep(circle, od.empty() ? od : od + "/circle", SnapshotPolicy{});
        ev.circle_seconds = since(t0);
    } catch (const std::exception& e) {
        err = e.what();
    }
    for (int id = 6; id <= 12; ++id) {
        if (!wanted(id)) continue;
        if (!err.empty()) {
            CriterionResult r;
            r.id = id;
            r.summary = "error: " + err;
            out.push_back(r);
            continue;
        }
        out.push_back(check_front(id, ev));
    }
    return out;
}

std::string format_result(const CriterionResult& r)
{
    char head[32];
    std::snprintf(head, sizeof head, "criterion %2d: %s", r.id, r.pass ? "PASS" : "FAIL");
    return std::string(head) + "  " + r.summary;
}

}  // namespace sil

#include "sil/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sil/error.hpp"

namespace sil {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& msg)
{
    throw Error(ErrorCode::ConfigInvalid, field + ": " + msg);
}

const json& req(const json& j, const std::string& path, const char* key)
{
    if (!j.is_object() || !j.contains(key)) bad(path + "." + key, "missing");
    return j.at(key);
}

double num(const json& j, const std::string& path)
{
    if (!j.is_number()) bad(path, "must be a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "must be finite");
    return v;
}

double num_or(const json& j, const std::string& path, const char* key, double dflt)
{
    if (!j.is_object() || !j.contains(key)) return dflt;
    return num(j.at(key), path + "." + key);
}

int int_or(const json& j, const std::string& path, const char* key, int dflt)
{
    if (!j.is_object() || !j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_number_integer()) bad(path + "." + key, "must be an integer");
    return v.get<int>();
}

std::vector<double> vec(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) bad(path, "must be a non-empty array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(num(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

VecN vecn(const json& j, const std::string& path)
{
    auto v = vec(j, path);
    if (v.size() > 4) bad(path, "target dimension must be <= 4");
    VecN out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
    return out;
}

VecD vecd(const std::vector<double>& v)
{
    VecD out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
    return out;
}

std::string str_or(const json& j, const std::string& path, const char* key, const std::string& dflt)
{
    if (!j.is_object() || !j.contains(key)) return dflt;
    if (!j.at(key).is_string()) bad(path + "." + key, "must be a string");
    return j.at(key).get<std::string>();
}

}  // namespace

Grid DomainSpec::grid_for(double eps, const std::vector<int>& counts_override) const
{
    std::vector<int> c = counts_override.empty() ? counts : counts_override;
    if (c.empty()) {
        if (!(h_over_eps > 0.0)) bad("domain", "needs counts or h_over_eps");
        double h = eps / h_over_eps;
        for (std::size_t a = 0; a < lo.size(); ++a)
            c.push_back(static_cast<int>(std::lround((hi[a] - lo[a]) / h)) + 1);
    }
    if (c.size() != lo.size()) bad("domain.counts", "dimension mismatch");
    return Grid::make(lo, hi, c);
}

ManifoldPair build_manifold(const json& desc)
{
    std::string kind = str_or(desc, "manifold", "kind", "");
    std::optional<double> tube;
    if (desc.contains("tube_radius")) tube = num(desc["tube_radius"], "manifold.tube_radius");
    try {
        if (kind == "two_spheres") {
            const json& p = req(desc, "manifold", "plus");
            const json& m = req(desc, "manifold", "minus");
            return ManifoldPair::two_spheres(vecn(req(p, "manifold.plus", "center"), "manifold.plus.center"),
                                             num(req(p, "manifold.plus", "radius"), "manifold.plus.radius"),
                                             vecn(req(m, "manifold.minus", "center"), "manifold.minus.center"),
                                             num(req(m, "manifold.minus", "radius"), "manifold.minus.radius"), tube);
        }
        if (kind == "two_capsules") {
            const json& p = req(desc, "manifold", "plus");
            const json& m = req(desc, "manifold", "minus");
            return ManifoldPair::two_capsules(vecn(req(p, "manifold.plus", "a"), "manifold.plus.a"),
                                              vecn(req(p, "manifold.plus", "b"), "manifold.plus.b"),
                                              num(req(p, "manifold.plus", "radius"), "manifold.plus.radius"),
                                              vecn(req(m, "manifold.minus", "a"), "manifold.minus.a"),
                                              vecn(req(m, "manifold.minus", "b"), "manifold.minus.b"),
                                              num(req(m, "manifold.minus", "radius"), "manifold.minus.radius"), tube);
        }
        if (kind == "two_points") {
            return ManifoldPair::two_points(num(req(desc, "manifold", "plus"), "manifold.plus"),
                                            num(req(desc, "manifold", "minus"), "manifold.minus"), tube);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigInvalid && std::string(e.what()).find("manifold") != std::string::npos) throw;
        bad("manifold", e.what());
    }
    bad("manifold.kind", "must be two_spheres, two_capsules or two_points");
}

Config parse_config(const json& doc, const std::string& base_dir)
{
    Config c;
    c.doc = doc;
    c.base_dir = base_dir;
    if (!doc.is_object()) bad("config", "must be a JSON object");
    int version = int_or(doc, "config", "version", -1);
    if (version != kConfigVersion) bad("version", "must be " + std::to_string(kConfigVersion));

    c.manifold = req(doc, "config", "manifold");
    if (doc.contains("potential")) {
        const json& p = doc["potential"];
        c.c3 = num_or(p, "potential", "c3", 1.0);
        if (!(c.c3 > 0.0)) bad("potential.c3", "must be positive");
        std::string ramp = str_or(p, "potential", "ramp", "cubic");
        if (ramp == "cubic")
            c.ramp = Ramp::Cubic;
        else if (ramp == "quintic")
            c.ramp = Ramp::Quintic;
        else
            bad("potential.ramp", "must be cubic or quintic");
    }

    if (doc.contains("domain")) {
        const json& d = doc["domain"];
        DomainSpec ds;
        ds.lo = vec(req(d, "domain", "lo"), "domain.lo");
        ds.hi = vec(req(d, "domain", "hi"), "domain.hi");
        if (ds.lo.size() != ds.hi.size() || ds.lo.size() > 3) bad("domain", "lo and hi must share a dimension 1..3");
        for (std::size_t a = 0; a < ds.lo.size(); ++a)
            if (!(ds.hi[a] > ds.lo[a])) bad("domain.hi", "must exceed domain.lo");
        if (d.contains("counts")) {
            for (const auto& v : d["counts"]) {
                if (!v.is_number_integer()) bad("domain.counts", "must be integers");
                ds.counts.push_back(v.get<int>());
            }
            if (ds.counts.size() != ds.lo.size()) bad("domain.counts", "dimension mismatch");
        }
        ds.h_over_eps = num_or(d, "domain", "h_over_eps", 0.0);
        if (ds.counts.empty() && !(ds.h_over_eps > 0.0)) bad("domain", "needs counts or a positive h_over_eps");
        c.domain = ds;
    }

    if (doc.contains("interface")) {
        const json& j = doc["interface"];
        InterfaceSpec is;
        std::string kind = str_or(j, "interface", "kind", "");
        is.delta0 = num(req(j, "interface", "delta0"), "interface.delta0");
        if (!(is.delta0 > 0.0)) bad("interface.delta0", "must be positive");
        if (kind == "shrinking_sphere") {
            is.kind = InterfaceKind::ShrinkingSphere;
            is.center = vec(req(j, "interface", "center"), "interface.center");
            is.r0 = num(req(j, "interface", "r0"), "interface.r0");
            if (!(is.r0 > 2.0 * is.delta0)) bad("interface.r0", "must exceed 2 * interface.delta0");
        } else if (kind == "stationary_point") {
            is.kind = InterfaceKind::StationaryPoint;
            is.x0 = num_or(j, "interface", "x0", 0.0);
        } else {
            bad("interface.kind", "must be shrinking_sphere or stationary_point");
        }
        if (c.domain) {
            const DomainSpec& ds = *c.domain;
            if (is.kind == InterfaceKind::ShrinkingSphere) {
                if (is.center.size() != ds.lo.size()) bad("interface.center", "dimension differs from the domain");
                for (std::size_t a = 0; a < ds.lo.size(); ++a) {
                    double lo_gap = is.center[a] - is.r0 - ds.lo[a];
                    double hi_gap = ds.hi[a] - is.center[a] - is.r0;
                    if (lo_gap < is.delta0 || hi_gap < is.delta0)
                        bad("interface.r0", "initial interface must stay interface.delta0 away from the domain boundary");
                }
            } else {
                if (is.x0 - ds.lo[0] < is.delta0 || ds.hi[0] - is.x0 < is.delta0)
                    bad("interface.x0", "front must stay interface.delta0 away from the domain boundary");
            }
        }
        c.interface = is;
    }

    if (doc.contains("initial_data")) {
        const json& j = doc["initial_data"];
        InitialMaps m;
        std::string kind = str_or(j, "initial_data", "kind", "");
        m.delta = num_or(j, "initial_data", "delta", 0.0);
        if (kind == "constant_minimal_pair") {
            m.kind = MapsKind::ConstantMinimalPair;
            m.p_plus = vecn(req(j, "initial_data", "p_plus"), "initial_data.p_plus");
            m.p_minus = vecn(req(j, "initial_data", "p_minus"), "initial_data.p_minus");
        } else if (kind == "sliding_segment_pair") {
            m.kind = MapsKind::SlidingSegmentPair;
            m.amplitude = num_or(j, "initial_data", "amplitude", 0.5);
            if (!(std::abs(m.amplitude) <= 1.0)) bad("initial_data.amplitude", "must lie in [-1, 1]");
            m.wave = vecd(vec(req(j, "initial_data", "wave"), "initial_data.wave"));
            m.theta = num_or(j, "initial_data", "theta", 0.0);
            if (j.contains("mismatched")) {
                if (!j["mismatched"].is_boolean()) bad("initial_data.mismatched", "must be a boolean");
                m.mismatched = j["mismatched"].get<bool>();
            }
        } else {
            bad("initial_data.kind", "must be constant_minimal_pair or sliding_segment_pair");
        }
        c.maps = m;
    }

    if (doc.contains("solver")) {
        const json& j = doc["solver"];
        SolverConfig& s = c.solver;
        s.eps = num_or(j, "solver", "eps", s.eps);
        if (!(s.eps > 0.0)) bad("solver.eps", "must be positive");
        std::string scheme = str_or(j, "solver", "scheme", "heun");
        if (scheme == "heun")
            s.scheme = Scheme::ExplicitHeun;
        else if (scheme == "imex")
            s.scheme = Scheme::IMEX;
        else
            bad("solver.scheme", "must be heun or imex");
        s.dt_safety = num_or(j, "solver", "dt_safety", s.dt_safety);
        if (!(s.dt_safety > 0.0) || s.dt_safety > 1.0) bad("solver.dt_safety", "must lie in (0, 1]");
        s.T_final = num_or(j, "solver", "T_final", 0.0);
        if (s.T_final < 0.0) bad("solver.T_final", "must be >= 0");
        s.record_every = int_or(j, "solver", "record_every", s.record_every);
        if (s.record_every < 1) bad("solver.record_every", "must be >= 1");
        s.record_count = int_or(j, "solver", "record_count", 0);
        if (s.record_count < 0) bad("solver.record_count", "must be >= 0");
    }

    if (doc.contains("diagnostics")) {
        const json& j = doc["diagnostics"];
        c.mp_offset = num_or(j, "diagnostics", "mp_offset", 0.0);
        c.mp_samples = int_or(j, "diagnostics", "mp_samples", 64);
        if (c.mp_samples < 1) bad("diagnostics.mp_samples", "must be >= 1");
        c.perimeter_k0 = int_or(j, "diagnostics", "perimeter_k0", 0);
        if (c.perimeter_k0 < 0) bad("diagnostics.perimeter_k0", "must be >= 0");
    }

    if (doc.contains("sweep")) {
        const json& j = doc["sweep"];
        c.sweep.eps_list = vec(req(j, "sweep", "eps_list"), "sweep.eps_list");
        for (double e : c.sweep.eps_list)
            if (!(e > 0.0)) bad("sweep.eps_list", "entries must be positive");
        if (j.contains("counts_list")) {
            for (const auto& row : j["counts_list"]) {
                std::vector<int> r;
                for (const auto& v : row) {
                    if (!v.is_number_integer()) bad("sweep.counts_list", "must hold integer arrays");
                    r.push_back(v.get<int>());
                }
                c.sweep.counts_list.push_back(r);
            }
            if (c.sweep.counts_list.size() != c.sweep.eps_list.size())
                bad("sweep.counts_list", "needs one entry per eps");
        }
    }

    if (doc.contains("connect")) {
        const json& j = doc["connect"];
        ConnectSpec cs;
        cs.p_plus = vecn(req(j, "connect", "p_plus"), "connect.p_plus");
        cs.p_minus = vecn(req(j, "connect", "p_minus"), "connect.p_minus");
        cs.nodes = int_or(j, "connect", "nodes", 2001);
        cs.s_half = num_or(j, "connect", "s_half", 0.0);
        if (j.contains("nonminimal")) {
            const json& q = j["nonminimal"];
            cs.has_nonminimal = true;
            cs.q_plus = vecn(req(q, "connect.nonminimal", "p_plus"), "connect.nonminimal.p_plus");
            cs.q_minus = vecn(req(q, "connect.nonminimal", "p_minus"), "connect.nonminimal.p_minus");
            if (q.contains("manifold")) cs.q_manifold = q["manifold"];
        }
        c.connect = cs;
    }

    if (doc.contains("geometry")) {
        const json& j = doc["geometry"];
        c.geometry.t = num_or(j, "geometry", "t", 0.0);
        if (j.contains("fd_steps")) c.geometry.fd_steps = vec(j["fd_steps"], "geometry.fd_steps");
        c.geometry.samples = int_or(j, "geometry", "samples", 64);
    }

    if (doc.contains("acceptance")) c.acceptance = doc["acceptance"];
    c.out_dir = str_or(doc, "config", "out_dir", "out");

    // cross-field checks that need the manifold
    ManifoldPair mp = build_manifold(c.manifold);
    if (c.maps) {
        if (c.maps->kind == MapsKind::ConstantMinimalPair &&
            (c.maps->p_plus.size() != mp.ambient_dim() || c.maps->p_minus.size() != mp.ambient_dim()))
            bad("initial_data", "endpoint dimension differs from the target");
        double d0 = mp.tube_radius();
        double delta = c.maps->delta > 0.0 ? c.maps->delta : 0.25 * d0;
        if (2.0 * delta >= d0) bad("initial_data.delta", "collar needs 2 * delta < delta0 of the potential");
        if (c.interface && c.interface->kind == InterfaceKind::ShrinkingSphere && !(c.interface->r0 > 2.0 * delta))
            bad("initial_data.delta", "collar needs 2 * delta < interface.r0");
        if (c.maps->kind == MapsKind::SlidingSegmentPair && c.domain &&
            static_cast<int>(c.maps->wave.size()) != c.domain->dim())
            bad("initial_data.wave", "dimension differs from the domain");
    }
    if (c.connect) {
        if (c.connect->p_plus.size() != mp.ambient_dim() || c.connect->p_minus.size() != mp.ambient_dim())
            bad("connect", "endpoint dimension differs from the target");
        if (c.connect->has_nonminimal) {
            int qd = c.connect->q_manifold.is_null() ? mp.ambient_dim() : build_manifold(c.connect->q_manifold).ambient_dim();
            if (c.connect->q_plus.size() != qd || c.connect->q_minus.size() != qd)
                bad("connect.nonminimal", "endpoint dimension differs from the target");
        }
        if (c.connect->nodes < 101 || c.connect->nodes % 2 == 0) bad("connect.nodes", "must be odd and >= 101");
    }
    return c;
}

Config load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::ConfigInvalid, "config: cannot open " + path);
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("config: parse error: ") + e.what());
    }
    std::string base = std::filesystem::path(path).parent_path().string();
    if (base.empty()) base = ".";
    return parse_config(doc, base);
}

int Model::perimeter_k(int sweep_index) const
{
    int k0 = cfg.perimeter_k0;
    if (k0 <= 0) k0 = static_cast<int>(std::floor(4.0 / pot->cF())) + 1;
    return k0 + std::max(sweep_index, 0);
}

DiagContext Model::context(double eps, int sweep_index) const
{
    if (!iface) bad("interface", "missing");
    DiagContext ctx;
    ctx.pot = pot.get();
    ctx.iface = &*iface;
    ctx.eps = eps;
    ctx.sweep_index = perimeter_k(sweep_index);
    ctx.mp_offset = cfg.mp_offset;
    ctx.mp_samples = cfg.mp_samples;
    return ctx;
}

Model build_model(const Config& cfg)
{
    Model m;
    m.cfg = cfg;
    m.pot = std::make_unique<Potential>(build_manifold(cfg.manifold), cfg.c3, cfg.ramp);
    m.table = build_profile(*m.pot);
    if (cfg.interface) {
        const InterfaceSpec& is = *cfg.interface;
        int dim = cfg.domain ? cfg.domain->dim() : static_cast<int>(std::max<std::size_t>(is.center.size(), 1));
        if (is.kind == InterfaceKind::ShrinkingSphere)
            m.iface = Interface::shrinking_sphere(vecd(is.center), is.r0, is.delta0);
        else
            m.iface = Interface::stationary_point(is.x0, is.delta0, dim);
    }
    return m;
}

}  // namespace sil

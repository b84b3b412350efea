#include "sil/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "sil/error.hpp"
#include "sil/parallel.hpp"

namespace sil {

namespace {

constexpr double kGradFloor = 1e-10;

// grad u at a node: central differences inside, one-sided on the boundary
Eigen::MatrixXd node_gradient(const Field& f, std::size_t i)
{
    const Grid& g = f.grid;
    auto m = g.multi(i);
    Eigen::MatrixXd G(f.n, g.dim);
    for (int a = 0; a < g.dim; ++a) {
        std::size_t s = static_cast<std::size_t>(g.stride[a]);
        std::size_t ip = i, im = i;
        double span = 2.0 * g.h;
        if (m[a] == 0) {
            ip = i + s;
            span = g.h;
        } else if (m[a] == g.counts[a] - 1) {
            im = i - s;
            span = g.h;
        } else {
            ip = i + s;
            im = i - s;
        }
        for (int c = 0; c < f.n; ++c) G(c, a) = (f.data[ip * f.n + c] - f.data[im * f.n + c]) / span;
    }
    return G;
}

double quantile(std::vector<double> v, double q)
{
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    double pos = q * (v.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double w = pos - lo;
    return (1.0 - w) * v[lo] + w * v[hi];
}

VecN interpolate(const Field& f, const VecD& x)
{
    const Grid& g = f.grid;
    std::array<int, 3> base{0, 0, 0};
    std::array<double, 3> frac{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
        double r = (x[a] - g.lo[a]) / g.h;
        r = std::clamp(r, 0.0, static_cast<double>(g.counts[a] - 1));
        int b = std::min(static_cast<int>(std::floor(r)), g.counts[a] - 2);
        base[a] = b;
        frac[a] = r - b;
    }
    VecN out = VecN::Zero(f.n);
    int corners = 1 << g.dim;
    for (int k = 0; k < corners; ++k) {
        std::array<int, 3> m = base;
        double w = 1.0;
        for (int a = 0; a < g.dim; ++a) {
            bool up = (k >> a) & 1;
            m[a] += up;
            w *= up ? frac[a] : 1.0 - frac[a];
        }
        if (w == 0.0) continue;
        out += w * f.value(g.index(m));
    }
    return out;
}

enum Sum {
    sA, sE, sG, sH, sL1, sC1, sC2, sC3, sC4, sC5, sD1, sD2, sD3, sGL, kSums
};

struct Pass {
    std::array<double, kSums> sums{};
    double min_E = std::numeric_limits<double>::infinity();
    double trace_res = 0.0;
    std::vector<double> psi;
};

Pass integrate(const DiagContext& ctx, const Field& f, const std::vector<double>* dudt)
{
    const Potential& pot = *ctx.pot;
    const Interface& iface = *ctx.iface;
    const Grid& g = f.grid;
    if (g.dim != iface.dim()) throw Error(ErrorCode::ConfigInvalid, "field and interface dimensions differ");
    if (f.n != pot.ambient_dim()) throw Error(ErrorCode::ConfigInvalid, "field and target dimensions differ");
    const double eps = ctx.eps;
    const double cF = pot.cF();
    const double t = f.t;
    std::size_t N = g.size();
    std::size_t nch = (N + kChunk - 1) / kChunk;
    std::vector<std::array<double, kSums>> part(nch);
    std::vector<double> part_min(nch, std::numeric_limits<double>::infinity()), part_tr(nch, 0.0);
    Pass out;
    out.psi.assign(N, 0.0);

    parallel_chunks(N, kChunk, [&](std::size_t ch, std::size_t b, std::size_t e_end) {
        std::array<Accumulator, kSums> acc;
        for (std::size_t i = b; i < e_end; ++i) {
            VecD x = g.coord(i);
            double w = g.trap_weight(i);
            VecN u = f.value(i);
            double F = pot.F_raw(u.data());
            QuasiDistEval q = pot.eval_quasi(u);
            out.psi[i] = q.value;
            Eigen::MatrixXd G = node_gradient(f, i);
            double gu2 = G.squaredNorm();
            double e = 0.5 * eps * gu2 + F / eps;
            Eigen::VectorXd gpsi = G.transpose() * Eigen::VectorXd(q.grad);
            double a = gpsi.norm();
            VecD xi = iface.xi(x, t);
            double ds = iface.d_Sigma(x, t);
            double Eint = e - xi.dot(VecD(gpsi));
            part_min[ch] = std::min(part_min[ch], Eint);

            int chi = iface.chi(x, t);
            double eta = iface.eta_trunc(ds);
            double h_int = (cF * chi - cF + 2.0 * std::max(cF - q.value, 0.0)) * eta;
            double g_int = std::max(q.value - cF, 0.0) * std::abs(eta);
            if (h_int < -1e-10 || g_int < -1e-10)
                throw Error(ErrorCode::DataCorrupt, "bulk energy integrand is negative");

            double pG2 = 0.0;
            double pn = q.pi_dir.norm();
            if (pn > 0.0) pG2 = (Eigen::VectorXd(q.pi_dir).transpose() * G).squaredNorm();
            double gF = q.grad.norm();
            double c1 = e - a;
            double c2 = eps * std::max(gu2 - pG2, 0.0);
            double c3 = std::pow(std::sqrt(eps) * std::sqrt(pG2) - gF / std::sqrt(eps), 2);
            double xin = a < kGradFloor ? 0.0 : xi.dot(VecD(gpsi)) / a;
            double c4 = (e + a) * (1.0 - xin);
            double c5 = (e + a) * std::min(ds * ds, 1.0);

            double d1 = 0.0, d2 = 0.0, d3 = 0.0;
            if (dudt) {
                Eigen::Map<const Eigen::VectorXd> v(dudt->data() + i * f.n, f.n);
                double gn = std::sqrt(gu2);
                Eigen::VectorXd He = Eigen::VectorXd::Zero(g.dim);
                if (gn >= kGradFloor) He = -eps * (G.transpose() * v) / gn;
                d1 = (eps * eps * v.squaredNorm() - He.squaredNorm()) / (2.0 * eps);
                VecD H = iface.H_ext(x, t);
                d2 = (He - eps * gn * Eigen::VectorXd(H)).squaredNorm() / (2.0 * eps);
                double dxi = iface.div_xi(x, t);
                d3 = (eps * v - dxi * Eigen::VectorXd(q.grad)).squaredNorm() / (2.0 * eps);
            }
            Eigen::MatrixXd T = e * Eigen::MatrixXd::Identity(g.dim, g.dim) - eps * G.transpose() * G;
            part_tr[ch] = std::max(part_tr[ch], std::abs(T.trace() - (g.dim * e - eps * gu2)));

            acc[sE].add(w * Eint);
            acc[sG].add(w * g_int);
            acc[sH].add(w * h_int);
            acc[sL1].add(w * std::abs(q.value - (ds > 0.0 ? cF : 0.0)));
            acc[sC1].add(w * c1);
            acc[sC2].add(w * c2);
            acc[sC3].add(w * c3);
            acc[sC4].add(w * c4);
            acc[sC5].add(w * c5);
            acc[sD1].add(w * d1);
            acc[sD2].add(w * d2);
            acc[sD3].add(w * d3);
            acc[sGL].add(w * e);
        }
        for (int k = 0; k < kSums; ++k) part[ch][k] = acc[k].value();
    });
    double vol = g.cell_volume();
    for (int k = 0; k < kSums; ++k) {
        Accumulator s;
        for (std::size_t c = 0; c < nch; ++c) s.add(part[c][k]);
        out.sums[k] = s.value() * vol;
    }
    for (std::size_t c = 0; c < nch; ++c) {
        out.min_E = std::min(out.min_E, part_min[c]);
        out.trace_res = std::max(out.trace_res, part_tr[c]);
    }
    return out;
}

double default_offset(const DiagContext& ctx)
{
    if (ctx.mp_offset > 0.0) return ctx.mp_offset;
    double lo = 2.0 * ctx.eps, hi = 0.5 * ctx.pot->delta0();
    return std::clamp(2.5 * ctx.eps, lo, std::max(lo, hi));
}

}  // namespace

std::array<double, 5> coercivity_constants(const Interface& iface)
{
    return {1.0, 2.0, 2.0, 4.0, 4.0 / iface.calibration_constant()};
}

std::vector<double> psi_field(const Potential& pot, const Field& f)
{
    std::size_t N = f.grid.size();
    std::vector<double> psi(N);
    for (std::size_t i = 0; i < N; ++i) psi[i] = pot.quasi_dist(f.value(i));
    return psi;
}

double modulated_energy(const DiagContext& ctx, const Field& f)
{
    return integrate(ctx, f, nullptr).sums[sE];
}

BulkParts bulk_energy(const DiagContext& ctx, const Field& f)
{
    Pass p = integrate(ctx, f, nullptr);
    return {p.sums[sG] + p.sums[sH], p.sums[sG], p.sums[sH]};
}

double l1_front_error(const DiagContext& ctx, const Field& f)
{
    return integrate(ctx, f, nullptr).sums[sL1];
}

std::array<double, 5> coercivity_terms(const DiagContext& ctx, const Field& f)
{
    Pass p = integrate(ctx, f, nullptr);
    return {p.sums[sC1], p.sums[sC2], p.sums[sC3], p.sums[sC4], p.sums[sC5]};
}

std::vector<double> H_eps_field(const DiagContext& ctx, const Field& f, const std::vector<double>& dudt)
{
    const Grid& g = f.grid;
    std::size_t N = g.size();
    std::vector<double> out(N * g.dim, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        Eigen::MatrixXd G = node_gradient(f, i);
        double gn = G.norm();
        if (gn < kGradFloor) continue;
        Eigen::Map<const Eigen::VectorXd> v(dudt.data() + i * f.n, f.n);
        Eigen::VectorXd He = -ctx.eps * (G.transpose() * v) / gn;
        for (int a = 0; a < g.dim; ++a) out[i * g.dim + a] = He[a];
    }
    return out;
}

double level_set_perimeter(const Grid& grid, const std::vector<double>& psi, double level)
{
    return extract_level(grid, psi, level).measure;
}

InterfaceEstimate extract_interface(const DiagContext& ctx, const Field& f, const std::vector<double>& psi)
{
    InterfaceEstimate est;
    est.level_set = extract_level(f.grid, psi, 0.5 * ctx.pot->cF());
    const Interface& iface = *ctx.iface;
    Accumulator acc;
    std::size_t count = 0;
    if (f.grid.dim == 1) {
        for (double x : est.level_set.points) {
            acc.add(iface.kind() == InterfaceKind::StationaryPoint ? x : std::abs(x - iface.center()[0]));
            ++count;
        }
    } else {
        for (const auto& p : est.level_set.vertices()) {
            acc.add(std::hypot(p[0] - iface.center()[0], p[1] - iface.center()[1]));
            ++count;
        }
    }
    est.radius_est = acc.value() / static_cast<double>(count);
    return est;
}

std::vector<PairStats> minimal_pair_deviation(const DiagContext& ctx, const Field& f,
                                              const std::vector<double>& offsets)
{
    const Interface& iface = *ctx.iface;
    const ManifoldPair& m = ctx.pot->manifold();
    const double t = f.t;
    const double tube = 2.0 * ctx.pot->delta0();
    int d = f.grid.dim;
    std::vector<VecD> base;
    if (d == 1) {
        if (iface.kind() == InterfaceKind::StationaryPoint) {
            VecD p(1);
            p[0] = iface.x0();
            base.push_back(p);
        } else {
            for (double sgn : {-1.0, 1.0}) {
                VecD p(1);
                p[0] = iface.center()[0] + sgn * iface.radius(t);
                base.push_back(p);
            }
        }
    } else if (d == 2) {
        if (iface.kind() == InterfaceKind::StationaryPoint)
            throw Error(ErrorCode::ConfigInvalid, "trace sampling on a flat front needs d = 1");
        int M = std::max(ctx.mp_samples, 1);
        double r = iface.radius(t);
        for (int j = 0; j < M; ++j) {
            double th = 2.0 * M_PI * j / M;
            VecD p(2);
            p << iface.center()[0] + r * std::cos(th), iface.center()[1] + r * std::sin(th);
            base.push_back(p);
        }
    } else {
        throw Error(ErrorCode::ConfigInvalid, "trace sampling supports d = 1 and d = 2");
    }
    std::vector<PairStats> out;
    for (double s : offsets) {
        PairStats ps;
        ps.offset = s;
        for (const VecD& p : base) {
            VecD nu = iface.grad_d(p, t);
            VecN vp = interpolate(f, p + s * nu);
            VecN vm = interpolate(f, p - s * nu);
            if (m.dist_component(vp, Side::Plus) >= tube || m.dist_component(vm, Side::Minus) >= tube)
                throw Error(ErrorCode::TraceOffManifoldTube, "sampled trace is outside the 2 delta0 tube of its well");
            VecN up = m.project_component(vp, Side::Plus);
            VecN um = m.project_component(vm, Side::Minus);
            ps.deviations.push_back(std::abs((up - um).norm() - m.gap()));
        }
        ps.median = quantile(ps.deviations, 0.5);
        ps.p90 = quantile(ps.deviations, 0.9);
        out.push_back(std::move(ps));
    }
    return out;
}

MatD stress_tensor(const DiagContext& ctx, const Field& f, std::size_t node)
{
    if (f.grid.is_boundary(node)) throw Error(ErrorCode::BoundaryNode, "stress tensor needs an interior node");
    Eigen::MatrixXd G = node_gradient(f, node);
    double F = ctx.pot->F_eval(f.value(node));
    double e = 0.5 * ctx.eps * G.squaredNorm() + F / ctx.eps;
    int d = f.grid.dim;
    MatD T = e * MatD::Identity(d, d) - ctx.eps * MatD(G.transpose() * G);
    return T;
}

DiagnosticsRecord compute_record(const DiagContext& ctx, const Field& f, const std::vector<double>& dudt,
                                 double A_eps)
{
    Pass p = integrate(ctx, f, dudt.empty() ? nullptr : &dudt);
    DiagnosticsRecord r;
    r.t = f.t;
    r.A_eps = A_eps;
    r.E_eps = p.sums[sE];
    r.g_eps = p.sums[sG];
    r.h_eps = p.sums[sH];
    r.B_eps = r.g_eps + r.h_eps;
    r.l1_front_error = p.sums[sL1];
    r.coer = {p.sums[sC1], p.sums[sC2], p.sums[sC3], p.sums[sC4], p.sums[sC5]};
    r.diss = {p.sums[sD1], p.sums[sD2], p.sums[sD3]};
    r.max_norm = f.max_norm();
    r.stress_trace_check = p.trace_res;
    r.min_E_integrand = p.min_E;
    r.gl_energy = p.sums[sGL];

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double cF = ctx.pot->cF();
    if (f.grid.dim <= 2) {
        try {
            r.radius_est = extract_interface(ctx, f, p.psi).radius_est;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyLevelSet) throw;
            r.radius_est = nan;
        }
        double b = 1.5 / std::max(ctx.sweep_index, 1);
        auto perim = [&](double level) {
            if (!(level > 0.0 && level < cF)) return nan;
            try {
                return level_set_perimeter(f.grid, p.psi, level);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::EmptyLevelSet) throw;
                return nan;
            }
        };
        r.perim_plus = perim(cF - b);
        r.perim_minus = perim(b);
        try {
            auto st = minimal_pair_deviation(ctx, f, {default_offset(ctx)});
            r.mp_median = st[0].median;
            r.mp_p90 = st[0].p90;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TraceOffManifoldTube) throw;
            r.mp_median = nan;
            r.mp_p90 = nan;
        }
    }
    return r;
}

GronwallReport gronwall_monitor(const std::vector<DiagnosticsRecord>& records)
{
    if (records.size() < 3) throw Error(ErrorCode::TooFewRecords, "gronwall monitor needs at least 3 records");
    GronwallReport rep;
    rep.min_dissipation = std::numeric_limits<double>::infinity();
    for (const auto& r : records)
        for (double d : r.diss) rep.min_dissipation = std::min(rep.min_dissipation, d);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < records.size(); ++k) {
        const auto& a = records[k];
        const auto& b = records[k + 1];
        double dt = b.t - a.t;
        if (!(dt > 0.0)) continue;
        double dE = (b.E_eps - a.E_eps) / dt;
        double Ebar = std::max(0.5 * (a.E_eps + b.E_eps), 1e-300);
        double rate = dE / Ebar;
        rep.rates.push_back(rate);
        best = std::max(best, rate);
    }
    rep.C_hat = std::max(best, 0.0);
    return rep;
}

void write_csv_header(std::ostream& os)
{
    os << "t,A_eps,E_eps,B_eps,g_eps,h_eps,l1_front_error,coer1,coer2,coer3,coer4,coer5,"
          "max_norm,radius_est,perim_plus,perim_minus,mp_median,mp_p90,diss1,diss2,diss3\n";
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& r)
{
    char buf[32];
    auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << (last ? '\n' : ',');
    };
    put(r.t);
    put(r.A_eps);
    put(r.E_eps);
    put(r.B_eps);
    put(r.g_eps);
    put(r.h_eps);
    put(r.l1_front_error);
    for (double c : r.coer) put(c);
    put(r.max_norm);
    put(r.radius_est);
    put(r.perim_plus);
    put(r.perim_minus);
    put(r.mp_median);
    put(r.mp_p90);
    put(r.diss[0]);
    put(r.diss[1]);
    put(r.diss[2], true);
}

}  // namespace sil

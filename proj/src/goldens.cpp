#include <cmath>
#include <filesystem>

#include "sil/error.hpp"
#include "sil/harness.hpp"

namespace sil {

using nlohmann::ordered_json;

namespace {

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

// integral of sqrt(2F) along the straight segment between the closest points of the wells
double straight_line_action(const Potential& pot, const VecN& a, const VecN& b, int panels)
{
    std::vector<double> gx, gw;
    gauss_legendre(20, gx, gw);
    double L = (b - a).norm();
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        double l0 = L * p / panels, l1 = L * (p + 1) / panels;
        for (int q = 0; q < 20; ++q) {
            double l = 0.5 * (l0 + l1) + 0.5 * (l1 - l0) * gx[q];
            VecN u = a + (l / L) * (b - a);
            sum += 0.5 * (l1 - l0) * gw[q] * std::sqrt(2.0 * std::max(pot.F_eval(u), 0.0));
        }
    }
    return sum;
}

std::pair<VecN, VecN> closest_pair(const Potential& pot)
{
    auto [ms_plus, ms_minus] = pot.manifold().minimal_sets();
    return {VecN(0.5 * (ms_plus.a + ms_plus.b)), VecN(0.5 * (ms_minus.a + ms_minus.b))};
}

// largest Hessian eigenvalue magnitude of F over a sampled box, restricted to the tube
double sampled_hessian_bound(const Potential& pot, const VecN& lo, const VecN& hi, double spacing)
{
    const double fd = 1e-4;
    double d0 = pot.delta0();
    int n = static_cast<int>(lo.size());
    if (n != 2) throw Error(ErrorCode::ConfigInvalid, "goldens: Hessian sampling needs a planar target");
    double best = 0.0;
    int nx = static_cast<int>((hi[0] - lo[0]) / spacing) + 1;
    int ny = static_cast<int>((hi[1] - lo[1]) / spacing) + 1;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            VecN u(2);
            u << lo[0] + i * spacing, lo[1] + j * spacing;
            if (pot.manifold().dist_m(u) > d0 - 4.0 * fd) continue;
            MatD H(2, 2);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    VecN ea = VecN::Zero(2), eb = VecN::Zero(2);
                    ea[a] = fd;
                    eb[b] = fd;
                    H(a, b) = (pot.F_eval(u + ea + eb) - pot.F_eval(u + ea - eb) - pot.F_eval(u - ea + eb) +
                               pot.F_eval(u - ea - eb)) /
                              (4.0 * fd * fd);
                }
            Eigen::SelfAdjointEigenSolver<MatD> es(0.5 * (H + H.transpose()));
            best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
        }
    return best;
}

}  // namespace

ordered_json make_goldens(const Config& cfg)
{
    const nlohmann::json& g = cfg.doc.at("goldens");
    auto rel = [&](const char* key) {
        return (std::filesystem::path(cfg.base_dir) / g.at(key).get<std::string>()).string();
    };
    ordered_json out;

    // surface tension along the straight segment, for every target listed
    ordered_json cf = ordered_json::object();
    for (const auto& [name, desc] : g.at("targets").items()) {
        double c3 = desc.value("c3", 1.0);
        Potential pot(build_manifold(desc.at("manifold")), c3);
        auto [a, b] = closest_pair(pot);
        cf[name] = straight_line_action(pot, a, b, 400);
    }
    out["cF"] = cf;

    {
        Potential pot(build_manifold(cfg.manifold), cfg.c3, cfg.ramp);
        VecN lo(2), hi(2);
        for (int k = 0; k < 2; ++k) {
            lo[k] = g.at("hessian_box").at(0).at(k).get<double>();
            hi[k] = g.at("hessian_box").at(1).at(k).get<double>();
        }
        out["hessian_bound_sampled"] = sampled_hessian_bound(pot, lo, hi, g.value("hessian_spacing", 0.01));
    }

    {
        Model m = build_model(load_config(rel("dt_config")));
        Grid grid = m.cfg.domain->grid_for(m.cfg.solver.eps);
        double lam = 0.0;
        if (m.pot->ambient_dim() == 2) {
            VecN lo(2), hi(2);
            auto [a, b] = closest_pair(*m.pot);
            double pad = 2.0 * m.pot->delta0() + 1.0;
            for (int k = 0; k < 2; ++k) {
                lo[k] = std::min(a[k], b[k]) - pad;
                hi[k] = std::max(a[k], b[k]) + pad;
            }
            lam = sampled_hessian_bound(*m.pot, lo, hi, 0.01);
        }
        double dt = m.cfg.solver.dt_safety *
                    std::min(grid.h * grid.h / (2.0 * grid.dim), m.cfg.solver.eps * m.cfg.solver.eps / (2.0 * lam));
        out["dt_default"] = dt;
    }

    {
        Model m = build_model(load_config(rel("connect_config")));
        const ConnectSpec& cs = *m.cfg.connect;
        Potential pot(build_manifold(cs.q_manifold.is_null() ? m.cfg.manifold : cs.q_manifold), m.cfg.c3,
                      m.cfg.ramp);
        ProfileTable tab = build_profile(pot);
        ConnectionResult r = minimal_connection(pot, tab, cs.q_plus, cs.q_minus, cs.nodes, cs.s_half);
        out["nonminimal_excess"] = r.action - pot.cF();
    }

    {
        double R = g.at("circle_radius").get<double>();
        int n = g.at("circle_counts").get<int>();
        Grid grid = Grid::make({-1.0, -1.0}, {1.0, 1.0}, {n, n});
        std::vector<double> psi(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            VecD x = grid.coord(i);
            psi[i] = R - x.norm();
        }
        out["circle_perimeter_error"] = std::abs(level_set_perimeter(grid, psi, 0.0) - 2.0 * M_PI * R);
    }

    {
        Model m = build_model(load_config(rel("layer_config")));
        double eps = m.cfg.solver.eps;
        InitialData init(*m.pot, m.table, *m.iface, *m.cfg.maps);
        Grid grid = m.cfg.domain->grid_for(eps);
        Field f = init.build_initial_field(grid, eps);
        out["layer_l1"] = l1_front_error(m.context(eps, 0), f);
    }
    return out;
}

}  // namespace sil

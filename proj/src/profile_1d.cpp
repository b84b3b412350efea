#include "sil/profile_1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sil/error.hpp"
#include "sil/quadrature.hpp"

namespace sil {

double compute_cF(const Potential& pot)
{
    auto g = [&](double l) { return std::sqrt(2.0 * pot.f_value(l * l)); };
    return 2.0 * adaptive_simpson(g, 0.0, 0.5 * pot.dist_m(), 1e-10);
}

// straight segment between the centres of the minimal sets, through F itself
double compute_cF_tilde(const Potential& pot)
{
    auto [mp, mm] = pot.manifold().minimal_sets();
    VecN a = 0.5 * (mm.a + mm.b);
    VecN b = 0.5 * (mp.a + mp.b);
    VecN mid = 0.5 * (a + b);
    VecN e = (b - a).normalized();
    auto g = [&](double l) { return std::sqrt(2.0 * std::max(pot.F_eval(VecN(mid + l * e)), 0.0)); };
    double half = 0.5 * (b - a).norm();
    return adaptive_simpson(g, -half, 0.0, 1e-10) + adaptive_simpson(g, 0.0, half, 1e-10);
}

namespace {

constexpr double kClamp = 1e-12;
constexpr double kTPanel = 0.05;

// s(r) - s_plateau = G(r) = int_r^delta0 d rho / sqrt(2 f(rho^2)), tabulated in t = log rho
class TailIntegral {
public:
    explicit TailIntegral(const Potential& pot) : pot_(pot)
    {
        const PotentialParams& p = pot.params();
        if (!(p.c4 > 0.0) || !std::isfinite(p.c4))
            throw Error(ErrorCode::EndpointSingularity, "f'(0) must be positive for the log splice");
        h0_ = 1.0 / std::sqrt(2.0 * p.c4);
        t_top_ = std::log(p.delta0);
        // splice where Ftilde drops below 1e-6 c3
        double lo = 0.0, hi = p.delta0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            if (pot.f_value(mid * mid) < 1e-6 * p.c3) lo = mid; else hi = mid;
        }
        t_sp_ = std::log(0.5 * (lo + hi));
        double direct = gauss_legendre([this](double t) { return h(t); }, t_sp_ - 1.0, t_sp_, 8);
        double spliced = h0_ + gauss_legendre([this](double t) { return h(t) - h0_; },
                                              t_sp_ - 1.0, t_sp_, 8);
        double rel = std::abs(h(t_sp_) - h0_) / h0_;
        if (std::abs(direct - spliced) > 1e-8 || !(rel < 1e-3)) {
            std::ostringstream os;
            os << "log splice mismatch " << std::abs(direct - spliced) << " (linearization rel. error "
               << rel << ")";
            throw Error(ErrorCode::EndpointSingularity, os.str());
        }
        double t_min = std::log(1e-15);
        int panels = static_cast<int>(std::ceil((t_top_ - t_min) / kTPanel));
        G_.assign(panels + 1, 0.0);
        for (int j = 0; j < panels; ++j) G_[j + 1] = G_[j] + piece(node(j + 1), node(j));
        t_min_ = node(panels);
    }

    double h(double t) const
    {
        double r = std::exp(t);
        return r / std::sqrt(2.0 * pot_.f_value(r * r));
    }

    double G(double t) const
    {
        if (t >= t_top_) return 0.0;
        int j = std::min(static_cast<int>((t_top_ - t) / kTPanel), static_cast<int>(G_.size()) - 2);
        return G_[j] + piece(t, node(j));
    }

    double t_top() const { return t_top_; }
    double t_min() const { return t_min_; }
    double h0() const { return h0_; }

private:
    double node(int j) const { return t_top_ - j * kTPanel; }

    // integral of h over [a,b], analytic log part below the splice point
    double piece(double a, double b) const
    {
        if (b <= a) return 0.0;
        double total = 0.0;
        if (b > t_sp_) {
            double lo = std::max(a, t_sp_);
            total += gauss_legendre([this](double t) { return h(t); }, lo, b, 1);
        }
        if (a < t_sp_) {
            double hi = std::min(b, t_sp_);
            total += h0_ * (hi - a) +
                     gauss_legendre([this](double t) { return h(t) - h0_; }, a, hi, 1);
        }
        return total;
    }

    const Potential& pot_;
    double h0_ = 0.0;
    double t_top_ = 0.0;
    double t_sp_ = 0.0;
    double t_min_ = 0.0;
    std::vector<double> G_;
};

double hermite(double y0, double y1, double m0, double m1, double t)
{
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
}

double hermite_d(double y0, double y1, double m0, double m1, double t)
{
    double t2 = t * t;
    return (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 +
           (3 * t2 - 2 * t) * m1;
}

}  // namespace

ProfileTable build_profile(const Potential& pot)
{
    const PotentialParams& p = pot.params();
    ProfileTable tab;
    tab.half = 0.5 * pot.dist_m();
    double half = tab.half;
    double s_plateau = (half - p.delta0) / std::sqrt(2.0 * p.c3);
    TailIntegral tail(pot);

    tab.ds = 1e-3 / std::sqrt(2.0 * p.c4);
    double s_end = s_plateau + tail.G(std::log(kClamp));
    int K = static_cast<int>(std::ceil(s_end / tab.ds));
    tab.s_max = K * tab.ds;

    std::vector<double> a_pos(K + 1), ap_pos(K + 1), r_pos(K + 1, 0.0);
    double t = tail.t_top();
    for (int k = 0; k <= K; ++k) {
        double s = k * tab.ds;
        if (s <= s_plateau) {
            a_pos[k] = s * std::sqrt(2.0 * p.c3);
            ap_pos[k] = std::sqrt(2.0 * p.c3);
            r_pos[k] = half - a_pos[k];
            continue;
        }
        double g = s - s_plateau;
        if (t >= tail.t_top()) t = tail.t_top() - g / tail.h0();
        bool done = false;
        for (int it = 0; it < 60; ++it) {
            double phi = tail.G(t) - g;
            double step = phi / tail.h(t);
            t = std::max(tail.t_min(), std::min(tail.t_top(), t + step));
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(t))) {
                done = true;
                break;
            }
        }
        if (!done) throw Error(ErrorCode::NoConvergence, "profile inversion did not converge");
        double r = std::exp(t);
        r_pos[k] = r;
        a_pos[k] = half - r;
        ap_pos[k] = std::sqrt(2.0 * pot.f_value(r * r));
    }

    int n = 2 * K + 1;
    tab.s_grid.resize(n);
    tab.alpha.resize(n);
    tab.alpha_prime.resize(n);
    for (int k = -K; k <= K; ++k) {
        int i = k + K;
        int a = std::abs(k);
        tab.s_grid[i] = k * tab.ds;
        tab.alpha[i] = k < 0 ? -a_pos[a] : a_pos[a];
        tab.alpha_prime[i] = ap_pos[a];
    }

    // tail rate: least squares of log(half - alpha) against s on the resolved tail
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int k = 0; k <= K; ++k) {
        double r = r_pos[k];
        if (r > 1e-11 * half && r < 1e-5 * half) {
            double s = k * tab.ds, y = std::log(r);
            sx += s; sy += y; sxx += s * s; sxy += s * y;
            ++cnt;
        }
    }
    if (cnt >= 2) tab.tail_rate = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return tab;
}

double ProfileTable::eval_alpha(double s) const
{
    if (s < 0.0) return -eval_alpha(-s);
    if (s >= s_max) return half;
    int K = static_cast<int>(s_grid.size() / 2);
    double x = s / ds;
    int k = std::min(static_cast<int>(x), K - 1);
    double t = x - k;
    int i = K + k;
    return hermite(alpha[i], alpha[i + 1], alpha_prime[i] * ds, alpha_prime[i + 1] * ds, t);
}

double ProfileTable::eval_alpha_prime(double s) const
{
    s = std::abs(s);
    if (s >= s_max) return 0.0;
    int K = static_cast<int>(s_grid.size() / 2);
    double x = s / ds;
    int k = std::min(static_cast<int>(x), K - 1);
    double t = x - k;
    int i = K + k;
    return hermite_d(alpha[i], alpha[i + 1], alpha_prime[i] * ds, alpha_prime[i + 1] * ds, t) / ds;
}

double ProfileTable::ode_residual(const Potential& pot) const
{
    double worst = 0.0;
    int n = static_cast<int>(s_grid.size());
    for (int i = 1; i + 1 < n; ++i) {
        for (double off : {0.0, 0.5}) {
            double s = s_grid[i] + off * ds;
            if (std::abs(s) >= s_max) continue;
            double a = eval_alpha(s);
            double res = std::abs(eval_alpha_prime(s) - std::sqrt(2.0 * pot.centralized_potential(a)));
            worst = std::max(worst, res);
        }
    }
    return worst;
}

double ProfileTable::odd_residual() const
{
    double worst = 0.0;
    int n = static_cast<int>(s_grid.size());
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(alpha[i] + alpha[n - 1 - i]));
    return worst;
}

double path_action(const Potential& pot, const std::vector<VecN>& path, double ds)
{
    Accumulator acc;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        acc.add(0.5 * (path[k + 1] - path[k]).squaredNorm() / ds);
        acc.add(pot.F_eval(path[k]) * ds);
    }
    return acc.value();
}

double path_action_trapezoid(const Potential& pot, const std::vector<VecN>& path, double ds)
{
    Accumulator acc;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        acc.add(0.5 * (path[k + 1] - path[k]).squaredNorm() / ds);
        acc.add(0.5 * (pot.F_eval(path[k]) + pot.F_eval(path[k + 1])) * ds);
    }
    return acc.value();
}

namespace {

using MatN = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

// positive part of Hess F at u
MatN hessian_plus(const Potential& pot, const VecN& u)
{
    int n = pot.ambient_dim();
    MatN P = MatN::Zero(n, n);
    const ManifoldPair& m = pot.manifold();
    Nearest nr = m.nearest(u);
    if (nr.dist >= pot.delta0()) return P;
    const WellComponent& c = m.component(nr.side);
    double rho = (u - c.core_point(u)).norm();
    double s = nr.dist * nr.dist;
    double fp = pot.f_eval(s).second;
    double a = 2.0 * fp + 4.0 * s * pot.f_second(s);
    MatN nn = nr.dir * nr.dir.transpose();
    P += std::max(a, 0.0) * nn;
    if (c.radius > 0.0 && rho > 0.0) {
        double b = -2.0 * fp * (c.radius - rho) / rho;
        P += std::max(b, 0.0) * (MatN::Identity(n, n) - nn);
    }
    return P;
}

}  // namespace

ConnectionResult minimal_connection(const Potential& pot, const ProfileTable& table,
                                    const VecN& p_plus, const VecN& p_minus, int nodes,
                                    double s_half, const ConnectionOptions& opts)
{
    const ManifoldPair& m = pot.manifold();
    int n = m.ambient_dim();
    if (p_plus.size() != n || p_minus.size() != n)
        throw Error(ErrorCode::EndpointOffManifold, "endpoint dimension mismatch");
    if (m.dist_component(p_plus, Side::Plus) > 1e-9 || m.dist_component(p_minus, Side::Minus) > 1e-9)
        throw Error(ErrorCode::EndpointOffManifold, "endpoints must lie on m+ and m- within 1e-9");
    if (nodes < 101 || nodes % 2 == 0)
        throw Error(ErrorCode::ConfigInvalid, "nodes must be odd and >= 101");
    if (s_half <= 0.0) s_half = 10.0 * table.s_max;
    if (s_half < 3.0 * table.s_max * (1.0 - 1e-12))
        throw Error(ErrorCode::ConfigInvalid, "s_half must be >= 3 s_max");

    int N = nodes;
    double ds = 2.0 * s_half / (N - 1);
    std::vector<VecN> g(N, VecN::Zero(n));
    for (int k = 0; k < N; ++k) {
        double w = static_cast<double>(k) / (N - 1);
        g[k] = (1.0 - w) * p_minus + w * p_plus;
    }
    g[0] = p_minus;
    g[N - 1] = p_plus;

    std::vector<VecN> grad(N, VecN::Zero(n)), dir(N, VecN::Zero(n)), trial(N);
    std::vector<MatN> Dinv(N);
    std::vector<VecN> y(N);
    double c = -1.0 / ds;

    auto gradient = [&](const std::vector<VecN>& path) {
        Accumulator nrm;
        for (int k = 1; k < N - 1; ++k) {
            grad[k] = (2.0 * path[k] - path[k - 1] - path[k + 1]) / ds + pot.grad_F(path[k]) * ds;
            nrm.add(grad[k].squaredNorm());
        }
        return std::sqrt(nrm.value());
    };

    double S = path_action(pot, g, ds);
    double gn = gradient(g);
    double step0 = 1.0;
    int it = 0;
    double S_mark = S;
    bool stagnated = false;
    for (; it < opts.max_iterations && gn > opts.grad_tol; ++it) {
        if (it > 0 && it % 500 == 0) {
            if (gn < opts.stall_grad && std::abs(S_mark - S) <= 1e-14 * std::abs(S)) {
                stagnated = true;
                break;
            }
            S_mark = S;
        }
        // block tridiagonal metric: discrete -d^2/ds^2 plus the positive part of Hess F
        for (int k = 1; k < N - 1; ++k) {
            MatN D = (2.0 / ds) * MatN::Identity(n, n) + ds * hessian_plus(pot, g[k]);
            VecN rhs = grad[k];
            if (k > 1) {
                D -= c * c * Dinv[k - 1];
                rhs -= c * (Dinv[k - 1] * y[k - 1]);
            }
            Dinv[k] = D.inverse();
            y[k] = rhs;
        }
        for (int k = N - 2; k >= 1; --k) {
            VecN r = y[k];
            if (k < N - 2) r -= c * dir[k + 1];
            dir[k] = Dinv[k] * r;
        }
        Accumulator slope_acc;
        for (int k = 1; k < N - 1; ++k) slope_acc.add(grad[k].dot(dir[k]));
        double slope = -slope_acc.value();
        // trust cap keeps the relaxation a continuous deformation of the initial path
        double dmax = 0.0;
        for (int k = 1; k < N - 1; ++k) dmax = std::max(dmax, dir[k].norm());
        double cap = dmax > 0.0 ? 0.25 * pot.delta0() / dmax : 1.0;
        double tstep = std::min({1.0, 2.0 * step0, cap});
        double S_new = S;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            trial = g;
            for (int k = 1; k < N - 1; ++k) trial[k] = g[k] - tstep * dir[k];
            S_new = path_action(pot, trial, ds);
            if (S_new <= S + 1e-4 * tstep * slope) {
                accepted = true;
                break;
            }
            tstep *= 0.5;
        }
        if (!accepted) break;
        step0 = tstep;
        g.swap(trial);
        S = S_new;
        gn = gradient(g);
    }
    if (gn > opts.grad_tol && !stagnated) {
        std::ostringstream os;
        os << "minimal connection stalled at gradient norm " << gn << " after " << it << " iterations";
        throw Error(ErrorCode::NoConvergence, os.str());
    }

    ConnectionResult res;
    res.action = S;
    res.action_trapezoid = path_action_trapezoid(pot, g, ds);
    res.s_half = s_half;
    res.s.resize(N);
    for (int k = 0; k < N; ++k) res.s[k] = -s_half + k * ds;
    res.path = std::move(g);
    res.iterations = it;
    res.grad_norm = gn;
    res.converged = gn <= opts.grad_tol;
    return res;
}

}  // namespace sil

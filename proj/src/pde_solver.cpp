#include "sil/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sil/error.hpp"
#include "sil/parallel.hpp"

namespace sil {

double dt_stability(double h, double eps, int dim, double lambda, double dt_safety, Scheme scheme)
{
    if (!(h > 0.0) || !(eps > 0.0) || !(lambda > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "dt_stability needs positive h, eps and lambda");
    if (!(dt_safety > 0.0) || dt_safety > 1.0)
        throw Error(ErrorCode::ConfigInvalid, "dt_safety must lie in (0, 1]");
    double reaction = eps * eps / (2.0 * lambda);
    if (scheme == Scheme::IMEX) return dt_safety * reaction;
    double diffusion = h * h / (2.0 * dim);
    return dt_safety * std::min(diffusion, reaction);
}

std::vector<double> laplacian(const Field& f)
{
    const Grid& g = f.grid;
    int n = f.n;
    std::size_t N = g.size();
    std::vector<double> out(N * n, 0.0);
    double ih2 = 1.0 / (g.h * g.h);
    for (std::size_t i = 0; i < N; ++i) {
        if (g.is_boundary(i)) continue;
        for (int a = 0; a < g.dim; ++a) {
            std::size_t s = static_cast<std::size_t>(g.stride[a]);
            for (int c = 0; c < n; ++c)
                out[i * n + c] += (f.data[(i + s) * n + c] + f.data[(i - s) * n + c] - 2.0 * f.data[i * n + c]) * ih2;
        }
    }
    return out;
}

Solver::Solver(const Potential& pot, const Grid& grid, BoundaryData bc, SolverConfig cfg)
    : pot_(&pot), grid_(grid), bc_(std::move(bc)), cfg_(cfg), n_(pot.ambient_dim())
{
    if (!(cfg_.eps > 0.0)) throw Error(ErrorCode::ConfigInvalid, "eps must be positive");
    if (bc_.n != n_) throw Error(ErrorCode::ConfigInvalid, "boundary data component count mismatch");
    dt_ = dt_stability(grid_.h, cfg_.eps, grid_.dim, pot.hessian_bound(), cfg_.dt_safety, cfg_.scheme);
    std::size_t N = grid_.size();
    flags_.assign(N, 0);
    weight_.assign(N, 1.0);
    for (std::size_t i = 0; i < N; ++i) {
        auto m = grid_.multi(i);
        std::uint8_t fl = 0;
        for (int a = 0; a < grid_.dim; ++a) {
            if (m[a] == 0 || m[a] == grid_.counts[a] - 1) fl |= 1;
            if (m[a] < grid_.counts[a] - 1) fl |= static_cast<std::uint8_t>(1u << (1 + a));
        }
        flags_[i] = fl;
        weight_[i] = grid_.trap_weight(i);
    }
}

void Solver::set_dt(double dt)
{
    if (!(dt > 0.0)) throw Error(ErrorCode::ConfigInvalid, "dt must be positive");
    dt_ = dt;
}

double Solver::rhs(const Field& f, std::vector<double>& out) const
{
    std::size_t N = grid_.size();
    out.assign(N * n_, 0.0);
    const double ih2 = 1.0 / (grid_.h * grid_.h);
    const double ie2 = 1.0 / (cfg_.eps * cfg_.eps);
    std::size_t nch = (N + kChunk - 1) / kChunk;
    std::vector<double> grad_part(nch), pot_part(nch);
    const double* u = f.data.data();
    parallel_chunks(N, kChunk, [&](std::size_t ch, std::size_t b, std::size_t e) {
        Accumulator ga, pa;
        double gF[4];
        for (std::size_t i = b; i < e; ++i) {
            const double* ui = u + i * n_;
            std::uint8_t fl = flags_[i];
            for (int a = 0; a < grid_.dim; ++a) {
                if (!(fl & (1u << (1 + a)))) continue;
                const double* uj = ui + grid_.stride[a] * n_;
                double s = 0.0;
                for (int c = 0; c < n_; ++c) s += (uj[c] - ui[c]) * (uj[c] - ui[c]);
                ga.add(s);
            }
            double F = pot_->F_and_grad_raw(ui, gF);
            pa.add(weight_[i] * F);
            if (fl & 1) continue;
            double* o = out.data() + i * n_;
            for (int c = 0; c < n_; ++c) o[c] = -ie2 * gF[c];
            for (int a = 0; a < grid_.dim; ++a) {
                std::ptrdiff_t s = grid_.stride[a] * n_;
                for (int c = 0; c < n_; ++c) o[c] += (ui[c + s] + ui[c - s] - 2.0 * ui[c]) * ih2;
            }
        }
        grad_part[ch] = ga.value();
        pot_part[ch] = pa.value();
    });
    Accumulator G, P;
    for (std::size_t c = 0; c < nch; ++c) {
        G.add(grad_part[c]);
        P.add(pot_part[c]);
    }
    double vol = grid_.cell_volume();
    return vol * (0.5 * cfg_.eps * G.value() * ih2 + P.value() / cfg_.eps);
}

double Solver::scheme_energy(const Field& f) const
{
    std::vector<double> tmp;
    return rhs(f, tmp);
}

void Solver::apply_helmholtz(const std::vector<double>& x, std::vector<double>& y, double dt) const
{
    // (I - dt Lap) on interior nodes with zero boundary values
    std::size_t N = grid_.size();
    const double c = dt / (grid_.h * grid_.h);
    parallel_chunks(N, kChunk, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double* o = y.data() + i * n_;
            if (flags_[i] & 1) {
                for (int k = 0; k < n_; ++k) o[k] = 0.0;
                continue;
            }
            const double* xi = x.data() + i * n_;
            for (int k = 0; k < n_; ++k) o[k] = xi[k] * (1.0 + 2.0 * grid_.dim * c);
            for (int a = 0; a < grid_.dim; ++a) {
                std::size_t s = static_cast<std::size_t>(grid_.stride[a]);
                bool bp = flags_[i + s] & 1, bm = flags_[i - s] & 1;
                for (int k = 0; k < n_; ++k) {
                    if (!bp) o[k] -= c * x[(i + s) * n_ + k];
                    if (!bm) o[k] -= c * x[(i - s) * n_ + k];
                }
            }
        }
    });
}

void Solver::imex_solve(const std::vector<double>& b, Field& f) const
{
    // f holds the previous state with exact boundary values; solve (I - dt Lap) u = b
    std::size_t M = b.size();
    std::size_t N = grid_.size();
    const double c = dt_ / (grid_.h * grid_.h);
    std::vector<double> r(M, 0.0), p(M), Ap(M), x(M, 0.0);
    // initial residual with guess u = f (boundary fixed)
    std::vector<double> guess = f.data;
    for (std::size_t i = 0; i < N; ++i)
        if (flags_[i] & 1)
            for (int k = 0; k < n_; ++k) guess[i * n_ + k] = 0.0;
    apply_helmholtz(guess, Ap, dt_);
    for (std::size_t i = 0; i < N; ++i) {
        if (flags_[i] & 1) continue;
        for (int k = 0; k < n_; ++k) {
            double bound = 0.0;
            for (int a = 0; a < grid_.dim; ++a) {
                std::size_t s = static_cast<std::size_t>(grid_.stride[a]);
                if (flags_[i + s] & 1) bound += f.data[(i + s) * n_ + k];
                if (flags_[i - s] & 1) bound += f.data[(i - s) * n_ + k];
            }
            r[i * n_ + k] = b[i * n_ + k] + c * bound - Ap[i * n_ + k];
        }
    }
    double bnorm = 0.0;
    for (std::size_t i = 0; i < M; ++i) bnorm += b[i] * b[i];
    bnorm = std::sqrt(bnorm);
    p = r;
    double rr = 0.0;
    for (double v : r) rr += v * v;
    double tol = 1e-10 * std::max(bnorm, 1e-300);
    for (int it = 0; it < 10000 && std::sqrt(rr) > tol; ++it) {
        apply_helmholtz(p, Ap, dt_);
        double pAp = 0.0;
        for (std::size_t i = 0; i < M; ++i) pAp += p[i] * Ap[i];
        double alpha = rr / pAp;
        double rr_new = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
            rr_new += r[i] * r[i];
        }
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < M; ++i) p[i] = r[i] + beta * p[i];
    }
    if (std::sqrt(rr) > tol) throw Error(ErrorCode::StabilityViolation, "implicit diffusion solve did not converge");
    for (std::size_t i = 0; i < N; ++i) {
        if (flags_[i] & 1) continue;
        for (int k = 0; k < n_; ++k) f.data[i * n_ + k] = guess[i * n_ + k] + x[i * n_ + k];
    }
}

StepInfo Solver::step(Field& f)
{
    StepInfo info;
    std::size_t M = f.data.size();
    double before = f.max_norm();
    if (cfg_.scheme == Scheme::ExplicitHeun) {
        info.energy = rhs(f, k1_);
        stage_.resize(M);
        for (std::size_t i = 0; i < M; ++i) stage_[i] = f.data[i] + dt_ * k1_[i];
        Field st;
        st.grid = f.grid;
        st.n = f.n;
        st.data.swap(stage_);
        rhs(st, k2_);
        stage_.swap(st.data);
        for (std::size_t i = 0; i < M; ++i) f.data[i] += 0.5 * dt_ * (k1_[i] + k2_[i]);
    } else {
        info.energy = rhs(f, k1_);
        // explicit reaction: rhs minus the Laplacian
        std::vector<double> lap = laplacian(f);
        std::vector<double> b(M, 0.0);
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            if (flags_[i] & 1) continue;
            for (int k = 0; k < n_; ++k) {
                std::size_t j = i * n_ + k;
                b[j] = f.data[j] + dt_ * (k1_[j] - lap[j]);
            }
        }
        imex_solve(b, f);
    }
    bc_.apply(f);
    f.t += dt_;
    double after = f.max_norm();
    if (!std::isfinite(after) || after > 1.1 * before) {
        std::ostringstream os;
        os << "sup norm grew from " << before << " to " << after << " in one step at t=" << f.t;
        throw Error(ErrorCode::StabilityViolation, os.str());
    }
    return info;
}

RunStats run(const Potential& pot, Field& field, const SolverConfig& cfg, const Monitor& monitor,
             double dt_override)
{
    BoundaryData bc = BoundaryData::from_field(field);
    Solver solver(pot, field.grid, bc, cfg);
    RunStats st;
    double dt = dt_override > 0.0 ? std::min(dt_override, solver.dt()) : solver.dt();
    long nsteps = 0;
    if (cfg.T_final > 0.0) nsteps = static_cast<long>(std::ceil(cfg.T_final / dt - 1e-9));
    long every = std::max(1, cfg.record_every);
    if (cfg.record_count > 0 && nsteps > 0) {
        long rc = cfg.record_count;
        nsteps = ((nsteps + rc - 1) / rc) * rc;
        every = nsteps / rc;
    }
    if (nsteps > 0) solver.set_dt(cfg.T_final / nsteps);
    st.dt = nsteps > 0 ? solver.dt() : dt;
    st.initial_max_norm = field.max_norm();
    st.sup_max_norm = st.initial_max_norm;
    double slack = cfg.max_norm_slack > 0.0 ? cfg.max_norm_slack : pot.delta0() + 1e-6;
    double limit = st.initial_max_norm + slack;
    double t0 = field.t;

    std::vector<double> r;
    for (long k = 0; k < nsteps; ++k) {
        if (k % every == 0 && monitor) {
            double A = solver.rhs(field, r);
            monitor(field, r, A);
        }
        if (t0 + (k + 1) * solver.dt() > cfg.horizon * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "interface leaves its admissible range at t=" << t0 + (k + 1) * solver.dt();
            throw Error(ErrorCode::ExtinctionReached, os.str());
        }
        StepInfo info = solver.step(field);
        field.t = t0 + (k + 1) * solver.dt();
        st.energies.push_back(info.energy);
        double mx = field.max_norm();
        st.sup_max_norm = std::max(st.sup_max_norm, mx);
        if (mx > limit) {
            std::ostringstream os;
            os << "max principle breach: |u| = " << mx << " exceeds " << limit << " at t=" << field.t;
            throw Error(ErrorCode::StabilityViolation, os.str());
        }
        st.boundary_mismatch = std::max(st.boundary_mismatch, solver.boundary().max_mismatch(field));
        ++st.steps;
    }
    double A_end = solver.rhs(field, r);
    if (monitor) monitor(field, r, A_end);
    st.energies.push_back(A_end);
    double A0 = st.energies.front();
    for (std::size_t k = 1; k < st.energies.size(); ++k)
        st.worst_energy_increase =
            std::max(st.worst_energy_increase, (st.energies[k] - st.energies[k - 1]) / std::max(A0, 1e-300));
    st.t_end = field.t;
    return st;
}

}  // namespace sil

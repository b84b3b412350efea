#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "sil/grid.hpp"
#include "sil/potential.hpp"

namespace sil {

enum class Scheme { ExplicitHeun, IMEX };

struct SolverConfig {
    double eps = 0.04;
    Scheme scheme = Scheme::ExplicitHeun;
    double dt_safety = 0.25;
    double T_final = 0.0;
    int record_every = 100;
    // > 0: round the step count up to a multiple of this and record that many times
    int record_count = 0;
    // abort with ExtinctionReached once t exceeds this
    double horizon = std::numeric_limits<double>::infinity();
    // max-principle slack added to the initial sup norm; <= 0 selects delta0 + 1e-6
    double max_norm_slack = 0.0;
};

double dt_stability(double h, double eps, int dim, double lambda, double dt_safety,
                     Scheme scheme = Scheme::ExplicitHeun);

// standard (2d+1)-point Laplacian; boundary rows are zero
std::vector<double> laplacian(const Field& f);

struct StepInfo {
    double energy = 0.0;  // scheme energy of the field the step started from
};

class Solver {
public:
    Solver(const Potential& pot, const Grid& grid, BoundaryData bc, SolverConfig cfg);

    const SolverConfig& config() const { return cfg_; }
    const Grid& grid() const { return grid_; }
    const BoundaryData& boundary() const { return bc_; }
    double dt() const { return dt_; }
    void set_dt(double dt);

    // du/dt = Lap u - eps^-2 dF(u) at interior nodes, zero on the boundary; returns A_eps(u)
    double rhs(const Field& f, std::vector<double>& out) const;
    // eps/2 sum_edges |du|^2/h^2 h^d + sum_nodes w F/eps h^d
    double scheme_energy(const Field& f) const;

    StepInfo step(Field& f);

private:
    void imex_solve(const std::vector<double>& b, Field& f) const;
    void apply_helmholtz(const std::vector<double>& x, std::vector<double>& y, double dt) const;

    const Potential* pot_;
    Grid grid_;
    BoundaryData bc_;
    SolverConfig cfg_;
    double dt_ = 0.0;
    int n_ = 0;
    std::vector<std::uint8_t> flags_;  // bit 0: boundary; bit 1+a: forward neighbour on axis a
    std::vector<double> weight_;
    mutable std::vector<double> k1_, k2_, stage_;
};

struct RunStats {
    long steps = 0;
    double dt = 0.0;
    double t_end = 0.0;
    double initial_max_norm = 0.0;
    double sup_max_norm = 0.0;
    double worst_energy_increase = 0.0;  // max over steps of (A_{k+1} - A_k) / A_0
    double boundary_mismatch = 0.0;
    std::vector<double> energies;  // A_eps at every accepted step start and the end
};

// called with the field, its rhs (du/dt) and the scheme energy at record steps
using Monitor = std::function<void(const Field&, const std::vector<double>&, double)>;

RunStats run(const Potential& pot, Field& field, const SolverConfig& cfg, const Monitor& monitor,
             double dt_override = 0.0);

}  // namespace sil

#pragma once

#include <vector>

#include "sil/potential.hpp"

namespace sil {

double compute_cF(const Potential& pot);
double compute_cF_tilde(const Potential& pot);

struct ProfileTable {
    std::vector<double> s_grid;  // symmetric about 0, uniform spacing ds
    std::vector<double> alpha;
    std::vector<double> alpha_prime;
    double ds = 0.0;
    double s_max = 0.0;
    double tail_rate = 0.0;
    double half = 0.0;  // dist_m / 2

    double eval_alpha(double s) const;
    double eval_alpha_prime(double s) const;
    // residual of alpha' = sqrt(2 Ftilde(alpha)) at nodes and midpoints
    double ode_residual(const Potential& pot) const;
    double odd_residual() const;
};

ProfileTable build_profile(const Potential& pot);

struct ConnectionOptions {
    int max_iterations = 100000;
    double grad_tol = 1e-8;
    // accept a stationary action once the gradient is below this
    double stall_grad = 1e-3;
};

struct ConnectionResult {
    double action = 0.0;
    double action_trapezoid = 0.0;
    double s_half = 0.0;
    std::vector<double> s;
    std::vector<VecN> path;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = true;
};

// s_half <= 0 selects the default 10 * s_max
ConnectionResult minimal_connection(const Potential& pot, const ProfileTable& table,
                                    const VecN& p_plus, const VecN& p_minus, int nodes,
                                    double s_half = 0.0, const ConnectionOptions& opts = {});

double path_action(const Potential& pot, const std::vector<VecN>& path, double ds);
double path_action_trapezoid(const Potential& pot, const std::vector<VecN>& path, double ds);

}  // namespace sil

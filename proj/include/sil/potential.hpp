#pragma once

#include <utility>
#include <vector>

#include "sil/target_manifold.hpp"

namespace sil {

enum class Ramp { Cubic, Quintic };

struct PotentialParams {
    Ramp ramp = Ramp::Cubic;
    double c3 = 1.0;
    double delta0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c4 = 0.0;
    double cF = 0.0;
};

// d_F(u) with its generalized gradient and the line used by the projection Pi
struct QuasiDistEval {
    double value = 0.0;
    VecN grad;
    VecN pi_dir;  // unit vector; zero where Pi = 0
};

class Potential {
public:
    explicit Potential(ManifoldPair manifold, double c3 = 1.0, Ramp ramp = Ramp::Cubic);

    const ManifoldPair& manifold() const { return m_; }
    const PotentialParams& params() const { return p_; }
    int ambient_dim() const { return m_.ambient_dim(); }
    double dist_m() const { return m_.gap(); }
    double delta0() const { return p_.delta0; }
    double cF() const { return p_.cF; }

    std::pair<double, double> f_eval(double s) const;
    double f_value(double s) const;
    double f_second(double s) const;
    // f(s) - c4*s without cancellation
    double f_minus_linear(double s) const;

    double F_eval(const VecN& u) const;
    VecN grad_F(const VecN& u) const;
    double F_raw(const double* u) const;
    // writes dF(u); returns F(u)
    double F_and_grad_raw(const double* u, double* grad) const;

    // I(a) = int_0^a sqrt(2 f(l^2)) dl, odd in a
    double I(double a) const;
    double I_prime(double a) const;

    double quasi_dist(const VecN& u) const;
    VecN grad_quasi_dist(const VecN& u) const;
    QuasiDistEval eval_quasi(const VecN& u) const;

    double centralized_potential(double lam) const;
    double centralized_potential_prime(double lam) const;

    // bound on the spectral radius of Hess F over the delta0 tube
    double hessian_bound() const { return lambda_; }

private:
    void build_table();

    ManifoldPair m_;
    PotentialParams p_;
    double lambda_ = 0.0;
    std::vector<double> table_;  // I at uniform nodes on [0, delta0]
    double table_h_ = 0.0;
    double I_delta0_ = 0.0;
};

}  // namespace sil

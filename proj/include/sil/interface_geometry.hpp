#pragma once

#include <vector>

#include "sil/types.hpp"

namespace sil {

enum class InterfaceKind { ShrinkingSphere, StationaryPoint };

struct IdentityResiduals {
    double div_xi = 0.0;        // (a) div xi + H.xi
    double transport_d = 0.0;   // (b) d_t d + H.grad d
    double transport_xi = 0.0;  // (c) d_t xi + (H.grad) xi + (grad H)^T xi
    double transport_xi2 = 0.0; // (d) d_t |xi|^2 + (H.grad)|xi|^2
    std::vector<double> div_xi_per_sample;
    std::vector<double> d_sigma_per_sample;
};

class Interface {
public:
    static Interface shrinking_sphere(const VecD& center, double r0, double delta0_geo);
    static Interface stationary_point(double x0, double delta0_geo, int dim = 1);

    InterfaceKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double delta0() const { return delta0_; }
    const VecD& center() const { return center_; }
    double r0() const { return r0_; }
    double x0() const { return x0_; }

    double radius(double t) const;
    // latest time at which radius(t) > 2 delta0 still holds
    double horizon() const;
    bool valid_at(double t) const;

    double d_Sigma(const VecD& x, double t) const;
    VecD grad_d(const VecD& x, double t) const;
    VecD normal(const VecD& x, double t) const { return grad_d(x, t); }
    double velocity(const VecD& x, double t) const;
    double laplacian_d(const VecD& x, double t) const;
    VecD project(const VecD& x, double t) const;

    VecD xi(const VecD& x, double t) const;
    double div_xi(const VecD& x, double t) const;
    VecD H_ext(const VecD& x, double t) const;
    double eta0(const VecD& x, double t) const;
    double eta_trunc(double v) const;
    int chi(const VecD& x, double t) const;

    // largest C with 1 - phi(d/delta0) >= C min(d^2, 1)
    double calibration_constant() const;

    IdentityResiduals verify_identities(double t, const std::vector<VecD>& samples,
                                        double fd_step) const;

    static double phi(double x);
    static double phi_prime(double x);

private:
    Interface() = default;

    InterfaceKind kind_ = InterfaceKind::ShrinkingSphere;
    int dim_ = 1;
    double delta0_ = 0.0;
    VecD center_;
    double r0_ = 0.0;
    double x0_ = 0.0;
};

}  // namespace sil

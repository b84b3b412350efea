#include "sil/interface_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sil/error.hpp"

namespace sil {

Interface Interface::shrinking_sphere(const VecD& center, double r0, double delta0_geo)
{
    if (center.size() < 1 || center.size() > 3)
        throw Error(ErrorCode::ConfigInvalid, "interface dimension must be 1, 2 or 3");
    if (!(r0 > 0.0) || !(delta0_geo > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "r0 and delta0_geo must be positive");
    if (!(r0 > 2.0 * delta0_geo))
        throw Error(ErrorCode::ConfigInvalid, "sphere radius must exceed 2 delta0_geo");
    Interface s;
    s.kind_ = InterfaceKind::ShrinkingSphere;
    s.dim_ = static_cast<int>(center.size());
    s.center_ = center;
    s.r0_ = r0;
    s.delta0_ = delta0_geo;
    return s;
}

Interface Interface::stationary_point(double x0, double delta0_geo, int dim)
{
    if (dim < 1 || dim > 3) throw Error(ErrorCode::ConfigInvalid, "interface dimension must be 1, 2 or 3");
    if (!(delta0_geo > 0.0)) throw Error(ErrorCode::ConfigInvalid, "delta0_geo must be positive");
    Interface s;
    s.kind_ = InterfaceKind::StationaryPoint;
    s.dim_ = dim;
    s.center_ = VecD::Zero(dim);
    s.center_[0] = x0;
    s.x0_ = x0;
    s.delta0_ = delta0_geo;
    return s;
}

double Interface::phi(double x)
{
    double x2 = x * x;
    if (x2 >= 1.0) return 0.0;
    return std::exp(1.0 / (x2 - 1.0) + 1.0);
}

double Interface::phi_prime(double x)
{
    double x2 = x * x;
    if (x2 >= 1.0) return 0.0;
    double q = x2 - 1.0;
    return phi(x) * (-2.0 * x / (q * q));
}

double Interface::radius(double t) const
{
    if (kind_ == InterfaceKind::StationaryPoint) return std::numeric_limits<double>::infinity();
    double r2 = r0_ * r0_ - 2.0 * (dim_ - 1) * t;
    return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

double Interface::horizon() const
{
    if (kind_ == InterfaceKind::StationaryPoint || dim_ == 1) return std::numeric_limits<double>::infinity();
    return (r0_ * r0_ - 4.0 * delta0_ * delta0_) / (2.0 * (dim_ - 1));
}

bool Interface::valid_at(double t) const
{
    return t <= horizon();
}

double Interface::d_Sigma(const VecD& x, double t) const
{
    if (kind_ == InterfaceKind::StationaryPoint) return x0_ - x[0];
    return radius(t) - (x - center_).norm();
}

VecD Interface::grad_d(const VecD& x, double) const
{
    VecD g = VecD::Zero(dim_);
    if (kind_ == InterfaceKind::StationaryPoint) {
        g[0] = -1.0;
        return g;
    }
    VecD v = x - center_;
    double rho = v.norm();
    if (rho == 0.0) throw Error(ErrorCode::AtCenter, "normal undefined at the sphere center");
    return -v / rho;
}

double Interface::velocity(const VecD& x, double t) const
{
    (void)x;
    if (kind_ == InterfaceKind::StationaryPoint) return 0.0;
    return (dim_ - 1) / radius(t);
}

double Interface::laplacian_d(const VecD& x, double) const
{
    if (kind_ == InterfaceKind::StationaryPoint) return 0.0;
    double rho = (x - center_).norm();
    if (rho == 0.0) throw Error(ErrorCode::AtCenter, "laplacian of d undefined at the center");
    return -(dim_ - 1) / rho;
}

VecD Interface::project(const VecD& x, double t) const
{
    if (kind_ == InterfaceKind::StationaryPoint) {
        VecD p = x;
        p[0] = x0_;
        return p;
    }
    VecD v = x - center_;
    double rho = v.norm();
    if (rho == 0.0) throw Error(ErrorCode::AtCenter, "projection undefined at the center");
    return center_ + (radius(t) / rho) * v;
}

VecD Interface::xi(const VecD& x, double t) const
{
    double d = d_Sigma(x, t);
    if (std::abs(d) >= delta0_) return VecD::Zero(dim_);
    return phi(d / delta0_) * grad_d(x, t);
}

double Interface::div_xi(const VecD& x, double t) const
{
    double d = d_Sigma(x, t);
    if (std::abs(d) >= delta0_) return 0.0;
    return phi_prime(d / delta0_) / delta0_ + phi(d / delta0_) * laplacian_d(x, t);
}

double Interface::eta0(const VecD& x, double t) const
{
    double d = std::abs(d_Sigma(x, t));
    return 1.0 - smoothstep5((d - delta0_) / delta0_);
}

VecD Interface::H_ext(const VecD& x, double t) const
{
    if (kind_ == InterfaceKind::StationaryPoint || dim_ == 1) return VecD::Zero(dim_);
    double e = eta0(x, t);
    if (e == 0.0) return VecD::Zero(dim_);
    double kappa = (dim_ - 1) / radius(t) * e;
    return kappa * grad_d(x, t);
}

double Interface::eta_trunc(double v) const
{
    return std::max(-delta0_, std::min(delta0_, v));
}

int Interface::chi(const VecD& x, double t) const
{
    return d_Sigma(x, t) >= 0.0 ? 1 : -1;
}

double Interface::calibration_constant() const
{
    double best = std::numeric_limits<double>::infinity();
    double top = std::max(1.0, delta0_) * 1.5;
    const int n = 20000;
    for (int i = 1; i <= n; ++i) {
        double d = top * i / n;
        double ratio = (1.0 - phi(d / delta0_)) / std::min(d * d, 1.0);
        best = std::min(best, ratio);
    }
    return best;
}

IdentityResiduals Interface::verify_identities(double t, const std::vector<VecD>& samples,
                                               double fd_step) const
{
    IdentityResiduals rep;
    double h = fd_step;
    int d = dim_;
    for (const VecD& x : samples) {
        if (x.size() != d) throw Error(ErrorCode::ConfigInvalid, "sample dimension mismatch");
        double ds = d_Sigma(x, t);
        if (std::abs(ds) > 0.5 * delta0_)
            throw Error(ErrorCode::SampleOutsideTube, "sample outside the delta0/2 tube");
        VecD H = H_ext(x, t);
        VecD xv = xi(x, t);

        double div = 0.0;
        VecD grad_dfd = VecD::Zero(d);
        VecD grad_xi2 = VecD::Zero(d);
        MatD dxi = MatD::Zero(d, d);  // dxi(i,j) = d_j xi_i
        MatD dH = MatD::Zero(d, d);   // dH(i,j) = d_j H_i
        for (int j = 0; j < d; ++j) {
            VecD xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            VecD xip = xi(xp, t), xim = xi(xm, t);
            VecD col = (xip - xim) / (2.0 * h);
            dxi.col(j) = col;
            dH.col(j) = (H_ext(xp, t) - H_ext(xm, t)) / (2.0 * h);
            div += col[j];
            grad_dfd[j] = (d_Sigma(xp, t) - d_Sigma(xm, t)) / (2.0 * h);
            grad_xi2[j] = (xip.squaredNorm() - xim.squaredNorm()) / (2.0 * h);
        }
        double ra = std::abs(div + H.dot(xv));
        double dtd = (d_Sigma(x, t + h) - d_Sigma(x, t - h)) / (2.0 * h);
        double rb = std::abs(dtd + H.dot(grad_dfd));
        VecD dtxi = (xi(x, t + h) - xi(x, t - h)) / (2.0 * h);
        VecD rc_vec = dtxi + dxi * H + dH.transpose() * xv;
        double dtxi2 = (xi(x, t + h).squaredNorm() - xi(x, t - h).squaredNorm()) / (2.0 * h);
        double rd = std::abs(dtxi2 + H.dot(grad_xi2));

        rep.div_xi = std::max(rep.div_xi, ra);
        rep.transport_d = std::max(rep.transport_d, rb);
        rep.transport_xi = std::max(rep.transport_xi, rc_vec.norm());
        rep.transport_xi2 = std::max(rep.transport_xi2, rd);
        rep.div_xi_per_sample.push_back(ra);
        rep.d_sigma_per_sample.push_back(ds);
    }
    return rep;
}

}  // namespace sil

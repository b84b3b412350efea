#include "sil/potential.hpp"

#include <algorithm>
#include <cmath>

#include "sil/error.hpp"
#include "sil/quadrature.hpp"

namespace sil {

namespace {

constexpr int kTableSize = 4096;

}  // namespace

Potential::Potential(ManifoldPair manifold, double c3, Ramp ramp) : m_(std::move(manifold))
{
    if (!(c3 > 0.0)) throw Error(ErrorCode::ConfigInvalid, "c3 must be positive");
    p_.ramp = ramp;
    p_.c3 = c3;
    p_.delta0 = m_.tube_radius();
    double d2 = p_.delta0 * p_.delta0;
    if (ramp == Ramp::Cubic) {
        p_.c1 = c3 / d2;
        p_.c2 = 3.0 * c3 / d2;
        p_.c4 = 3.0 * c3 / d2;
    } else {
        p_.c1 = c3 / d2;
        p_.c4 = c3 / d2;
        double best = 1.0;
        for (int i = 1; i <= 10000; ++i) {
            double x = i / 10000.0;
            best = std::max(best, 1.0 + x * (2.0 + x * (-2.0 + x * (-1.0 + x))));
        }
        p_.c2 = best * c3 / d2;
    }
    build_table();
    p_.cF = 2.0 * I(0.5 * m_.gap());

    // spectral bound: normal eigenvalue 2f' + 4 s f'' and tangential 2 f' d / (reach - d)
    double reach = std::min(m_.reach(Side::Plus), m_.reach(Side::Minus));
    double lam = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double d = p_.delta0 * i / 2000.0;
        double s = d * d;
        double fp = f_eval(s).second;
        double normal = std::abs(2.0 * fp + 4.0 * s * f_second(s));
        double tangential = std::isfinite(reach) ? std::abs(2.0 * fp * d / (reach - d)) : 0.0;
        lam = std::max({lam, normal, tangential});
    }
    lambda_ = lam;
}

double Potential::f_value(double s) const
{
    if (s < 0.0) throw Error(ErrorCode::NegativeArgument, "f_eval requires s >= 0");
    double x = s / (p_.delta0 * p_.delta0);
    if (x >= 1.0) return p_.c3;
    if (p_.ramp == Ramp::Cubic) return p_.c3 * x * (3.0 + x * (-3.0 + x));
    return p_.c3 * x * (1.0 + x * (2.0 + x * (-2.0 + x * (-1.0 + x))));
}

std::pair<double, double> Potential::f_eval(double s) const
{
    double v = f_value(s);
    double d2 = p_.delta0 * p_.delta0;
    double x = s / d2;
    if (x >= 1.0) return {v, 0.0};
    double y = 1.0 - x;
    if (p_.ramp == Ramp::Cubic) return {v, 3.0 * p_.c3 / d2 * y * y};
    return {v, p_.c3 / d2 * y * y * (1.0 + x) * (1.0 + 5.0 * x)};
}

double Potential::f_second(double s) const
{
    double d2 = p_.delta0 * p_.delta0;
    double x = s / d2;
    if (x >= 1.0) return 0.0;
    if (p_.ramp == Ramp::Cubic) return -6.0 * p_.c3 / (d2 * d2) * (1.0 - x);
    return p_.c3 / (d2 * d2) * (4.0 + x * (-12.0 + x * (-12.0 + 20.0 * x)));
}

double Potential::f_minus_linear(double s) const
{
    double x = s / (p_.delta0 * p_.delta0);
    if (x >= 1.0) return p_.c3 - p_.c4 * s;
    if (p_.ramp == Ramp::Cubic) return p_.c3 * x * x * (x - 3.0);
    return p_.c3 * x * x * (2.0 + x * (-2.0 + x * (-1.0 + x)));
}

double Potential::F_eval(const VecN& u) const
{
    double d = m_.dist_m(u);
    return f_value(d * d);
}

VecN Potential::grad_F(const VecN& u) const
{
    VecN g(u.size());
    F_and_grad_raw(u.data(), g.data());
    return g;
}

double Potential::F_raw(const double* u) const
{
    int side = 0;
    double w[4];
    double d = m_.nearest_raw(u, side, w);
    return f_value(d * d);
}

double Potential::F_and_grad_raw(const double* u, double* grad) const
{
    int side = 0;
    double w[4];
    int n = m_.ambient_dim();
    double d = m_.nearest_raw(u, side, w);
    if (d >= p_.delta0) {
        for (int i = 0; i < n; ++i) grad[i] = 0.0;
        return p_.c3;
    }
    auto [fv, fp] = f_eval(d * d);
    for (int i = 0; i < n; ++i) grad[i] = 2.0 * fp * w[i];
    return fv;
}

void Potential::build_table()
{
    table_.assign(kTableSize + 1, 0.0);
    table_h_ = p_.delta0 / kTableSize;
    auto integrand = [this](double l) { return std::sqrt(2.0 * f_value(l * l)); };
    double acc = 0.0;
    for (int j = 0; j < kTableSize; ++j) {
        double a = j * table_h_, b = (j + 1) * table_h_;
        acc += adaptive_simpson(integrand, a, b, 1e-10 / kTableSize, 30);
        table_[j + 1] = acc;
    }
    I_delta0_ = acc;
}

double Potential::I_prime(double a) const
{
    return std::sqrt(2.0 * f_value(a * a));
}

double Potential::I(double a) const
{
    if (a < 0.0) return -I(-a);
    if (a >= p_.delta0) return I_delta0_ + std::sqrt(2.0 * p_.c3) * (a - p_.delta0);
    double x = a / table_h_;
    int j = std::min(static_cast<int>(x), kTableSize - 1);
    double t = x - j;
    double h = table_h_;
    double y0 = table_[j], y1 = table_[j + 1];
    double m0 = I_prime(j * h) * h, m1 = I_prime((j + 1) * h) * h;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
}

QuasiDistEval Potential::eval_quasi(const VecN& u) const
{
    int n = m_.ambient_dim();
    double half = 0.5 * m_.gap();
    QuasiDistEval r;
    r.grad = VecN::Zero(n);
    r.pi_dir = VecN::Zero(n);
    Nearest nm = m_.nearest_on(u, Side::Minus);
    if (nm.dist <= half) {
        r.value = I(nm.dist);
        r.pi_dir = nm.dir;
        if (nm.dist > 0.0) r.grad = I_prime(nm.dist) / nm.dist * (u - nm.proj);
        return r;
    }
    Nearest np = m_.nearest_on(u, Side::Plus);
    if (np.dist <= half) {
        r.value = p_.cF - I(np.dist);
        r.pi_dir = np.dir;
        if (np.dist > 0.0) r.grad = -I_prime(np.dist) / np.dist * (u - np.proj);
        return r;
    }
    r.value = 0.5 * p_.cF;
    return r;
}

double Potential::quasi_dist(const VecN& u) const
{
    return eval_quasi(u).value;
}

VecN Potential::grad_quasi_dist(const VecN& u) const
{
    double half = 0.5 * m_.gap();
    for (Side s : {Side::Plus, Side::Minus}) {
        if (std::abs(m_.dist_component(u, s) - half) < 1e-8)
            throw Error(ErrorCode::NearKink, "d_F is only Lipschitz on the half-tube boundary");
    }
    return eval_quasi(u).grad;
}

double Potential::centralized_potential(double lam) const
{
    double r = 0.5 * m_.gap() - std::abs(lam);
    return f_value(r * r);
}

double Potential::centralized_potential_prime(double lam) const
{
    double r = 0.5 * m_.gap() - std::abs(lam);
    double sgn = lam > 0.0 ? 1.0 : (lam < 0.0 ? -1.0 : 0.0);
    return -2.0 * r * f_eval(r * r).second * sgn;
}

}  // namespace sil

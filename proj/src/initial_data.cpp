#include "sil/initial_data.hpp"

#include <algorithm>
#include <cmath>

#include "sil/error.hpp"

namespace sil {

InitialData::InitialData(const Potential& pot, const ProfileTable& table, const Interface& iface,
                         InitialMaps maps)
    : pot_(&pot), table_(&table), iface_(&iface), maps_(std::move(maps))
{
    const ManifoldPair& m = pot.manifold();
    half_ = 0.5 * m.gap();
    delta_ = maps_.delta > 0.0 ? maps_.delta : 0.25 * pot.delta0();
    if (2.0 * delta_ >= pot.delta0())
        throw Error(ErrorCode::CollarTooWide, "collar width must satisfy 2 delta < delta0");
    if (iface.kind() == InterfaceKind::ShrinkingSphere && !(iface.r0() - 2.0 * delta_ > 0.0))
        throw Error(ErrorCode::CollarTooWide, "collar 2 delta must fit inside the initial sphere");
    if (maps_.kind == MapsKind::ConstantMinimalPair) {
        if (maps_.p_plus.size() != m.ambient_dim() || maps_.p_minus.size() != m.ambient_dim())
            throw Error(ErrorCode::ConfigInvalid, "initial maps: endpoint dimension mismatch");
        if (!m.is_minimal_pair(maps_.p_plus, maps_.p_minus, 1e-9))
            throw Error(ErrorCode::ConfigInvalid, "initial maps: (p+, p-) must be a minimal pair");
    } else {
        auto [mp, mm] = m.minimal_sets();
        if (mp.is_point() || mm.is_point())
            throw Error(ErrorCode::ConfigInvalid, "sliding pair needs segment minimal sets (capsules)");
        if (!(std::abs(maps_.amplitude) <= 1.0))
            throw Error(ErrorCode::ConfigInvalid, "sliding pair amplitude must lie in [-1, 1]");
        if (maps_.wave.size() != iface.dim())
            throw Error(ErrorCode::ConfigInvalid, "sliding pair wave vector dimension mismatch");
    }
}

double InitialData::phase(const VecD& x, Side s) const
{
    double p = maps_.amplitude * std::sin(maps_.wave.dot(x) + maps_.theta);
    if (maps_.mismatched && s == Side::Minus) p = -p;
    return std::clamp(p, -1.0, 1.0);
}

VecN InitialData::u_in(const VecD& x, Side s) const
{
    if (maps_.kind == MapsKind::ConstantMinimalPair) return s == Side::Plus ? maps_.p_plus : maps_.p_minus;
    auto sets = pot_->manifold().minimal_sets();
    const MinimalSet& ms = s == Side::Plus ? sets.first : sets.second;
    double tau = 0.5 * (phase(x, s) + 1.0);
    return ms.a + tau * (ms.b - ms.a);
}

double InitialData::squeeze(double d) const
{
    double a = std::abs(d);
    double sgn = d < 0.0 ? -1.0 : 1.0;
    if (a >= 2.0 * delta_) return d;
    if (a < delta_) throw Error(ErrorCode::InsideCollar, "point lies inside the collar");
    double u = (a - delta_) / delta_;
    double u2 = u * u, u3 = u2 * u;
    double h10 = u3 - 2.0 * u2 + u;
    double h01 = -2.0 * u3 + 3.0 * u2;
    double h11 = u3 - u2;
    return sgn * (h10 * delta_ * 2.0 + h01 * 2.0 * delta_ + h11 * delta_ * 1.0);
}

double InitialData::squeeze_prime(double d) const
{
    double a = std::abs(d);
    if (a >= 2.0 * delta_) return 1.0;
    if (a < delta_) throw Error(ErrorCode::InsideCollar, "point lies inside the collar");
    double u = (a - delta_) / delta_;
    double u2 = u * u;
    double h10 = 3.0 * u2 - 4.0 * u + 1.0;
    double h01 = -6.0 * u2 + 6.0 * u;
    double h11 = 3.0 * u2 - 2.0 * u;
    return (h10 * delta_ * 2.0 + h01 * 2.0 * delta_ + h11 * delta_) / delta_;
}

VecD InitialData::psi_delta(const VecD& x) const
{
    double d = iface_->d_Sigma(x, 0.0);
    if (std::abs(d) < delta_) throw Error(ErrorCode::InsideCollar, "psi_delta undefined inside the collar");
    if (std::abs(d) >= 2.0 * delta_) return x;
    double dn = squeeze(d);
    return x + (dn - d) * iface_->grad_d(x, 0.0);
}

VecN InitialData::extend_u0(const VecD& x, Side s) const
{
    double d = iface_->d_Sigma(x, 0.0);
    if (std::abs(d) <= delta_) return u_in(iface_->project(x, 0.0), s);
    bool plus_side = d > 0.0;
    if (plus_side != (s == Side::Plus))
        throw Error(ErrorCode::OutsideDomainOfSide, "point outside the domain of this side");
    return u_in(psi_delta(x), s);
}

double InitialData::eta_delta(const VecD& x) const
{
    double a = std::abs(iface_->d_Sigma(x, 0.0));
    return 1.0 - smoothstep5((a - 0.5 * delta_) / (0.5 * delta_));
}

double InitialData::S_eps(const VecD& x, double eps) const
{
    double d = iface_->d_Sigma(x, 0.0);
    double eta = eta_delta(x);
    double step = d > 0.0 ? half_ : (d < 0.0 ? -half_ : 0.0);
    if (eta == 0.0) return step;
    return eta * table_->eval_alpha(d / eps) + (1.0 - eta) * step;
}

VecN InitialData::value(const VecD& x, double eps) const
{
    double d = iface_->d_Sigma(x, 0.0);
    if (std::abs(d) >= delta_) return extend_u0(x, d > 0.0 ? Side::Plus : Side::Minus);
    VecN up = extend_u0(x, Side::Plus);
    VecN um = extend_u0(x, Side::Minus);
    double S = S_eps(x, eps);
    return 0.5 * (up + um) + (S / (2.0 * half_)) * (up - um);
}

Field InitialData::build_initial_field(const Grid& grid, double eps) const
{
    if (grid.dim != iface_->dim())
        throw Error(ErrorCode::ConfigInvalid, "grid and interface dimensions differ");
    if (!(eps > 0.0)) throw Error(ErrorCode::ConfigInvalid, "eps must be positive");
    Field f(grid, pot_->manifold().ambient_dim());
    std::size_t N = grid.size();
    for (std::size_t i = 0; i < N; ++i) f.set(i, value(grid.coord(i), eps));
    f.t = 0.0;
    return f;
}

}  // namespace sil

#include "sil/target_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sil/error.hpp"

namespace sil {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

VecN core_closest(const WellComponent& c, const double* u, int n)
{
    VecN d = c.b - c.a;
    double dd = d.squaredNorm();
    double t = 0.0;
    if (dd > 0.0) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += (u[i] - c.a[i]) * d[i];
        t = clamp01(s / dd);
    }
    return c.a + t * d;
}

}  // namespace

VecN WellComponent::core_point(const VecN& u) const
{
    return core_closest(*this, u.data(), static_cast<int>(u.size()));
}

std::pair<double, double> segment_closest_params(const VecN& p0, const VecN& p1,
                                                 const VecN& q0, const VecN& q1)
{
    VecN d1 = p1 - p0;
    VecN d2 = q1 - q0;
    VecN r = p0 - q0;
    double a = d1.squaredNorm();
    double e = d2.squaredNorm();
    double f = d2.dot(r);
    double s = 0.0, t = 0.0;
    if (a <= 0.0 && e <= 0.0) return {0.0, 0.0};
    if (a <= 0.0) {
        t = clamp01(f / e);
    } else {
        double c = d1.dot(r);
        if (e <= 0.0) {
            s = clamp01(-c / a);
        } else {
            double b = d1.dot(d2);
            double denom = a * e - b * b;
            s = denom > 1e-14 * a * e ? clamp01((b * f - c * e) / denom) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = clamp01(-c / a);
            } else if (t > 1.0) {
                t = 1.0;
                s = clamp01((b - c) / a);
            }
        }
    }
    return {s, t};
}

ManifoldPair ManifoldPair::two_spheres(const VecN& center_plus, double radius_plus,
                                       const VecN& center_minus, double radius_minus,
                                       std::optional<double> tube_radius)
{
    if (center_plus.size() != center_minus.size() || center_plus.size() < 1 || center_plus.size() > 4)
        throw Error(ErrorCode::ConfigInvalid, "sphere centers must share a dimension in [1,4]");
    if (!(radius_plus > 0.0) || !(radius_minus > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "sphere radii must be positive");
    if ((center_plus - center_minus).norm() <= radius_plus + radius_minus)
        throw Error(ErrorCode::ConfigInvalid, "spheres overlap: |c+ - c-| must exceed r+ + r-");
    ManifoldPair m;
    m.kind_ = ManifoldKind::TwoSpheres;
    m.n_ = static_cast<int>(center_plus.size());
    m.plus_ = {center_plus, center_plus, radius_plus};
    m.minus_ = {center_minus, center_minus, radius_minus};
    m.finish(tube_radius);
    return m;
}

ManifoldPair ManifoldPair::two_capsules(const VecN& a_plus, const VecN& b_plus, double radius_plus,
                                        const VecN& a_minus, const VecN& b_minus, double radius_minus,
                                        std::optional<double> tube_radius)
{
    int n = static_cast<int>(a_plus.size());
    if (n < 2 || n > 4 || b_plus.size() != n || a_minus.size() != n || b_minus.size() != n)
        throw Error(ErrorCode::ConfigInvalid, "capsule endpoints must share a dimension in [2,4]");
    if (!(radius_plus > 0.0) || !(radius_minus > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "capsule radii must be positive");
    ManifoldPair m;
    m.kind_ = ManifoldKind::TwoCapsules;
    m.n_ = n;
    m.plus_ = {a_plus, b_plus, radius_plus};
    m.minus_ = {a_minus, b_minus, radius_minus};
    m.finish(tube_radius);
    return m;
}

ManifoldPair ManifoldPair::two_points(double a_plus, double a_minus, std::optional<double> tube_radius)
{
    if (a_plus == a_minus) throw Error(ErrorCode::ConfigInvalid, "two_points wells coincide");
    ManifoldPair m;
    m.kind_ = ManifoldKind::TwoPoints;
    m.n_ = 1;
    VecN ap(1), am(1);
    ap << a_plus;
    am << a_minus;
    m.plus_ = {ap, ap, 0.0};
    m.minus_ = {am, am, 0.0};
    m.finish(tube_radius);
    return m;
}

void ManifoldPair::finish(std::optional<double> tube_radius)
{
    auto [s, t] = segment_closest_params(plus_.a, plus_.b, minus_.a, minus_.b);
    VecN cp = plus_.a + s * (plus_.b - plus_.a);
    VecN cm = minus_.a + t * (minus_.b - minus_.a);
    double core_dist = (cp - cm).norm();
    gap_ = core_dist - plus_.radius - minus_.radius;
    if (!(gap_ > 0.0))
        throw Error(ErrorCode::ConfigInvalid,
                    "well components intersect or enclose each other (gap <= 0)");
    VecN nu = (cp - cm) / core_dist;  // from core- toward core+

    // minimal sets: facing points, or facing segments for parallel overlapping cores
    double s_lo = s, s_hi = s;
    VecN d1 = plus_.b - plus_.a;
    VecN d2 = minus_.b - minus_.a;
    double l1 = d1.norm(), l2 = d2.norm();
    if (l1 > 0.0 && l2 > 0.0 && std::abs(std::abs(d1.dot(d2)) - l1 * l2) <= 1e-12 * l1 * l2) {
        VecN e = d1 / l1;
        // parameters of the minus-core endpoints projected onto the plus line
        double pa = (minus_.a - plus_.a).dot(e) / l1;
        double pb = (minus_.b - plus_.a).dot(e) / l1;
        double lo = std::max(0.0, std::min(pa, pb));
        double hi = std::min(1.0, std::max(pa, pb));
        // the perpendicular offset is constant along parallel lines, so every overlap point is minimal
        if (hi > lo) {
            s_lo = lo;
            s_hi = hi;
        }
    }
    VecN off = core_dist * nu;
    VecN c_lo = plus_.a + s_lo * d1;
    VecN c_hi = plus_.a + s_hi * d1;
    mset_plus_ = {c_lo - plus_.radius * nu, c_hi - plus_.radius * nu};
    mset_minus_ = {c_lo - off + minus_.radius * nu, c_hi - off + minus_.radius * nu};

    double limit = std::min({reach(Side::Plus), reach(Side::Minus), 0.5 * gap_});
    if (tube_radius) {
        tube_ = *tube_radius;
    } else {
        tube_ = 0.25 * limit;
    }
    if (!(tube_ > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "tube radius delta0 must be positive");
    if (2.0 * tube_ > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "tube radius delta0=" << tube_ << " violates 2*delta0 <= min(reach, gap/2)=" << limit;
        throw Error(ErrorCode::ConfigInvalid, os.str());
    }
}

double ManifoldPair::reach(Side s) const
{
    const WellComponent& c = component(s);
    return c.radius > 0.0 ? c.radius : std::numeric_limits<double>::infinity();
}

std::string ManifoldPair::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case ManifoldKind::TwoSpheres: os << "two_spheres"; break;
    case ManifoldKind::TwoCapsules: os << "two_capsules"; break;
    case ManifoldKind::TwoPoints: os << "two_points"; break;
    }
    os << " n=" << n_ << " gap=" << gap_ << " delta0=" << tube_;
    return os.str();
}

double ManifoldPair::signed_dist_component(const VecN& u, Side s) const
{
    const WellComponent& c = component(s);
    return c.radius - (u - c.core_point(u)).norm();
}

double ManifoldPair::dist_component(const VecN& u, Side s) const
{
    return std::abs(signed_dist_component(u, s));
}

double ManifoldPair::dist_m(const VecN& u) const
{
    return std::min(dist_component(u, Side::Plus), dist_component(u, Side::Minus));
}

std::pair<Side, double> ManifoldPair::signed_dist_m(const VecN& u) const
{
    double half = 0.5 * gap_;
    double dp = signed_dist_component(u, Side::Plus);
    double dm = signed_dist_component(u, Side::Minus);
    if (std::abs(dp) <= half) return {Side::Plus, dp};
    if (std::abs(dm) <= half) return {Side::Minus, dm};
    throw Error(ErrorCode::OutsideHalfTubes, "point is farther than dist_m/2 from both wells");
}

VecN ManifoldPair::project_component(const VecN& u, Side s) const
{
    const WellComponent& c = component(s);
    VecN core = c.core_point(u);
    VecN v = u - core;
    double rho = v.norm();
    if (c.radius == 0.0) return core;
    if (rho == 0.0) throw Error(ErrorCode::OutsideTube, "projection undefined on the core of a well");
    return core + (c.radius / rho) * v;
}

VecN ManifoldPair::project_m(const VecN& u) const
{
    Nearest nr = nearest(u);
    if (!(nr.dist < 2.0 * tube_))
        throw Error(ErrorCode::OutsideTube, "point is not within 2*delta0 of the wells");
    return nr.proj;
}

bool ManifoldPair::in_enclosed(const VecN& u, Side s) const
{
    const WellComponent& c = component(s);
    return (u - c.core_point(u)).norm() < c.radius;
}

Nearest ManifoldPair::nearest_on(const VecN& u, Side s) const
{
    const WellComponent& c = component(s);
    VecN core = c.core_point(u);
    VecN v = u - core;
    double rho = v.norm();
    Nearest nr;
    nr.side = s;
    nr.dist = std::abs(c.radius - rho);
    if (rho > 0.0) {
        nr.dir = v / rho;
    } else {
        nr.dir = VecN::Zero(n_);
        nr.dir[0] = 1.0;
    }
    nr.proj = core + c.radius * nr.dir;
    return nr;
}

Nearest ManifoldPair::nearest(const VecN& u) const
{
    Nearest p = nearest_on(u, Side::Plus);
    Nearest m = nearest_on(u, Side::Minus);
    return p.dist <= m.dist ? p : m;
}

bool ManifoldPair::is_minimal_pair(const VecN& p_plus, const VecN& p_minus, double tol) const
{
    if (dist_component(p_plus, Side::Plus) > tol || dist_component(p_minus, Side::Minus) > tol)
        throw Error(ErrorCode::NotOnManifold, "endpoints are not on their wells within tol");
    return std::abs((p_plus - p_minus).norm() - gap_) <= tol;
}

double ManifoldPair::nearest_raw(const double* u, int& side, double* u_minus_proj) const
{
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2; ++k) {
        const WellComponent& c = k == 0 ? plus_ : minus_;
        VecN core = core_closest(c, u, n_);
        double v[4];
        double rho2 = 0.0;
        for (int i = 0; i < n_; ++i) {
            v[i] = u[i] - core[i];
            rho2 += v[i] * v[i];
        }
        double rho = std::sqrt(rho2);
        double dist = std::abs(c.radius - rho);
        if (dist < best) {
            best = dist;
            side = k;
            double scale = rho > 0.0 ? 1.0 - c.radius / rho : 0.0;
            for (int i = 0; i < n_; ++i) u_minus_proj[i] = scale * v[i];
        }
    }
    return best;
}

}  // namespace sil

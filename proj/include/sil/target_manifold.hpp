#pragma once

#include <optional>
#include <string>
#include <utility>

#include "sil/types.hpp"

namespace sil {

enum class ManifoldKind { TwoSpheres, TwoCapsules, TwoPoints };

// One well component: the boundary of the r-neighbourhood of the segment [a,b].
// a == b gives a sphere; radius 0 gives a point (n = 1 only).
struct WellComponent {
    VecN a;
    VecN b;
    double radius = 0.0;

    VecN core_point(const VecN& u) const;
};

// Minimal set M of one side: the segment [a,b] (a == b for a single point).
// a of M+ faces a of M-, b faces b.
struct MinimalSet {
    VecN a;
    VecN b;
    bool is_point() const { return (a - b).norm() == 0.0; }
};

struct Nearest {
    Side side;
    double dist;  // unsigned distance to m_side
    VecN proj;    // nearest point on m_side
    VecN dir;     // unit vector (u - core)/|u - core|, the radial direction of the component
};

class ManifoldPair {
public:
    static ManifoldPair two_spheres(const VecN& center_plus, double radius_plus,
                                    const VecN& center_minus, double radius_minus,
                                    std::optional<double> tube_radius = std::nullopt);
    static ManifoldPair two_capsules(const VecN& a_plus, const VecN& b_plus, double radius_plus,
                                     const VecN& a_minus, const VecN& b_minus, double radius_minus,
                                     std::optional<double> tube_radius = std::nullopt);
    static ManifoldPair two_points(double a_plus, double a_minus,
                                   std::optional<double> tube_radius = std::nullopt);

    ManifoldKind kind() const { return kind_; }
    int ambient_dim() const { return n_; }
    double gap() const { return gap_; }
    double tube_radius() const { return tube_; }
    double reach(Side s) const;
    const WellComponent& component(Side s) const { return s == Side::Plus ? plus_ : minus_; }
    std::string describe() const;

    double signed_dist_component(const VecN& u, Side s) const;
    double dist_component(const VecN& u, Side s) const;
    std::pair<Side, double> signed_dist_m(const VecN& u) const;
    VecN project_component(const VecN& u, Side s) const;
    VecN project_m(const VecN& u) const;
    bool in_enclosed(const VecN& u, Side s) const;
    Nearest nearest(const VecN& u) const;
    Nearest nearest_on(const VecN& u, Side s) const;
    double dist_m(const VecN& u) const;

    std::pair<MinimalSet, MinimalSet> minimal_sets() const { return {mset_plus_, mset_minus_}; }
    bool is_minimal_pair(const VecN& p_plus, const VecN& p_minus, double tol) const;

    // hot path: unsigned distance to the nearest component, its side and the vector u - P(u)
    double nearest_raw(const double* u, int& side, double* u_minus_proj) const;

private:
    ManifoldPair() = default;
    void finish(std::optional<double> tube_radius);

    ManifoldKind kind_ = ManifoldKind::TwoSpheres;
    int n_ = 0;
    WellComponent plus_;
    WellComponent minus_;
    double gap_ = 0.0;
    double tube_ = 0.0;
    MinimalSet mset_plus_;
    MinimalSet mset_minus_;
};

// closest points between segments [p0,p1] and [q0,q1]; returns (s,t) parameters
std::pair<double, double> segment_closest_params(const VecN& p0, const VecN& p1,
                                                 const VecN& q0, const VecN& q1);

}  // namespace sil

#pragma once

#include "sil/grid.hpp"
#include "sil/interface_geometry.hpp"
#include "sil/potential.hpp"
#include "sil/profile_1d.hpp"

namespace sil {

enum class MapsKind { ConstantMinimalPair, SlidingSegmentPair };

// Bulk maps u_in^+ and u_in^-.
// SlidingSegmentPair: u^s(x) is the point at parameter (phase_s(x)+1)/2 along the
// minimal segment of side s, with phase(x) = amplitude sin(k.x + theta).
// mismatched = true flips the phase of the minus side (not a minimal pair off the midline).
struct InitialMaps {
    MapsKind kind = MapsKind::ConstantMinimalPair;
    VecN p_plus;
    VecN p_minus;
    double amplitude = 0.0;
    VecD wave;
    double theta = 0.0;
    bool mismatched = false;
    double delta = 0.0;  // collar width; <= 0 selects delta0 / 4
};

class InitialData {
public:
    InitialData(const Potential& pot, const ProfileTable& table, const Interface& iface,
                InitialMaps maps);

    double delta() const { return delta_; }
    const InitialMaps& maps() const { return maps_; }

    double phase(const VecD& x, Side s) const;
    VecN u_in(const VecD& x, Side s) const;
    VecD psi_delta(const VecD& x) const;
    VecN extend_u0(const VecD& x, Side s) const;
    double eta_delta(const VecD& x) const;
    double S_eps(const VecD& x, double eps) const;
    VecN value(const VecD& x, double eps) const;

    // radial squeeze profile in signed distance: |d| in [delta, 2 delta] -> [0, 2 delta]
    double squeeze(double d) const;
    double squeeze_prime(double d) const;

    Field build_initial_field(const Grid& grid, double eps) const;

private:
    const Potential* pot_;
    const ProfileTable* table_;
    const Interface* iface_;
    InitialMaps maps_;
    double delta_ = 0.0;
    double half_ = 0.0;
};

}  // namespace sil

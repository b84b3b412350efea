#pragma once

#include "gen.hpp"
#include "sil/initial_data.hpp"
#include "sil/profile_1d.hpp"

namespace bench {

// two capsules facing each other across x = +-1, flat faces give segment minimal sets
inline sil::Potential capsules()
{
    using gen::vec;
    return sil::Potential(sil::ManifoldPair::two_capsules(vec({2, -1}), vec({2, 1}), 1.0, vec({-2, -1}), vec({-2, 1}),
                                                          1.0, 0.5),
                          0.25);
}

inline sil::Potential spheres()
{
    using gen::vec;
    return sil::Potential(sil::ManifoldPair::two_spheres(vec({2, 0}), 1.0, vec({-2, 0}), 1.0));
}

inline sil::InitialMaps sliding(double delta, double amplitude = 0.8)
{
    sil::InitialMaps m;
    m.kind = sil::MapsKind::SlidingSegmentPair;
    m.amplitude = amplitude;
    m.wave = gen::vecd({1.5707963267948966, 0.0});
    m.delta = delta;
    return m;
}

inline sil::InitialMaps constant_pair(double delta)
{
    sil::InitialMaps m;
    m.kind = sil::MapsKind::ConstantMinimalPair;
    m.p_plus = gen::vec({1, 0});
    m.p_minus = gen::vec({-1, 0});
    m.delta = delta;
    return m;
}

}  // namespace bench

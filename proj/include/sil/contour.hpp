#pragma once

#include <array>
#include <vector>

#include "sil/grid.hpp"

namespace sil {

using Point2 = std::array<double, 2>;

struct LevelSet {
    std::vector<std::array<Point2, 2>> segments;  // 2-D: marching-squares segments
    std::vector<double> points;                   // 1-D: crossing abscissae
    double measure = 0.0;                         // polyline length (2-D) or crossing count (1-D)

    std::vector<Point2> vertices() const;
};

// {psi = level} on a 1-D or 2-D grid; EmptyLevelSet when the level is not crossed
LevelSet extract_level(const Grid& grid, const std::vector<double>& psi, double level);

}  // namespace sil

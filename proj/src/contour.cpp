#include "sil/contour.hpp"

#include <cmath>

#include "sil/error.hpp"

namespace sil {

std::vector<Point2> LevelSet::vertices() const
{
    std::vector<Point2> v;
    for (const auto& s : segments) {
        v.push_back(s[0]);
        v.push_back(s[1]);
    }
    for (double x : points) v.push_back({x, 0.0});
    return v;
}

namespace {

Point2 lerp_edge(double x0, double y0, double x1, double y1, double v0, double v1, double level)
{
    double w = (level - v0) / (v1 - v0);
    return {x0 + w * (x1 - x0), y0 + w * (y1 - y0)};
}

}  // namespace

LevelSet extract_level(const Grid& grid, const std::vector<double>& psi, double level)
{
    if (psi.size() != grid.size()) throw Error(ErrorCode::ConfigInvalid, "scalar field size mismatch");
    LevelSet ls;
    if (grid.dim == 1) {
        int n = grid.counts[0];
        for (int i = 0; i + 1 < n; ++i) {
            double a = psi[i] - level, b = psi[i + 1] - level;
            if ((a < 0.0) != (b < 0.0)) {
                double w = a / (a - b);
                ls.points.push_back(grid.lo[0] + (i + w) * grid.h);
            }
        }
        ls.measure = static_cast<double>(ls.points.size());
        if (ls.points.empty()) throw Error(ErrorCode::EmptyLevelSet, "level set is empty");
        return ls;
    }
    if (grid.dim != 2) throw Error(ErrorCode::ConfigInvalid, "level sets are extracted in 1-D and 2-D only");

    int nx = grid.counts[0], ny = grid.counts[1];
    double h = grid.h;
    auto val = [&](int i, int j) { return psi[static_cast<std::size_t>(i) * ny + j]; };
    double total = 0.0;
    for (int i = 0; i + 1 < nx; ++i) {
        double x0 = grid.lo[0] + i * h, x1 = x0 + h;
        for (int j = 0; j + 1 < ny; ++j) {
            double y0 = grid.lo[1] + j * h, y1 = y0 + h;
            // corners counter-clockwise: (x0,y0) (x1,y0) (x1,y1) (x0,y1)
            double v[4] = {val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)};
            int code = 0;
            for (int k = 0; k < 4; ++k)
                if (v[k] >= level) code |= 1 << k;
            if (code == 0 || code == 15) continue;
            Point2 e[4];
            bool has[4] = {false, false, false, false};
            auto edge = [&](int k) {
                if (has[k]) return;
                has[k] = true;
                switch (k) {
                case 0: e[0] = lerp_edge(x0, y0, x1, y0, v[0], v[1], level); break;
                case 1: e[1] = lerp_edge(x1, y0, x1, y1, v[1], v[2], level); break;
                case 2: e[2] = lerp_edge(x1, y1, x0, y1, v[2], v[3], level); break;
                default: e[3] = lerp_edge(x0, y1, x0, y0, v[3], v[0], level); break;
                }
            };
            auto add = [&](int a, int b) {
                edge(a);
                edge(b);
                ls.segments.push_back({e[a], e[b]});
                total += std::hypot(e[a][0] - e[b][0], e[a][1] - e[b][1]);
            };
            // edge k joins corner k and corner k+1
            switch (code) {
            case 1: case 14: add(3, 0); break;
            case 2: case 13: add(0, 1); break;
            case 4: case 11: add(1, 2); break;
            case 8: case 7: add(2, 3); break;
            case 3: case 12: add(3, 1); break;
            case 6: case 9: add(0, 2); break;
            case 5: case 10: {
                double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                bool centre_in = centre >= level;
                // code 5: corners 0 and 2 above the level
                if ((code == 5) == centre_in) {
                    add(0, 1);
                    add(2, 3);
                } else {
                    add(3, 0);
                    add(1, 2);
                }
                break;
            }
            default: break;
            }
        }
    }
    ls.measure = total;
    if (ls.segments.empty()) throw Error(ErrorCode::EmptyLevelSet, "level set is empty");
    return ls;
}

}  // namespace sil

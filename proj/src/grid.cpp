#include "sil/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sil/error.hpp"

namespace sil {

Grid Grid::make(const std::vector<double>& lo, const std::vector<double>& hi,
                const std::vector<int>& counts)
{
    int d = static_cast<int>(counts.size());
    if (d < 1 || d > 3 || lo.size() != counts.size() || hi.size() != counts.size())
        throw Error(ErrorCode::ConfigInvalid, "grid: lo, hi and counts must share a dimension 1..3");
    Grid g;
    g.dim = d;
    for (int a = 0; a < d; ++a) {
        if (counts[a] < 16) throw Error(ErrorCode::ConfigInvalid, "grid: counts must be >= 16 per axis");
        if (!(hi[a] > lo[a])) throw Error(ErrorCode::ConfigInvalid, "grid: hi must exceed lo");
        g.counts[a] = counts[a];
        g.lo[a] = lo[a];
        g.hi[a] = hi[a];
    }
    g.h = (hi[0] - lo[0]) / (counts[0] - 1);
    for (int a = 1; a < d; ++a) {
        double ha = (hi[a] - lo[a]) / (counts[a] - 1);
        if (std::abs(ha - g.h) > 1e-12 * g.h)
            throw Error(ErrorCode::ConfigInvalid, "grid: spacing must agree across axes");
    }
    std::ptrdiff_t s = 1;
    for (int a = d - 1; a >= 0; --a) {
        g.stride[a] = s;
        s *= g.counts[a];
    }
    return g;
}

std::size_t Grid::size() const
{
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(counts[a]);
    return s;
}

std::array<int, 3> Grid::multi(std::size_t idx) const
{
    std::array<int, 3> m{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        m[a] = static_cast<int>(idx % counts[a]);
        idx /= counts[a];
    }
    return m;
}

std::size_t Grid::index(const std::array<int, 3>& m) const
{
    std::size_t idx = 0;
    for (int a = 0; a < dim; ++a) idx = idx * counts[a] + m[a];
    return idx;
}

VecD Grid::coord(std::size_t idx) const
{
    auto m = multi(idx);
    VecD x(dim);
    for (int a = 0; a < dim; ++a) x[a] = lo[a] + m[a] * h;
    return x;
}

bool Grid::is_boundary(std::size_t idx) const
{
    auto m = multi(idx);
    for (int a = 0; a < dim; ++a)
        if (m[a] == 0 || m[a] == counts[a] - 1) return true;
    return false;
}

double Grid::trap_weight(std::size_t idx) const
{
    auto m = multi(idx);
    double w = 1.0;
    for (int a = 0; a < dim; ++a)
        if (m[a] == 0 || m[a] == counts[a] - 1) w *= 0.5;
    return w;
}

double Grid::cell_volume() const
{
    return std::pow(h, dim);
}

Field::Field(const Grid& g, int ncomp) : grid(g), n(ncomp), data(g.size() * ncomp, 0.0) {}

VecN Field::value(std::size_t idx) const
{
    VecN v(n);
    for (int c = 0; c < n; ++c) v[c] = data[idx * n + c];
    return v;
}

void Field::set(std::size_t idx, const VecN& v)
{
    for (int c = 0; c < n; ++c) data[idx * n + c] = v[c];
}

double Field::max_norm() const
{
    double m = 0.0;
    std::size_t N = grid.size();
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += data[i * n + c] * data[i * n + c];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

BoundaryData BoundaryData::from_field(const Field& f)
{
    BoundaryData b;
    b.n = f.n;
    std::size_t N = f.grid.size();
    for (std::size_t i = 0; i < N; ++i) {
        if (!f.grid.is_boundary(i)) continue;
        b.nodes.push_back(i);
        for (int c = 0; c < f.n; ++c) b.values.push_back(f.data[i * f.n + c]);
    }
    return b;
}

void BoundaryData::apply(Field& f) const
{
    for (std::size_t k = 0; k < nodes.size(); ++k)
        for (int c = 0; c < n; ++c) f.data[nodes[k] * n + c] = values[k * n + c];
}

double BoundaryData::max_mismatch(const Field& f) const
{
    double m = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        for (int c = 0; c < n; ++c)
            m = std::max(m, std::abs(f.data[nodes[k] * n + c] - values[k * n + c]));
    return m;
}

void write_snapshot(std::ostream& os, const Field& f, double eps)
{
    nlohmann::ordered_json hdr;
    hdr["dims"] = f.grid.dim;
    hdr["counts"] = std::vector<int>(f.grid.counts.begin(), f.grid.counts.begin() + f.grid.dim);
    hdr["lo"] = std::vector<double>(f.grid.lo.begin(), f.grid.lo.begin() + f.grid.dim);
    hdr["hi"] = std::vector<double>(f.grid.hi.begin(), f.grid.hi.begin() + f.grid.dim);
    hdr["h"] = f.grid.h;
    hdr["n"] = f.n;
    hdr["eps"] = eps;
    hdr["t"] = f.t;
    os << hdr.dump() << '\n';
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(f.data.data()),
                 static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    } else {
        for (double v : f.data) {
            unsigned char b[8];
            std::memcpy(b, &v, 8);
            for (int i = 7; i >= 0; --i) os.put(static_cast<char>(b[i]));
        }
    }
}

void write_snapshot(const std::string& path, const Field& f, double eps)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::ConfigInvalid, "cannot open snapshot for writing: " + path);
    write_snapshot(os, f, eps);
}

Field read_snapshot(std::istream& is, double* eps)
{
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::DataCorrupt, "snapshot: missing header");
    nlohmann::json hdr;
    try {
        hdr = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::DataCorrupt, std::string("snapshot header: ") + e.what());
    }
    std::vector<int> counts = hdr.at("counts").get<std::vector<int>>();
    std::vector<double> lo, hi;
    double h = hdr.at("h").get<double>();
    if (hdr.contains("lo")) {
        lo = hdr["lo"].get<std::vector<double>>();
        hi = hdr["hi"].get<std::vector<double>>();
    } else {
        for (int c : counts) {
            lo.push_back(0.0);
            hi.push_back(h * (c - 1));
        }
    }
    Field f(Grid::make(lo, hi, counts), hdr.at("n").get<int>());
    f.t = hdr.at("t").get<double>();
    if (eps) *eps = hdr.at("eps").get<double>();
    is.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != f.data.size() * sizeof(double))
        throw Error(ErrorCode::DataCorrupt, "snapshot: truncated payload");
    if constexpr (std::endian::native == std::endian::big) {
        for (double& v : f.data) {
            unsigned char b[8];
            std::memcpy(b, &v, 8);
            std::reverse(b, b + 8);
            std::memcpy(&v, b, 8);
        }
    }
    return f;
}

Field read_snapshot(const std::string& path, double* eps)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::ConfigInvalid, "cannot open snapshot: " + path);
    return read_snapshot(is, eps);
}

}  // namespace sil

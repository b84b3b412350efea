#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sil/types.hpp"

namespace sil {

// Uniform tensor grid on an axis-aligned box. Node index is row-major with axis 0 slowest.
struct Grid {
    int dim = 1;
    std::array<int, 3> counts{1, 1, 1};
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{0.0, 0.0, 0.0};
    double h = 0.0;
    std::array<std::ptrdiff_t, 3> stride{0, 0, 0};

    static Grid make(const std::vector<double>& lo, const std::vector<double>& hi,
                     const std::vector<int>& counts);

    std::size_t size() const;
    std::array<int, 3> multi(std::size_t idx) const;
    std::size_t index(const std::array<int, 3>& m) const;
    VecD coord(std::size_t idx) const;
    bool is_boundary(std::size_t idx) const;
    // product of 1/2 factors at boundary nodes (trapezoid weight without h^d)
    double trap_weight(std::size_t idx) const;
    double cell_volume() const;
};

struct Field {
    Grid grid;
    int n = 0;
    double t = 0.0;
    std::vector<double> data;  // node-major, components innermost

    Field() = default;
    Field(const Grid& g, int ncomp);

    double* at(std::size_t idx) { return data.data() + idx * n; }
    const double* at(std::size_t idx) const { return data.data() + idx * n; }
    VecN value(std::size_t idx) const;
    void set(std::size_t idx, const VecN& v);
    double max_norm() const;
};

// Dirichlet data: values of the initial field on boundary nodes, held fixed in time
struct BoundaryData {
    std::vector<std::size_t> nodes;
    std::vector<double> values;
    int n = 0;

    static BoundaryData from_field(const Field& f);
    void apply(Field& f) const;
    double max_mismatch(const Field& f) const;
};

void write_snapshot(std::ostream& os, const Field& f, double eps);
void write_snapshot(const std::string& path, const Field& f, double eps);
Field read_snapshot(std::istream& is, double* eps = nullptr);
Field read_snapshot(const std::string& path, double* eps = nullptr);

}  // namespace sil

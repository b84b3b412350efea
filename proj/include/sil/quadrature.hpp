#pragma once

#include <functional>

namespace sil {

// adaptive Simpson on [a,b] to absolute tolerance tol; throws QuadratureFailure past max_depth
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

// composite Gauss-Legendre (10 points per panel)
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace sil

#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace sil {

// target-space vectors (n <= 4) and physical-space vectors (d <= 3)
using VecN = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using VecD = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using MatD = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

enum class Side { Plus, Minus };

inline Side other(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }
inline const char* side_name(Side s) { return s == Side::Plus ? "+" : "-"; }

// Neumaier compensated sum; callers add in a fixed order
class Accumulator {
public:
    void add(double x)
    {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double smoothstep5(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

inline double smoothstep5_prime(double x)
{
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double y = x * (1.0 - x);
    return 30.0 * y * y;
}

}  // namespace sil

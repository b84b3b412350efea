#pragma once

#include <cstdint>
#include <random>

#include "sil/types.hpp"

namespace gen {

// fixed-seed source for property tests
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

    sil::VecN box(const sil::VecN& lo, const sil::VecN& hi)
    {
        sil::VecN v(lo.size());
        for (int i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
        return v;
    }
    sil::VecN unit(int n)
    {
        std::normal_distribution<double> g;
        sil::VecN v(n);
        do {
            for (int i = 0; i < n; ++i) v[i] = g(rng);
        } while (v.norm() < 1e-3);
        return v / v.norm();
    }
};

inline sil::VecN vec(std::initializer_list<double> xs)
{
    sil::VecN v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

inline sil::VecD vecd(std::initializer_list<double> xs)
{
    sil::VecD v(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

constexpr int kCases = 200;

}  // namespace gen

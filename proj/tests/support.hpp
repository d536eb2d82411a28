#pragma once

#include "leadlag/date.hpp"
#include "leadlag/timeseries.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace testing_support {

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

inline std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed, double sd = 1.0) {
    auto e = white_noise(n, seed, sd);
    std::vector<double> v(n);
    v[0] = e[0];
    for (std::size_t t = 1; t < n; ++t) v[t] = phi * v[t - 1] + e[t];
    return v;
}

/// Smooth gamma-like wave sampled on 0..n-1, shifted so the curve at day t
/// equals the unshifted curve at t + shift.
inline std::vector<double> wave(std::size_t n, double peak, double width, double shift = 0.0) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double u = 1.0 + (static_cast<double>(t) + shift - peak) / width;
        v[t] = u <= 0.0 ? 0.0 : 100.0 * std::pow(u * std::exp(1.0 - u), 4.0);
    }
    return v;
}

inline leadlag::TimeSeries series(std::vector<double> v, leadlag::Date start = leadlag::Date{2022, 1, 1}) {
    return leadlag::TimeSeries{start, std::move(v)};
}

} // namespace testing_support

#pragma once

// Literal evaluation of the delay-indexed cross correlation
//   R(d) = sum_t (x_t - m_x)(y_{t-d} - m_y) / (sqrt(sum (x - m_x)^2) sqrt(sum (y - m_y)^2))
// with the sum over every t for which t - d is a valid index.

#include <cmath>
#include <vector>

namespace oracle {

inline double ccf_delay(const std::vector<double>& x, const std::vector<double>& y, int d) {
    const long n = static_cast<long>(x.size());
    double mx = 0, my = 0;
    for (long t = 0; t < n; ++t) {
        mx += x[t];
        my += y[t];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sx = 0, sy = 0;
    for (long t = 0; t < n; ++t) {
        sx += (x[t] - mx) * (x[t] - mx);
        sy += (y[t] - my) * (y[t] - my);
    }
    double num = 0;
    for (long t = 0; t < n; ++t) {
        const long s = t - d;
        if (s < 0 || s >= n) continue;
        num += (x[t] - mx) * (y[s] - my);
    }
    return num / (std::sqrt(sx) * std::sqrt(sy));
}

} // namespace oracle

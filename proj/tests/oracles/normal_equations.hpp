#pragma once

// Reference least squares via (X'X) b = X'y in long double with partial-pivot
// Gaussian elimination. Slow and numerically naive on purpose: it shares no
// code with the QR solver it checks.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

struct NormalFit {
    std::vector<long double> beta; // intercept first
    long double rss = 0;
    std::size_t n = 0;
    std::size_t p = 0;
};

inline std::vector<long double> solve_dense(std::vector<std::vector<long double>> a, std::vector<long double> b) {
    const std::size_t k = b.size();
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r) {
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        }
        if (a[piv][c] == 0) throw std::runtime_error("singular normal equations");
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < k; ++r) {
            const long double f = a[r][c] / a[c][c];
            for (std::size_t cc = c; cc < k; ++cc) a[r][cc] -= f * a[c][cc];
            b[r] -= f * b[c];
        }
    }
    std::vector<long double> x(k);
    for (std::size_t r = k; r-- > 0;) {
        long double s = b[r];
        for (std::size_t c = r + 1; c < k; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

/// Intercept plus the given regressor columns.
inline NormalFit normal_equations_fit(const std::vector<double>& y, const std::vector<std::vector<double>>& cols) {
    const std::size_t n = y.size();
    const std::size_t p = cols.size() + 1;
    auto xv = [&](std::size_t r, std::size_t c) -> long double { return c == 0 ? 1.0L : cols[c - 1][r]; };
    std::vector<std::vector<long double>> xtx(p, std::vector<long double>(p, 0));
    std::vector<long double> xty(p, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t a = 0; a < p; ++a) {
            xty[a] += xv(r, a) * y[r];
            for (std::size_t b = 0; b < p; ++b) xtx[a][b] += xv(r, a) * xv(r, b);
        }
    }
    NormalFit fit;
    fit.beta = solve_dense(std::move(xtx), std::move(xty));
    fit.n = n;
    fit.p = p;
    for (std::size_t r = 0; r < n; ++r) {
        long double e = y[r];
        for (std::size_t a = 0; a < p; ++a) e -= fit.beta[a] * xv(r, a);
        fit.rss += e * e;
    }
    return fit;
}

struct GrangerReference {
    long double f = 0;
    double df1 = 0;
    double df2 = 0;
};

/// Lagged-regression F test built from scratch: rows t = m .. len-1 where
/// len = n - horizon, response y[t + h], own lags y[t - j + h], indicator lags x[t - j].
inline GrangerReference granger_reference(const std::vector<double>& x, const std::vector<double>& y, int m, int h) {
    const std::size_t len = y.size() - static_cast<std::size_t>(h);
    std::vector<double> resp;
    std::vector<std::vector<double>> own(static_cast<std::size_t>(m)), cross(static_cast<std::size_t>(m));
    for (std::size_t t = static_cast<std::size_t>(m); t < len; ++t) {
        resp.push_back(y[t + static_cast<std::size_t>(h)]);
        for (int j = 1; j <= m; ++j) {
            own[static_cast<std::size_t>(j - 1)].push_back(y[t - static_cast<std::size_t>(j) + static_cast<std::size_t>(h)]);
            cross[static_cast<std::size_t>(j - 1)].push_back(x[t - static_cast<std::size_t>(j)]);
        }
    }
    auto all = own;
    all.insert(all.end(), cross.begin(), cross.end());
    const auto r = normal_equations_fit(resp, own);
    const auto u = normal_equations_fit(resp, all);
    GrangerReference g;
    g.df1 = static_cast<double>(u.p - r.p);
    g.df2 = static_cast<double>(u.n - u.p);
    long double num = (r.rss - u.rss) / g.df1;
    if (num < 0) num = 0;
    g.f = num / (u.rss / g.df2);
    return g;
}

} // namespace oracle

#include "leadlag/linalg.hpp"
#include "leadlag/error.hpp"

#include <cmath>
#include <string>

namespace leadlag::linalg {

namespace {

double norm2(std::span<const double> v, std::size_t from) {
    // scaled accumulation avoids overflow on large counts
    double scale = 0.0, ssq = 1.0;
    for (std::size_t i = from; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        const double a = std::fabs(v[i]);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

} // namespace

LeastSquaresFit least_squares(const Matrix& design, std::span<const double> response, AliasPolicy policy,
                              double alias_tol) {
    const std::size_t n = design.rows();
    const std::size_t p = design.cols();
    if (response.size() != n) {
        throw Error(ErrorKind::invalid_argument, "least_squares: response length " + std::to_string(response.size()) +
                                                     " != design rows " + std::to_string(n));
    }
    if (n <= p) {
        throw Error(ErrorKind::insufficient, "least_squares: need more observations than parameters (n=" +
                                                 std::to_string(n) + ", p=" + std::to_string(p) + ")");
    }

    Matrix a = design;
    std::vector<double> y(response.begin(), response.end());
    std::vector<double> original_norm(p);
    for (std::size_t j = 0; j < p; ++j) original_norm[j] = norm2(a.col(j), 0);

    LeastSquaresFit fit;
    fit.coefficients.assign(p, 0.0);
    fit.kept.assign(p, false);

    std::vector<std::size_t> pivot_cols; // kept column for each R row
    std::size_t k = 0;
    for (std::size_t j = 0; j < p; ++j) {
        auto cj = a.col(j);
        const double residual = norm2(cj, k);
        if (original_norm[j] == 0.0 || residual <= alias_tol * original_norm[j]) {
            if (policy == AliasPolicy::reject) throw Error(ErrorKind::degenerate, "collinear design");
            continue;
        }
        // Reflector v = x - alpha e1 on rows k..n-1, alpha chosen to avoid cancellation.
        const double alpha = cj[k] > 0 ? -residual : residual;
        std::vector<double> v(cj.begin() + static_cast<std::ptrdiff_t>(k), cj.end());
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (double e : v) vnorm2 += e * e;

        auto reflect = [&](std::span<double> col) {
            double dot = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * col[k + i];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = 0; i < v.size(); ++i) col[k + i] -= f * v[i];
        };
        for (std::size_t jj = j + 1; jj < p; ++jj) reflect(a.col(jj));
        reflect(y);
        cj[k] = alpha;
        for (std::size_t i = k + 1; i < n; ++i) cj[i] = 0.0;

        fit.kept[j] = true;
        pivot_cols.push_back(j);
        ++k;
    }
    fit.rank = k;

    // Back substitution on the kept columns.
    for (std::size_t r = k; r-- > 0;) {
        const std::size_t j = pivot_cols[r];
        double acc = y[r];
        for (std::size_t rr = r + 1; rr < k; ++rr) acc -= a(r, pivot_cols[rr]) * fit.coefficients[pivot_cols[rr]];
        fit.coefficients[j] = acc / a(r, j);
    }

    double rss = 0.0;
    for (std::size_t i = k; i < n; ++i) rss += y[i] * y[i];
    fit.rss = rss;
    return fit;
}

} // namespace leadlag::linalg

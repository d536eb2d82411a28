#include "leadlag/granger.hpp"
#include "leadlag/error.hpp"
#include "leadlag/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace leadlag::granger {

namespace {

linalg::Matrix design_with_intercept(std::size_t n, const std::vector<std::vector<double>>& regressors) {
    linalg::Matrix x(n, regressors.size() + 1);
    for (std::size_t r = 0; r < n; ++r) x(r, 0) = 1.0;
    for (std::size_t c = 0; c < regressors.size(); ++c) {
        if (regressors[c].size() != n) {
            throw Error(ErrorKind::invalid_argument, "regressor " + std::to_string(c) + " has length " +
                                                         std::to_string(regressors[c].size()) + ", expected " +
                                                         std::to_string(n));
        }
        for (std::size_t r = 0; r < n; ++r) x(r, c + 1) = regressors[c][r];
    }
    return x;
}

OlsFit to_fit(const linalg::LeastSquaresFit& ls, std::size_t n) {
    return OlsFit{ls.coefficients, ls.rss, n, ls.rank};
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw Error(ErrorKind::invalid_argument, "incomplete beta continued fraction did not converge");
}

} // namespace

OlsFit ols_fit(std::span<const double> response, const std::vector<std::vector<double>>& regressors) {
    const auto x = design_with_intercept(response.size(), regressors);
    return to_fit(linalg::least_squares(x, response, linalg::AliasPolicy::reject), response.size());
}

FStatistic f_statistic(const OlsFit& restricted, const OlsFit& unrestricted) {
    if (unrestricted.p <= restricted.p) {
        throw Error(ErrorKind::invalid_argument, "unrestricted model must have more parameters than restricted");
    }
    if (unrestricted.n != restricted.n) throw Error(ErrorKind::invalid_argument, "models fitted on different rows");
    if (unrestricted.n <= unrestricted.p) throw Error(ErrorKind::insufficient, "no residual degrees of freedom");

    FStatistic out;
    out.df1 = static_cast<double>(unrestricted.p - restricted.p);
    out.df2 = static_cast<double>(unrestricted.n - unrestricted.p);
    double gain = restricted.rss - unrestricted.rss;
    if (gain < 0.0) {
        gain = 0.0;
        out.clamped = true;
    }
    if (unrestricted.rss == 0.0) {
        out.f = std::numeric_limits<double>::infinity();
        return out;
    }
    out.f = (gain / out.df1) / (unrestricted.rss / out.df2);
    return out;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::invalid_argument, "incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::invalid_argument, "incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The continued fraction converges fastest below the mean; use symmetry otherwise.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_pvalue(double f, double df1, double df2) {
    if (!(df1 >= 1.0) || !(df2 >= 1.0)) throw Error(ErrorKind::invalid_argument, "F degrees of freedom must be >= 1");
    if (f == std::numeric_limits<double>::infinity()) return 0.0;
    if (!std::isfinite(f) || f < 0.0) throw Error(ErrorKind::invalid_argument, "F statistic must be finite and >= 0");
    if (f == 0.0) return 1.0;
    // P(F > f) = I_{df2 / (df2 + df1 f)}(df2/2, df1/2); pick the form that
    // keeps the argument away from 1 to avoid cancellation.
    const double denom = df2 + df1 * f;
    const double x = df2 / denom;
    if (x > 0.5) return 1.0 - incomplete_beta(df1 / 2.0, df2 / 2.0, df1 * f / denom);
    return incomplete_beta(df2 / 2.0, df1 / 2.0, x);
}

GrangerResult granger_test(std::span<const double> x, std::span<const double> y, int max_lag, long horizon) {
    if (max_lag < 1) throw Error(ErrorKind::invalid_argument, "max lag must be >= 1");
    if (horizon < 0) throw Error(ErrorKind::invalid_argument, "horizon must be >= 0");
    if (x.size() != y.size()) throw Error(ErrorKind::invalid_argument, "indicator and admissions are not aligned");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error(ErrorKind::invalid_argument, "non-finite input");
    }

    const auto m = static_cast<std::size_t>(max_lag);
    const auto h = static_cast<std::size_t>(horizon);
    // Response z_t = y_{t+h}; rows t = m .. len-1 where len drops the h unmatched tail days.
    const std::size_t len = x.size() > h ? x.size() - h : 0;
    const std::size_t n = len > m ? len - m : 0;
    if (n <= 2 * m + 1) {
        throw Error(ErrorKind::insufficient, "insufficient observations: " + std::to_string(n) + " rows for lag " +
                                                 std::to_string(m));
    }

    std::vector<double> response(n);
    std::vector<std::vector<double>> own(m, std::vector<double>(n));
    std::vector<std::vector<double>> cross(m, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t t = r + m;
        response[r] = y[t + h];
        for (std::size_t j = 1; j <= m; ++j) {
            own[j - 1][r] = y[t - j + h];
            cross[j - 1][r] = x[t - j];
        }
    }

    const OlsFit restricted = ols_fit(response, own);

    auto all = own;
    all.insert(all.end(), cross.begin(), cross.end());
    const auto design = design_with_intercept(n, all);
    const auto ls = linalg::least_squares(design, response, linalg::AliasPolicy::drop);
    for (std::size_t c = 0; c <= m; ++c) {
        if (!ls.kept[c]) throw Error(ErrorKind::degenerate, "collinear design");
    }
    if (ls.rank <= restricted.p) throw Error(ErrorKind::degenerate, "collinear design");
    const OlsFit unrestricted = to_fit(ls, n);

    const auto fs = f_statistic(restricted, unrestricted);
    GrangerResult out;
    out.f = fs.f;
    out.df1 = fs.df1;
    out.df2 = fs.df2;
    out.clamped = fs.clamped;
    out.p = f_pvalue(fs.f, fs.df1, fs.df2);
    out.max_lag = max_lag;
    out.horizon = horizon;
    out.n = n;
    out.aliased_lags = (1 + 2 * m) - ls.rank;
    return out;
}

GrangerResult granger_test(const TimeSeries& x, const TimeSeries& y, int max_lag, long horizon) {
    if (x.start() != y.start() || x.size() != y.size()) {
        throw Error(ErrorKind::invalid_argument, "indicator and admissions are not aligned");
    }
    if (!x.complete() || !y.complete()) throw Error(ErrorKind::invalid_argument, "granger_test requires complete series");
    return granger_test(x.values(), y.values(), max_lag, horizon);
}

} // namespace leadlag::granger

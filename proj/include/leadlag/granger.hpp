#pragma once

#include "leadlag/timeseries.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace leadlag::granger {

struct OlsFit {
    std::vector<double> coefficients; // intercept first, then one per regressor
    double rss = 0.0;
    std::size_t n = 0;
    std::size_t p = 0; // effective parameter count, intercept included
};

/// Least squares of `response` on an intercept plus `regressors`.
/// Throws Error(degenerate, "collinear design") on a rank-deficient design.
[[nodiscard]] OlsFit ols_fit(std::span<const double> response, const std::vector<std::vector<double>>& regressors);

struct FStatistic {
    double f = 0.0;
    double df1 = 0.0;
    double df2 = 0.0;
    bool clamped = false; // negative numerator from rounding was set to 0
};

/// Nested-model F statistic. An exact unrestricted fit yields f = +inf.
[[nodiscard]] FStatistic f_statistic(const OlsFit& restricted, const OlsFit& unrestricted);

/// Regularized incomplete beta I_x(a, b).
[[nodiscard]] double incomplete_beta(double a, double b, double x);

/// Upper-tail probability P(F(df1, df2) > f). f = +inf gives 0.
[[nodiscard]] double f_pvalue(double f, double df1, double df2);

struct GrangerResult {
    double f = 0.0;
    double p = 1.0;
    double df1 = 0.0;
    double df2 = 0.0;
    int max_lag = 0;
    long horizon = 0;
    std::size_t n = 0;             // rows in the lagged regression
    std::size_t aliased_lags = 0;  // indicator lags dropped as exact duplicates of admissions lags
    bool clamped = false;
};

/// Does x (indicator) help predict y (admissions) `horizon` days ahead?
/// The response is y shifted forward by `horizon`; the restricted model uses
/// its own lags 1..max_lag, the unrestricted model adds x lags 1..max_lag.
/// Indicator lags that exactly duplicate response lags are dropped; if none
/// remain the design is reported as collinear.
[[nodiscard]] GrangerResult granger_test(std::span<const double> x, std::span<const double> y, int max_lag = 3,
                                         long horizon = 0);
[[nodiscard]] GrangerResult granger_test(const TimeSeries& x, const TimeSeries& y, int max_lag = 3, long horizon = 0);

} // namespace leadlag::granger

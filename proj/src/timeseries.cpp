#include "leadlag/timeseries.hpp"
#include "leadlag/error.hpp"
#include "leadlag/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace leadlag {

TimeSeries::TimeSeries(Date start, std::vector<double> values)
    : TimeSeries(start, std::move(values), std::vector<bool>{}) {}

TimeSeries::TimeSeries(Date start, std::vector<double> values, std::vector<bool> missing)
    : start_(start), values_(std::move(values)), missing_(std::move(missing)) {
    if (values_.empty()) throw Error(ErrorKind::invalid_argument, "time series must hold at least one day");
    if (missing_.empty()) missing_.assign(values_.size(), false);
    if (missing_.size() != values_.size()) {
        throw Error(ErrorKind::invalid_argument, "missing mask length does not match values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (missing_[i]) {
            values_[i] = 0.0;
        } else if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::invalid_argument, "non-finite value on " + date_at(i).iso());
        }
    }
}

std::size_t TimeSeries::missing_count() const {
    return static_cast<std::size_t>(std::count(missing_.begin(), missing_.end(), true));
}

std::string to_string(GeoLevel level) { return level == GeoLevel::ltla ? "ltla" : "trust"; }

Panel::Panel(GeoLevel level, Date start, std::size_t length) : level_(level), start_(start), length_(length) {
    if (length == 0) throw Error(ErrorKind::invalid_argument, "panel length must be positive");
}

void Panel::insert(const std::string& variable, const std::string& geo, TimeSeries series) {
    if (contains(variable, geo)) {
        throw Error(ErrorKind::input, "duplicate series for variable '" + variable + "', geo '" + geo + "'");
    }
    insert_or_replace(variable, geo, std::move(series));
}

void Panel::insert_or_replace(const std::string& variable, const std::string& geo, TimeSeries series) {
    if (series.start() != start_ || series.size() != length_) {
        throw Error(ErrorKind::invalid_argument, "series for '" + variable + "/" + geo + "' is not aligned to panel " +
                                                     start_.iso() + " +" + std::to_string(length_) + " days");
    }
    auto& geos = data_[variable];
    geos.insert_or_assign(geo, std::move(series));
}

void Panel::erase_geo(const std::string& geo) {
    for (auto& [_, geos] : data_) geos.erase(geo);
}

std::vector<std::string> Panel::variables() const {
    std::vector<std::string> out;
    out.reserve(data_.size());
    for (const auto& [v, _] : data_) out.push_back(v);
    return out;
}

std::vector<std::string> Panel::geos(const std::string& variable) const {
    std::vector<std::string> out;
    for (const auto& [g, _] : series(variable)) out.push_back(g);
    return out;
}

bool Panel::contains(const std::string& variable, const std::string& geo) const {
    auto it = data_.find(variable);
    return it != data_.end() && it->second.contains(geo);
}

const TimeSeries& Panel::at(const std::string& variable, const std::string& geo) const {
    const auto& geos = series(variable);
    auto it = geos.find(geo);
    if (it == geos.end()) throw Error(ErrorKind::invalid_argument, "no series for '" + variable + "/" + geo + "'");
    return it->second;
}

const Panel::GeoMap& Panel::series(const std::string& variable) const {
    auto it = data_.find(variable);
    if (it == data_.end()) throw Error(ErrorKind::invalid_argument, "unknown variable '" + variable + "'");
    return it->second;
}

TimeSeries locf_impute(const TimeSeries& s) {
    const auto vals = s.values();
    std::size_t first = 0;
    while (first < s.size() && s.missing(first)) ++first;
    if (first == s.size()) throw Error(ErrorKind::insufficient, "empty series");

    std::vector<double> out(vals.begin(), vals.end());
    double last = vals[first];
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (s.missing(i)) {
            out[i] = last;
        } else {
            last = out[i];
        }
    }
    return TimeSeries{s.start(), std::move(out)};
}

TimeSeries shift_series(const TimeSeries& s, long h) {
    const long n = static_cast<long>(s.size());
    if (std::labs(h) >= n) {
        throw Error(ErrorKind::invalid_argument, "shift of " + std::to_string(h) + " days exceeds series length " +
                                                     std::to_string(n));
    }
    std::vector<double> out(s.size(), 0.0);
    std::vector<bool> miss(s.size(), true);
    for (long t = 0; t < n; ++t) {
        const long src = t + h;
        if (src < 0 || src >= n) continue;
        const auto si = static_cast<std::size_t>(src);
        out[static_cast<std::size_t>(t)] = s[si];
        miss[static_cast<std::size_t>(t)] = s.missing(si);
    }
    return TimeSeries{s.start(), std::move(out), std::move(miss)};
}

TimeSeries slice_window(const TimeSeries& s, Date first, Date last) {
    if (last < first) throw Error(ErrorKind::invalid_argument, "slice end precedes start");
    const Date lo = std::max(first, s.start());
    const Date hi = std::min(last, s.end());
    if (hi < lo) throw Error(ErrorKind::insufficient, "empty slice");
    const auto off = static_cast<std::size_t>(lo - s.start());
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    const auto vals = s.values();
    std::vector<double> out(vals.begin() + static_cast<std::ptrdiff_t>(off),
                            vals.begin() + static_cast<std::ptrdiff_t>(off + len));
    std::vector<bool> miss(len);
    for (std::size_t i = 0; i < len; ++i) miss[i] = s.missing(off + i);
    return TimeSeries{lo, std::move(out), std::move(miss)};
}

bool is_constant(std::span<const double> values) {
    if (values.empty()) return true;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double scale = std::max({1.0, std::fabs(*lo), std::fabs(*hi)});
    return (*hi - *lo) <= 1e-12 * scale;
}

namespace {

void require_complete(const TimeSeries& s, const char* op) {
    if (!s.complete()) throw Error(ErrorKind::invalid_argument, std::string(op) + " requires a complete series");
}

} // namespace

Scaled minmax_scale(const TimeSeries& s) {
    require_complete(s, "minmax_scale");
    const auto vals = s.values();
    if (is_constant(vals)) return {TimeSeries{s.start(), std::vector<double>(s.size(), 0.0)}, true};
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    const double min = *lo, range = *hi - *lo;
    std::vector<double> out(vals.size());
    std::transform(vals.begin(), vals.end(), out.begin(), [&](double v) { return (v - min) / range; });
    return {TimeSeries{s.start(), std::move(out)}, false};
}

Scaled zscore_scale(const TimeSeries& s) {
    require_complete(s, "zscore_scale");
    if (s.size() < 2) throw Error(ErrorKind::insufficient, "zscore_scale requires at least two values");
    const auto vals = s.values();
    if (is_constant(vals)) return {TimeSeries{s.start(), std::vector<double>(s.size(), 0.0)}, true};
    const double n = static_cast<double>(vals.size());
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    std::vector<double> out(vals.size());
    std::transform(vals.begin(), vals.end(), out.begin(), [&](double v) { return (v - mean) / sd; });
    return {TimeSeries{s.start(), std::move(out)}, false};
}

std::vector<double> loess(std::span<const double> values, const LoessOptions& opts) {
    const std::size_t n = values.size();
    if (opts.degree != 1 && opts.degree != 2) throw Error(ErrorKind::invalid_argument, "loess degree must be 1 or 2");
    if (!(opts.span > 0.0 && opts.span <= 1.0)) throw Error(ErrorKind::invalid_argument, "loess span must be in (0, 1]");
    const auto q = static_cast<std::size_t>(std::floor(opts.span * static_cast<double>(n)));
    const auto min_q = static_cast<std::size_t>(opts.degree + 2);
    if (q < min_q) {
        throw Error(ErrorKind::insufficient, "loess window of " + std::to_string(q) + " points is too small for degree " +
                                                 std::to_string(opts.degree));
    }
    const std::size_t ncoef = static_cast<std::size_t>(opts.degree) + 1;

    std::vector<double> out(n);
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        // On a unit grid the q nearest neighbours form a contiguous window.
        std::size_t lo = i, hi = i; // inclusive
        while (hi - lo + 1 < q) {
            if (lo == 0) {
                ++hi;
            } else if (hi == n - 1) {
                --lo;
            } else if (i - (lo - 1) <= (hi + 1) - i) {
                --lo;
            } else {
                ++hi;
            }
        }
        const double reach = static_cast<double>(std::max(i - lo, hi - i));
        // Points at exactly `reach` get zero weight, so widen by half a day to
        // keep all q neighbours in play.
        const double bandwidth = reach + 0.5;

        linalg::Matrix x(hi - lo + 1, ncoef);
        std::vector<double> y(hi - lo + 1);
        for (std::size_t k = lo; k <= hi; ++k) {
            const double u = (static_cast<double>(k) - static_cast<double>(i)) / bandwidth;
            const double a = std::fabs(u);
            const double w = std::pow(1.0 - a * a * a, 3);
            const double sw = std::sqrt(w);
            const std::size_t r = k - lo;
            x(r, 0) = sw;
            x(r, 1) = sw * u;
            if (ncoef == 3) x(r, 2) = sw * u * u;
            y[r] = sw * values[k];
        }
        const auto fit = linalg::least_squares(x, y, linalg::AliasPolicy::reject);
        out[i] = fit.coefficients[0];
    }
    return out;
}

TimeSeries loess_smooth(const TimeSeries& s, const LoessOptions& opts) {
    require_complete(s, "loess_smooth");
    return TimeSeries{s.start(), loess(s.values(), opts)};
}

} // namespace leadlag

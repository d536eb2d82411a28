#pragma once

#include "leadlag/date.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace leadlag {

/// Daily series over consecutive calendar days. Gaps are represented by the
/// missing mask, never by skipped dates. Values at missing positions are
/// unspecified (stored as 0).
class TimeSeries {
public:
    TimeSeries(Date start, std::vector<double> values);
    TimeSeries(Date start, std::vector<double> values, std::vector<bool> missing);

    [[nodiscard]] Date start() const { return start_; }
    [[nodiscard]] Date end() const { return start_ + static_cast<long>(values_.size()) - 1; }
    [[nodiscard]] Date date_at(std::size_t i) const { return start_ + static_cast<long>(i); }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] bool missing(std::size_t i) const { return missing_[i]; }
    [[nodiscard]] const std::vector<bool>& missing_mask() const { return missing_; }
    [[nodiscard]] std::size_t missing_count() const;
    [[nodiscard]] bool complete() const { return missing_count() == 0; }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    Date start_;
    std::vector<double> values_;
    std::vector<bool> missing_;
};

enum class GeoLevel { ltla, trust };

[[nodiscard]] std::string to_string(GeoLevel level);

/// Collection of aligned series keyed by (variable, geo id). Every member
/// shares the panel's start date and length.
class Panel {
public:
    using GeoMap = std::map<std::string, TimeSeries>;

    Panel(GeoLevel level, Date start, std::size_t length);

    [[nodiscard]] GeoLevel level() const { return level_; }
    [[nodiscard]] Date start() const { return start_; }
    [[nodiscard]] Date end() const { return start_ + static_cast<long>(length_) - 1; }
    [[nodiscard]] std::size_t length() const { return length_; }

    /// Throws if the series is misaligned or (variable, geo) already exists.
    void insert(const std::string& variable, const std::string& geo, TimeSeries series);
    void insert_or_replace(const std::string& variable, const std::string& geo, TimeSeries series);
    void erase_geo(const std::string& geo);

    [[nodiscard]] std::vector<std::string> variables() const;
    [[nodiscard]] std::vector<std::string> geos(const std::string& variable) const;
    [[nodiscard]] bool contains(const std::string& variable, const std::string& geo) const;
    [[nodiscard]] const TimeSeries& at(const std::string& variable, const std::string& geo) const;
    [[nodiscard]] const GeoMap& series(const std::string& variable) const;

    friend bool operator==(const Panel&, const Panel&) = default;

private:
    GeoLevel level_;
    Date start_;
    std::size_t length_;
    std::map<std::string, GeoMap> data_;
};

// Transforms. All are pure; inputs are never modified.

/// Last observation carried forward; leading gaps take the first observation.
[[nodiscard]] TimeSeries locf_impute(const TimeSeries& s);

/// Output position t holds s[t + h]. Positions with no source are missing.
[[nodiscard]] TimeSeries shift_series(const TimeSeries& s, long h);

/// Intersection of [first, last] with the series range.
[[nodiscard]] TimeSeries slice_window(const TimeSeries& s, Date first, Date last);

struct Scaled {
    TimeSeries series;
    bool degenerate = false;
};

/// (v - min) / (max - min). Constant input maps to zeros and is flagged.
[[nodiscard]] Scaled minmax_scale(const TimeSeries& s);

/// (v - mean) / sd with the sample (n - 1) standard deviation.
[[nodiscard]] Scaled zscore_scale(const TimeSeries& s);

struct LoessOptions {
    double span = 0.15;
    int degree = 2;
};

/// Local polynomial regression with tricube weights over the
/// floor(span * n) nearest neighbours of each point.
[[nodiscard]] std::vector<double> loess(std::span<const double> values, const LoessOptions& opts);
[[nodiscard]] TimeSeries loess_smooth(const TimeSeries& s, const LoessOptions& opts);

/// True when every value is within a relative 1e-12 of the others.
[[nodiscard]] bool is_constant(std::span<const double> values);

} // namespace leadlag

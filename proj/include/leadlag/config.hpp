#pragma once

#include "leadlag/date.hpp"
#include "leadlag/timeseries.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace leadlag {

struct WaveSpec {
    std::string name;
    Date start;
    Date end; // inclusive
};

/// Reporting latency of an indicator source.
struct Latency {
    int lag_days = 0;     // reporting/completeness lag
    int cadence_days = 1; // release cadence: 1 = daily, 7 = weekly
};

enum class Method { granger, granger_horizon, ccf, dtw };

struct RunConfig {
    std::vector<WaveSpec> waves;
    int horizon_days = 14;
    int granger_max_lag = 3;
    int ccf_window = 30;
    int dtw_window = 35;
    int dtw_warmup_days = 0; // days before each wave aligned by DTW but left out of lead summaries
    LoessOptions loess;
    std::set<std::string> exclude_trusts;
    double min_annual_admissions = 10.0;
    Date admissions_window_start{2022, 1, 1};
    Date admissions_window_end{2022, 12, 31};
    GeoLevel indicator_level = GeoLevel::ltla;
    std::map<std::string, GeoLevel> indicator_levels;          // per-variable override
    std::map<std::string, std::filesystem::path> mappings;     // per-variable mapping file
    std::map<std::string, Latency> latency;                    // indicator id or id prefix
    std::optional<std::filesystem::path> groups_file;
    std::set<Method> methods{Method::granger, Method::granger_horizon, Method::ccf, Method::dtw};
    int threads = 0;
    bool export_dtw_paths = false;

    /// Throws Error(config) when a value is out of range or waves overlap.
    void validate() const;

    [[nodiscard]] GeoLevel level_of(const std::string& variable) const;
    /// Exact id first, then the longest configured prefix.
    [[nodiscard]] std::optional<Latency> latency_of(const std::string& indicator) const;
};

/// Parses `key = value` lines; `#` starts a comment. Relative paths resolve
/// against `base_dir`.
[[nodiscard]] RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Parses "granger,ccf,dtw" style lists. "granger" enables both horizons.
[[nodiscard]] std::set<Method> parse_methods(std::string_view list);

} // namespace leadlag

#pragma once

#include "leadlag/config.hpp"
#include "leadlag/execution.hpp"
#include "leadlag/geo_mapping.hpp"
#include "leadlag/timeseries.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace leadlag {

[[nodiscard]] std::string method_name(Method m, int horizon_days);

enum class CellStatus {
    ok,
    degenerate, // constant input or collinear design
    no_data,    // indicator absent for this wave or trust
    error,      // any other per-cell failure; see detail
};

[[nodiscard]] std::string to_string(CellStatus s);

/// One (trust, indicator, wave, method) result. Exactly one method's
/// statistic fields are populated, and only when status is ok.
struct ReportRow {
    std::string trust_id;
    std::string indicator;
    std::string wave;
    std::size_t wave_index = 0;
    Method method = Method::granger;
    CellStatus status = CellStatus::ok;
    std::string detail;
    bool truncated = false;
    bool eroded = false;

    // granger / granger_horizon
    int horizon = 0;
    int max_lag = 0;
    std::optional<double> f_stat, p_value, df1, df2;
    // ccf
    std::optional<int> optimal_lead;
    std::optional<double> ccf_at_optimal, ccf_at_horizon;
    // dtw
    std::optional<double> dtw_median_lead, dtw_normalized_distance;

    std::optional<double> effective_lead;
    std::string provenance;
};

struct EffectiveLead {
    double days = 0.0;
    bool eroded = false;
};

/// statistical lead - reporting lag - (cadence - 1). A result below zero is
/// reported as min(0, statistical lead) with the eroded flag, so the effective
/// lead never exceeds the statistical one.
[[nodiscard]] EffectiveLead effective_lead(double statistical_lead, const Latency& latency);

struct TrustRemoval {
    std::string trust_id;
    std::string reason;
    double admissions_in_window = 0.0;
};

struct FilterResult {
    Panel panel;
    std::vector<TrustRemoval> removed;
};

/// Drops excluded trusts and those with fewer than `min_annual_admissions`
/// admissions inside the configured window.
[[nodiscard]] FilterResult filter_trusts(const Panel& admissions, const RunConfig& config);

/// Alignment across all trusts at once, one per (indicator, wave).
struct MultivariateDtw {
    std::string indicator;
    std::string wave;
    std::size_t trusts = 0;
    CellStatus status = CellStatus::ok;
    std::string detail;
    std::optional<double> normalized_distance;
    std::optional<double> median_lead;
};

struct Coverage {
    std::vector<TrustRemoval> removed_trusts;
    std::vector<std::string> zero_record_ltlas;
    std::map<std::string, std::vector<std::string>> absent_ltlas; // per indicator
    std::map<std::string, std::vector<std::string>> truncated_waves; // per indicator
};

/// One step of a per-cell DTW alignment path, in calendar terms.
struct DtwPathPoint {
    std::string trust_id;
    std::string indicator;
    std::string wave;
    Date query_date;
    Date ref_date;
    long lead_days = 0;
};

struct AnalysisResult {
    std::vector<ReportRow> rows; // sorted by (trust, indicator, wave, method)
    std::vector<DtwPathPoint> dtw_paths; // only when config.export_dtw_paths
    std::vector<MultivariateDtw> multivariate;
    Coverage coverage;
    std::map<std::string, double> trust_population;
};

/// Runs every enabled method over every wave x trust x indicator cell.
/// `indicators` are trust-level panels keyed by indicator id. Per-cell
/// failures become rows; nothing is dropped.
[[nodiscard]] AnalysisResult run_analysis(const RunConfig& config, const Panel& admissions,
                                          const std::map<std::string, Panel>& indicators,
                                          Execution exec = Execution::parallel);

struct PipelineInputs {
    RunConfig config;
    Panel admissions;                                  // trust level, unfiltered
    std::map<std::string, Panel> indicators;           // raw, at their configured level
    geo::GeoMapping mapping;
    std::map<std::string, geo::GeoMapping> indicator_mappings;
    std::optional<geo::PopulationTable> population;
};

/// Filters trusts, maps LTLA indicators to trusts and runs the analysis.
[[nodiscard]] AnalysisResult run_pipeline(const PipelineInputs& inputs, Execution exec = Execution::parallel);

} // namespace leadlag

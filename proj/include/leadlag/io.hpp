#pragma once

#include "leadlag/geo_mapping.hpp"
#include "leadlag/pipeline.hpp"
#include "leadlag/timeseries.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace leadlag::io {

// Readers take a source name for error messages ("<file>:<line>: ...").

/// `trust_id,date,admissions`. Returns a trust panel with variable
/// "admissions" over the full date range, LOCF-imputed.
[[nodiscard]] Panel read_admissions(std::istream& in, const std::string& source);
[[nodiscard]] Panel ingest_admissions(const std::filesystem::path& path);

/// `geo_id,date,variable,value`. One panel per variable, each over that
/// variable's own observed date range, LOCF-imputed.
[[nodiscard]] std::map<std::string, Panel> read_indicator(std::istream& in, const std::string& source, GeoLevel level);
[[nodiscard]] std::map<std::string, Panel> ingest_indicator(const std::filesystem::path& path, GeoLevel level);

/// Every *.csv in `dir`, in file-name order. Levels come from the config.
[[nodiscard]] std::map<std::string, Panel> ingest_indicator_dir(const std::filesystem::path& dir, const RunConfig& config);

/// `ltla_id,trust_id,admissions`
[[nodiscard]] std::vector<geo::AdmissionCount> read_mapping_counts(std::istream& in, const std::string& source);
[[nodiscard]] geo::GeoMapping load_mapping(const std::filesystem::path& path);

/// `ltla_id,population`
[[nodiscard]] geo::PopulationTable read_population(std::istream& in, const std::string& source);
[[nodiscard]] geo::PopulationTable load_population(const std::filesystem::path& path);

/// `group,member_variable`
[[nodiscard]] std::map<std::string, std::vector<std::string>> read_groups(std::istream& in, const std::string& source);

/// Replaces member variables by their group sums over the common date range.
[[nodiscard]] std::map<std::string, Panel> apply_groups(const std::map<std::string, Panel>& panels,
                                                       const std::map<std::string, std::vector<std::string>>& groups);

enum class ReportFormat { csv, json };

/// Writes granger/ccf/dtw tables and summary.json into `dir`.
void emit_reports(const AnalysisResult& result, const RunConfig& config, const std::filesystem::path& dir,
                  ReportFormat format = ReportFormat::csv);

} // namespace leadlag::io

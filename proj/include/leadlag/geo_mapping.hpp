#pragma once

#include "leadlag/execution.hpp"
#include "leadlag/timeseries.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace leadlag::geo {

struct AdmissionCount {
    std::string ltla_id;
    std::string trust_id;
    double admissions = 0.0;
};

/// Share of each LTLA's admitted patients attending each Trust.
class GeoMapping {
public:
    GeoMapping(std::vector<std::string> ltlas, std::vector<std::string> trusts, std::vector<double> weights,
               std::vector<bool> zero_rows);

    [[nodiscard]] const std::vector<std::string>& ltlas() const { return ltlas_; }
    [[nodiscard]] const std::vector<std::string>& trusts() const { return trusts_; }

    [[nodiscard]] double weight(std::size_t ltla, std::size_t trust) const { return weights_[ltla * trusts_.size() + trust]; }
    [[nodiscard]] double weight(const std::string& ltla, const std::string& trust) const;

    /// LTLAs with no admission records; their rows are all zero.
    [[nodiscard]] bool zero_row(std::size_t ltla) const { return zero_rows_[ltla]; }
    [[nodiscard]] std::vector<std::string> flagged_ltlas() const;

    [[nodiscard]] std::ptrdiff_t ltla_index(const std::string& id) const;
    [[nodiscard]] std::ptrdiff_t trust_index(const std::string& id) const;

private:
    std::vector<std::string> ltlas_;
    std::vector<std::string> trusts_;
    std::vector<double> weights_; // row-major [ltla][trust]
    std::vector<bool> zero_rows_;
    std::map<std::string, std::size_t> ltla_pos_;
    std::map<std::string, std::size_t> trust_pos_;
};

using PopulationTable = std::map<std::string, double>;

/// Row-normalises the (LTLA, Trust) count table.
[[nodiscard]] GeoMapping build_mapping(const std::vector<AdmissionCount>& records);

struct MappedPanel {
    Panel panel;
    /// Mapping LTLAs that had no series in the input, per variable.
    std::map<std::string, std::vector<std::string>> absent_ltlas;
};

/// Weighted sum of LTLA series into Trust series. Every input series must be
/// complete; LTLAs absent from the panel contribute zero and are reported.
[[nodiscard]] MappedPanel apply_mapping(const Panel& ltla_panel, const GeoMapping& mapping,
                                        Execution exec = Execution::parallel);

[[nodiscard]] std::map<std::string, double> weighted_population(const GeoMapping& mapping, const PopulationTable& pop);

} // namespace leadlag::geo

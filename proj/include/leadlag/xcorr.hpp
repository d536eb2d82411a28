#pragma once

#include "leadlag/timeseries.hpp"

#include <optional>
#include <span>
#include <vector>

namespace leadlag::xcorr {

// Lead convention: a positive lead L means the indicator precedes admissions,
// i.e. the value at lead L is corr(x_t, y_{t+L}). Internally the delay d of
// the textbook R_xy(d) = sum (x_t - m_x)(y_{t-d} - m_y) / (|x - m_x| |y - m_y|)
// is d = -L.

/// Cross correlation at a single lead. Means and norms use the full series;
/// the numerator runs over the overlapping days only.
[[nodiscard]] double ccf_at_lead(std::span<const double> x, std::span<const double> y, int lead);

/// Same quantity addressed by the textbook delay d (= -lead).
[[nodiscard]] double ccf_at_delay(std::span<const double> x, std::span<const double> y, int delay);

struct CcfProfile {
    int window = 30;
    std::vector<double> values; // values[k] is the correlation at lead k - window

    [[nodiscard]] double at_lead(int lead) const { return values[static_cast<std::size_t>(lead + window)]; }
    [[nodiscard]] int min_lead() const { return -window; }
    [[nodiscard]] int max_lead() const { return window; }
};

[[nodiscard]] CcfProfile ccf_profile(std::span<const double> x, std::span<const double> y, int window = 30);
[[nodiscard]] CcfProfile ccf_profile(const TimeSeries& x, const TimeSeries& y, int window = 30);

struct OptimalLead {
    int lead = 0;
    double value = 0.0;
};

/// Lead with the largest non-negative correlation. Ties go to the smaller
/// |lead|, then to the positive lead. Empty when every value is negative.
[[nodiscard]] std::optional<OptimalLead> optimal_lead(const CcfProfile& profile);

[[nodiscard]] double ccf_at_horizon(std::span<const double> x, std::span<const double> y, int horizon = 14);

} // namespace leadlag::xcorr

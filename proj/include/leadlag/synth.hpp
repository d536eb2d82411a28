#pragma once

#include "leadlag/timeseries.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace leadlag::synth {

enum class WaveShape {
    gamma,    // fast rise, slow decline; peak value = amplitude at peak_day
    gaussian, // symmetric bump
};

struct WaveComponent {
    double peak_day = 60.0;
    double width = 20.0; // gamma: rise duration in days; gaussian: standard deviation
    double amplitude = 100.0;
    WaveShape shape = WaveShape::gamma;
    double sharpness = 4.0; // gamma exponent
};

struct TrustShape {
    std::string trust_id;
    std::vector<WaveComponent> waves;
    double baseline = 0.0;
};

struct IndicatorSpec {
    std::string id;
    int lead = 0;               // days the indicator runs ahead of admissions
    double noise_sd = 0.0;
    double final_usership = 1.0; // multiplicative decay reached on the last day (1 = none)
};

struct SynthSpec {
    Date start{2021, 10, 1};
    std::size_t days = 333;
    std::vector<TrustShape> trusts;
    std::vector<IndicatorSpec> indicators;
    std::uint64_t seed = 1;
};

/// Deterministic wave value at (fractional) day t.
[[nodiscard]] double wave_value(const TrustShape& shape, double t);

/// Trust-level admissions panel, variable "admissions".
[[nodiscard]] Panel generate_admissions(const SynthSpec& spec);

/// indicator(t) = decay(t) * admissions(t + lead) + N(0, noise_sd). Reads past
/// either end of the admissions series clamp to the edge value. Every series
/// of `admissions` becomes a series of the same geo in variable `id`.
[[nodiscard]] Panel derive_indicator(const Panel& admissions, const std::string& id, int lead, double noise_sd,
                                     double final_usership, std::uint64_t seed);

/// One panel holding every indicator listed in `spec`, each with its own seed stream.
[[nodiscard]] Panel derive_indicators(const SynthSpec& spec, const Panel& admissions);

[[nodiscard]] std::vector<int> ground_truth(const SynthSpec& spec);

/// Spec with `trusts` trusts whose waves are jittered around three Omicron-like
/// peaks and `indicators` indicators with leads cycling through 5, 10, 15, 20.
[[nodiscard]] SynthSpec default_corpus_spec(std::size_t trusts, std::size_t indicators, std::size_t days,
                                            std::uint64_t seed);

struct CorpusOptions {
    std::size_t ltlas_per_trust = 3;
    double secondary_share = 0.2; // share of each LTLA's patients sent to the next Trust
};

/// Writes a complete CLI input set under `dir`: admissions.csv, mapping.csv,
/// population.csv, indicators/<id>.csv (LTLA level) and config.txt.
void write_corpus(const SynthSpec& spec, const std::filesystem::path& dir, const CorpusOptions& opts = {});

} // namespace leadlag::synth

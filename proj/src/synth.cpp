#include "leadlag/synth.hpp"
#include "leadlag/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace leadlag::synth {

namespace {

// FNV-1a, stable across platforms, used to give each geo its own noise stream.
std::uint64_t stable_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64{seq};
}

double component_value(const WaveComponent& c, double t) {
    if (c.shape == WaveShape::gaussian) {
        const double z = (t - c.peak_day) / c.width;
        return c.amplitude * std::exp(-0.5 * z * z);
    }
    const double u = 1.0 + (t - c.peak_day) / c.width;
    if (u <= 0.0) return 0.0;
    return c.amplitude * std::pow(u * std::exp(1.0 - u), c.sharpness);
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
    return out;
}

} // namespace

double wave_value(const TrustShape& shape, double t) {
    double v = shape.baseline;
    for (const auto& c : shape.waves) v += component_value(c, t);
    return v;
}

Panel generate_admissions(const SynthSpec& spec) {
    if (spec.days == 0) throw Error(ErrorKind::invalid_argument, "synthetic spec needs at least one day");
    Panel p{GeoLevel::trust, spec.start, spec.days};
    for (const auto& trust : spec.trusts) {
        std::vector<double> v(spec.days);
        for (std::size_t t = 0; t < spec.days; ++t) v[t] = std::max(0.0, wave_value(trust, static_cast<double>(t)));
        p.insert("admissions", trust.trust_id, TimeSeries{spec.start, std::move(v)});
    }
    return p;
}

Panel derive_indicator(const Panel& admissions, const std::string& id, int lead, double noise_sd,
                       double final_usership, std::uint64_t seed) {
    const auto n = static_cast<long>(admissions.length());
    if (std::labs(lead) >= n) throw Error(ErrorKind::invalid_argument, "injected lead must be shorter than the series");
    if (!(noise_sd >= 0.0)) throw Error(ErrorKind::invalid_argument, "noise sd must be >= 0");
    if (!(final_usership > 0.0)) throw Error(ErrorKind::invalid_argument, "final usership must be positive");

    Panel out{admissions.level(), admissions.start(), admissions.length()};
    for (const auto& var : admissions.variables()) {
        for (const auto& [geo, s] : admissions.series(var)) {
            auto rng = make_rng(seed, stable_hash(id + "/" + geo));
            std::normal_distribution<double> noise(0.0, 1.0);
            std::vector<double> v(static_cast<std::size_t>(n));
            for (long t = 0; t < n; ++t) {
                const long src = std::clamp(t + lead, 0L, n - 1);
                double value = s[static_cast<std::size_t>(src)];
                if (final_usership != 1.0) {
                    value *= std::pow(final_usership, n > 1 ? static_cast<double>(t) / static_cast<double>(n - 1) : 0.0);
                }
                if (noise_sd > 0.0) value += noise_sd * noise(rng);
                v[static_cast<std::size_t>(t)] = value;
            }
            out.insert(id, geo, TimeSeries{admissions.start(), std::move(v)});
        }
    }
    return out;
}

Panel derive_indicators(const SynthSpec& spec, const Panel& admissions) {
    Panel out{admissions.level(), admissions.start(), admissions.length()};
    for (std::size_t k = 0; k < spec.indicators.size(); ++k) {
        const auto& ind = spec.indicators[k];
        const auto one = derive_indicator(admissions, ind.id, ind.lead, ind.noise_sd, ind.final_usership, spec.seed + k);
        for (const auto& [geo, s] : one.series(ind.id)) out.insert(ind.id, geo, s);
    }
    return out;
}

std::vector<int> ground_truth(const SynthSpec& spec) {
    std::vector<int> leads;
    leads.reserve(spec.indicators.size());
    for (const auto& ind : spec.indicators) leads.push_back(ind.lead);
    return leads;
}

SynthSpec default_corpus_spec(std::size_t trusts, std::size_t indicators, std::size_t days, std::uint64_t seed) {
    SynthSpec spec;
    spec.days = days;
    spec.seed = seed;
    auto rng = make_rng(seed, 0);
    std::uniform_real_distribution<double> jitter(-6.0, 6.0);
    std::uniform_real_distribution<double> amp(5.0, 60.0);
    std::uniform_real_distribution<double> base(1.0, 6.0);
    // Peaks roughly at early January, late March and mid July for a 1 October start.
    constexpr double peaks[] = {95.0, 178.0, 285.0};
    constexpr double widths[] = {22.0, 25.0, 28.0};
    for (std::size_t t = 0; t < trusts; ++t) {
        TrustShape shape;
        shape.trust_id = fmt::format("T{:03}", t + 1);
        shape.baseline = base(rng);
        for (std::size_t w = 0; w < 3; ++w) {
            shape.waves.push_back(WaveComponent{peaks[w] + jitter(rng), widths[w], amp(rng), WaveShape::gamma, 4.0});
        }
        spec.trusts.push_back(std::move(shape));
    }
    constexpr int leads[] = {5, 10, 15, 20};
    for (std::size_t k = 0; k < indicators; ++k) {
        IndicatorSpec ind;
        ind.id = fmt::format("ind{:02}", k + 1);
        ind.lead = leads[k % 4];
        ind.noise_sd = 0.5;
        ind.final_usership = k % 5 == 4 ? 0.5 : 1.0;
        spec.indicators.push_back(ind);
    }
    return spec;
}

void write_corpus(const SynthSpec& spec, const std::filesystem::path& dir, const CorpusOptions& opts) {
    if (opts.ltlas_per_trust == 0) throw Error(ErrorKind::invalid_argument, "need at least one LTLA per trust");
    std::filesystem::create_directories(dir / "indicators");

    const Panel adm = generate_admissions(spec);
    const Panel ind = derive_indicators(spec, adm);
    const auto& trusts = spec.trusts;

    {
        auto out = open_out(dir / "admissions.csv");
        out << "trust_id,date,admissions\n";
        for (const auto& [geo, s] : adm.series("admissions")) {
            for (std::size_t t = 0; t < s.size(); ++t) out << geo << ',' << s.date_at(t).iso() << ',' << std::llround(s[t]) << '\n';
        }
    }

    auto ltla_name = [](std::size_t trust, std::size_t k) {
        return fmt::format("E{:05}", trust * 100 + k + 1);
    };
    {
        auto map = open_out(dir / "mapping.csv");
        auto pop = open_out(dir / "population.csv");
        map << "ltla_id,trust_id,admissions\n";
        pop << "ltla_id,population\n";
        const auto own = static_cast<long>(std::llround(1000.0 * (1.0 - opts.secondary_share)));
        const auto other = static_cast<long>(std::llround(1000.0 * opts.secondary_share));
        for (std::size_t t = 0; t < trusts.size(); ++t) {
            for (std::size_t k = 0; k < opts.ltlas_per_trust; ++k) {
                const auto l = ltla_name(t, k);
                map << l << ',' << trusts[t].trust_id << ',' << own << '\n';
                if (trusts.size() > 1 && other > 0) {
                    map << l << ',' << trusts[(t + 1) % trusts.size()].trust_id << ',' << other << '\n';
                }
                pop << l << ',' << 50000 + 10000 * ((t + k) % 7) << '\n';
            }
        }
    }

    for (const auto& var : ind.variables()) {
        auto out = open_out(dir / "indicators" / (var + ".csv"));
        out << "geo_id,date,variable,value\n";
        for (std::size_t t = 0; t < trusts.size(); ++t) {
            const auto& s = ind.at(var, trusts[t].trust_id);
            for (std::size_t k = 0; k < opts.ltlas_per_trust; ++k) {
                const auto l = ltla_name(t, k);
                for (std::size_t d = 0; d < s.size(); ++d) {
                    out << l << ',' << s.date_at(d).iso() << ',' << var << ',' << fmt::format("{:.6f}", s[d]) << '\n';
                }
            }
        }
    }

    auto cfg = open_out(dir / "config.txt");
    const Date first = spec.start;
    const Date last = spec.start + static_cast<long>(spec.days) - 1;
    cfg << "# synthetic corpus; wave boundaries are illustrative\n"
        << "horizon_days = 14\n"
        << "granger_max_lag = 3\n"
        << "ccf_window = 30\n"
        << "dtw_window = 35\n"
        << "loess_span = 0.15\n"
        << "loess_degree = 2\n"
        << "min_annual_admissions = 10\n"
        << "admissions_window = " << first.iso() << ',' << last.iso() << '\n';
    // Three equal waves after a 60-day warm-up.
    const long usable = static_cast<long>(spec.days) - 60;
    if (usable >= 3 * 30) {
        const char* names[] = {"BA.1", "BA.2", "BA.4/5"};
        for (int w = 0; w < 3; ++w) {
            const Date ws = first + 60 + w * usable / 3;
            const Date we = w == 2 ? last : first + 60 + (w + 1) * usable / 3 - 1;
            cfg << "wave = " << names[w] << ',' << ws.iso() << ',' << we.iso() << '\n';
        }
    } else {
        cfg << "wave = all," << first.iso() << ',' << last.iso() << '\n';
    }
    cfg << "latency.ind = 2,1\n";
}

} // namespace leadlag::synth

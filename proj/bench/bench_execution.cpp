// Serial reference path vs OpenMP kernels on synthetic data.
#include "leadlag/execution.hpp"
#include "leadlag/geo_mapping.hpp"
#include "leadlag/pipeline.hpp"
#include "leadlag/synth.hpp"

#include <benchmark/benchmark.h>
#include <fmt/format.h>

#include <random>

using namespace leadlag;

namespace {

struct AnalysisFixture {
    RunConfig config;
    Panel admissions;
    std::map<std::string, Panel> indicators;
};

const AnalysisFixture& analysis_fixture() {
    static const AnalysisFixture f = [] {
        const auto spec = synth::default_corpus_spec(24, 4, 333, 11);
        AnalysisFixture out{RunConfig{}, synth::generate_admissions(spec), {}};
        const auto ind = synth::derive_indicators(spec, out.admissions);
        for (const auto& var : ind.variables()) {
            Panel p{GeoLevel::trust, ind.start(), ind.length()};
            for (const auto& [geo, s] : ind.series(var)) p.insert(var, geo, s);
            out.indicators.emplace(var, std::move(p));
        }
        const Date s0 = spec.start + 60;
        out.config.waves = {{"BA.1", s0, s0 + 89}, {"BA.2", s0 + 90, s0 + 179}, {"BA.4/5", s0 + 180, s0 + 272}};
        return out;
    }();
    return f;
}

void BM_RunAnalysis(benchmark::State& state) {
    const auto exec = state.range(0) == 0 ? Execution::serial : Execution::parallel;
    const auto& f = analysis_fixture();
    for (auto _ : state) benchmark::DoNotOptimize(run_analysis(f.config, f.admissions, f.indicators, exec));
    state.SetLabel(exec == Execution::serial ? "serial" : fmt::format("parallel x{}", thread_count()));
}

struct MappingFixture {
    geo::GeoMapping mapping;
    Panel panel;
};

const MappingFixture& mapping_fixture() {
    static const MappingFixture f = [] {
        std::mt19937_64 rng(3);
        std::vector<geo::AdmissionCount> rec;
        for (int l = 0; l < 300; ++l) {
            for (int t = 0; t < 121; ++t) {
                if (rng() % 10 == 0) rec.push_back({fmt::format("E{:04}", l), fmt::format("T{:03}", t), double(rng() % 400)});
            }
            rec.push_back({fmt::format("E{:04}", l), fmt::format("T{:03}", l % 121), 1.0});
        }
        auto m = geo::build_mapping(rec);
        Panel p{GeoLevel::ltla, Date{2021, 10, 1}, 333};
        std::normal_distribution<double> g(50, 10);
        for (const auto& l : m.ltlas()) {
            std::vector<double> v(333);
            for (auto& x : v) x = g(rng);
            p.insert("v", l, TimeSeries{p.start(), std::move(v)});
        }
        return MappingFixture{std::move(m), std::move(p)};
    }();
    return f;
}

void BM_ApplyMapping(benchmark::State& state) {
    const auto exec = state.range(0) == 0 ? Execution::serial : Execution::parallel;
    const auto& f = mapping_fixture();
    for (auto _ : state) benchmark::DoNotOptimize(geo::apply_mapping(f.panel, f.mapping, exec));
    state.SetLabel(exec == Execution::serial ? "serial" : fmt::format("parallel x{}", thread_count()));
}

} // namespace

BENCHMARK(BM_RunAnalysis)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyMapping)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include "leadlag/config.hpp"
#include "leadlag/error.hpp"
#include "leadlag/execution.hpp"
#include "leadlag/io.hpp"
#include "leadlag/pipeline.hpp"
#include "leadlag/synth.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <fstream>

namespace {

using namespace leadlag;

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::invalid_argument: return 2;
    case ErrorKind::config: return 3;
    case ErrorKind::input: return 4;
    case ErrorKind::io: return 5;
    case ErrorKind::degenerate:
    case ErrorKind::insufficient: return 6;
    }
    return 1;
}

void warn(const std::string& msg) { fmt::print(stderr, "warning: {}\n", msg); }

struct RunArgs {
    std::string config, admissions, indicators, mapping, population, out;
    std::string format = "csv";
    std::string methods;
    int threads = -1;
    bool serial = false;
    bool export_paths = false;
};

int run(const RunArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    PipelineInputs in{load_config(a.config), io::ingest_admissions(a.admissions), {}, io::load_mapping(a.mapping), {}, {}};
    auto& cfg = in.config;
    if (!a.methods.empty()) cfg.methods = parse_methods(a.methods);
    if (a.export_paths) cfg.export_dtw_paths = true;
    if (a.threads >= 0) cfg.threads = a.threads;
    set_thread_count(cfg.threads);

    auto indicators = io::ingest_indicator_dir(a.indicators, cfg);
    if (cfg.groups_file) {
        std::ifstream g(*cfg.groups_file, std::ios::binary);
        if (!g) throw Error(ErrorKind::io, "cannot read groups file " + cfg.groups_file->string());
        indicators = io::apply_groups(indicators, io::read_groups(g, cfg.groups_file->string()));
    }
    in.indicators = std::move(indicators);
    for (const auto& [var, path] : cfg.mappings) {
        if (!in.indicators.contains(var)) warn(fmt::format("mapping configured for unknown indicator '{}'", var));
        in.indicator_mappings.emplace(var, io::load_mapping(path));
    }
    if (!a.population.empty()) in.population = io::load_population(a.population);
    fmt::print(stderr, "loaded {} indicators, {} waves\n", in.indicators.size(), cfg.waves.size());

    const auto result = run_pipeline(in, a.serial ? Execution::serial : Execution::parallel);

    for (const auto& r : result.coverage.removed_trusts) {
        warn(fmt::format("trust {} removed: {} ({} admissions in window)", r.trust_id, r.reason, r.admissions_in_window));
    }
    for (const auto& l : result.coverage.zero_record_ltlas) warn(fmt::format("LTLA {} has no admission records", l));
    for (const auto& [ind, waves] : result.coverage.truncated_waves) {
        for (const auto& w : waves) warn(fmt::format("indicator {} does not cover wave {}", ind, w));
    }
    std::size_t failed = 0;
    for (const auto& r : result.rows) failed += r.status != CellStatus::ok;

    io::emit_reports(result, cfg, a.out, a.format == "json" ? io::ReportFormat::json : io::ReportFormat::csv);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print(stderr, "{} rows ({} not ok) written to {} in {:.2f}s\n", result.rows.size(), failed, a.out, secs);
    return 0;
}

struct SynthArgs {
    std::string out;
    std::size_t trusts = 20;
    std::size_t indicators = 4;
    std::size_t days = 333;
    std::uint64_t seed = 1;
};

int run_synth(const SynthArgs& a) {
    const auto spec = synth::default_corpus_spec(a.trusts, a.indicators, a.days, a.seed);
    synth::write_corpus(spec, a.out);
    fmt::print(stderr, "wrote {} trusts x {} indicators x {} days to {}\n", a.trusts, a.indicators, a.days, a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lead-lag analysis of surveillance indicators against hospital admissions"};
    app.require_subcommand(1);

    RunArgs ra;
    auto* run_cmd = app.add_subcommand("run", "Run Granger, cross-correlation and DTW over every cell");
    run_cmd->add_option("--config", ra.config, "Run configuration file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--admissions", ra.admissions, "trust_id,date,admissions CSV")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--indicators", ra.indicators, "Directory of geo_id,date,variable,value CSVs")
        ->required()
        ->check(CLI::ExistingDirectory);
    run_cmd->add_option("--mapping", ra.mapping, "ltla_id,trust_id,admissions CSV")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--population", ra.population, "ltla_id,population CSV")->check(CLI::ExistingFile);
    run_cmd->add_option("--out", ra.out, "Output directory")->required();
    run_cmd->add_option("--format", ra.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_option("--methods", ra.methods, "Comma-separated subset of granger,ccf,dtw");
    run_cmd->add_option("--threads", ra.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    run_cmd->add_flag("--serial", ra.serial, "Use the single-threaded reference path");
    run_cmd->add_flag("--export-paths", ra.export_paths, "Also write per-cell DTW alignment paths to dtw_paths.csv");

    SynthArgs sa;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic input corpus with known leads");
    synth_cmd->add_option("--out", sa.out, "Output directory")->required();
    synth_cmd->add_option("--trusts", sa.trusts, "Number of trusts")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--indicators", sa.indicators, "Number of indicators")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--days", sa.days, "Days from 2021-10-01")->check(CLI::Range(60, 5000));
    synth_cmd->add_option("--seed", sa.seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run(ra);
        return run_synth(sa);
    } catch (const Error& e) {
        fmt::print(stderr, "error[{}]: {}\n", to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        fmt::print(stderr, "error[internal]: {}\n", e.what());
        return 1;
    }
}

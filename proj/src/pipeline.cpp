#include "leadlag/pipeline.hpp"
#include "leadlag/dtw.hpp"
#include "leadlag/error.hpp"
#include "leadlag/granger.hpp"
#include "leadlag/xcorr.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace leadlag {

std::string method_name(Method m, int horizon_days) {
    switch (m) {
    case Method::granger: return "granger";
    case Method::granger_horizon: return "granger" + std::to_string(horizon_days);
    case Method::ccf: return "ccf";
    case Method::dtw: return "dtw";
    }
    return "unknown";
}

std::string to_string(CellStatus s) {
    switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::degenerate: return "degenerate";
    case CellStatus::no_data: return "no_data";
    case CellStatus::error: return "error";
    }
    return "unknown";
}

EffectiveLead effective_lead(double statistical_lead, const Latency& latency) {
    if (latency.lag_days < 0 || latency.cadence_days < 1) {
        throw Error(ErrorKind::invalid_argument, "latency needs lag >= 0 and cadence >= 1");
    }
    const double raw = statistical_lead - latency.lag_days - (latency.cadence_days - 1);
    if (raw >= 0.0) return {raw, false};
    return {std::min(0.0, statistical_lead), true};
}

FilterResult filter_trusts(const Panel& admissions, const RunConfig& config) {
    FilterResult out{admissions, {}};
    const Date lo = std::max(config.admissions_window_start, admissions.start());
    const Date hi = std::min(config.admissions_window_end, admissions.end());
    for (const auto& var : admissions.variables()) {
        for (const auto& [trust, s] : admissions.series(var)) {
            double total = 0.0;
            for (Date d = lo; d <= hi; d = d + 1) total += s[static_cast<std::size_t>(d - s.start())];
            if (config.exclude_trusts.contains(trust)) {
                out.removed.push_back({trust, "excluded", total});
            } else if (total < config.min_annual_admissions) {
                out.removed.push_back({trust, "below minimum admissions", total});
            }
        }
    }
    for (const auto& r : out.removed) out.panel.erase_geo(r.trust_id);
    return out;
}

namespace {

struct Cell {
    std::size_t wave;
    std::size_t trust;
    std::size_t indicator;
};

struct CellOutput {
    std::vector<ReportRow> rows;
    // z-scored DTW inputs for the multivariate pass; empty when unusable
    std::vector<double> dtw_indicator;
    std::vector<double> dtw_admissions;
    Date dtw_start;
    std::vector<DtwPathPoint> path;
};

std::string fmt_span(double span) { return fmt::format("{}", span); }

void mark_all(std::vector<ReportRow>& rows, CellStatus status, const std::string& detail) {
    for (auto& r : rows) {
        r.status = status;
        r.detail = detail;
    }
}

CellStatus status_of(const Error& e) {
    return e.kind() == ErrorKind::degenerate ? CellStatus::degenerate : CellStatus::error;
}

void apply_latency(ReportRow& row, double lead, const RunConfig& config) {
    if (auto lat = config.latency_of(row.indicator)) {
        const auto eff = effective_lead(lead, *lat);
        row.effective_lead = eff.days;
        row.eroded = eff.eroded;
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

struct Prepared {
    std::vector<double> scaled;  // min-max of the smoothed wave slice
    std::vector<double> zscored; // z-score of the smoothed DTW slice
    bool minmax_degenerate = false;
    bool zscore_degenerate = false;
};

CellOutput compute_cell(const RunConfig& config, const WaveSpec& wave, std::size_t wave_index, const std::string& trust,
                        const std::string& indicator, const TimeSeries& adm, const Panel* ind_panel) {
    CellOutput out;
    const std::string prov_base = "locf>loess(" + fmt_span(config.loess.span) + "," +
                                  std::to_string(config.loess.degree) + ")";
    for (Method m : config.methods) {
        ReportRow r;
        r.trust_id = trust;
        r.indicator = indicator;
        r.wave = wave.name;
        r.wave_index = wave_index;
        r.method = m;
        if (m == Method::granger || m == Method::granger_horizon) {
            r.horizon = m == Method::granger ? 0 : config.horizon_days;
            r.max_lag = config.granger_max_lag;
        }
        r.provenance = prov_base + (m == Method::dtw ? ">zscore" : ">minmax");
        out.rows.push_back(std::move(r));
    }

    if (ind_panel == nullptr || !ind_panel->contains(indicator, trust)) {
        mark_all(out.rows, CellStatus::no_data, "indicator has no series for this trust");
        return out;
    }
    const TimeSeries& ind = ind_panel->at(indicator, trust);

    const Date lo = std::max({wave.start, adm.start(), ind.start()});
    const Date hi = std::min({wave.end, adm.end(), ind.end()});
    const bool truncated = wave.start < ind.start() || ind.end() < wave.end;
    for (auto& r : out.rows) r.truncated = truncated;
    if (hi < lo) {
        mark_all(out.rows, CellStatus::no_data, "indicator absent for this wave");
        return out;
    }

    Prepared prep;
    std::vector<double> adm_scaled;
    std::vector<double> adm_z;
    Date dtw_lo = lo;
    try {
        const auto adm_s = loess_smooth(slice_window(adm, lo, hi), config.loess);
        const auto ind_s = loess_smooth(slice_window(ind, lo, hi), config.loess);
        const auto adm_mm = minmax_scale(adm_s);
        const auto ind_mm = minmax_scale(ind_s);
        prep.minmax_degenerate = adm_mm.degenerate || ind_mm.degenerate;
        prep.scaled.assign(ind_mm.series.values().begin(), ind_mm.series.values().end());
        adm_scaled.assign(adm_mm.series.values().begin(), adm_mm.series.values().end());

        if (config.methods.contains(Method::dtw)) {
            dtw_lo = std::max({wave.start - config.dtw_warmup_days, adm.start(), ind.start()});
            const bool same = dtw_lo == lo;
            const auto adm_d = same ? adm_s : loess_smooth(slice_window(adm, dtw_lo, hi), config.loess);
            const auto ind_d = same ? ind_s : loess_smooth(slice_window(ind, dtw_lo, hi), config.loess);
            const auto adm_zs = zscore_scale(adm_d);
            const auto ind_zs = zscore_scale(ind_d);
            prep.zscore_degenerate = adm_zs.degenerate || ind_zs.degenerate;
            prep.zscored.assign(ind_zs.series.values().begin(), ind_zs.series.values().end());
            adm_z.assign(adm_zs.series.values().begin(), adm_zs.series.values().end());
        }
    } catch (const Error& e) {
        mark_all(out.rows, status_of(e), std::string("preprocessing: ") + e.what());
        return out;
    }

    for (auto& row : out.rows) {
        try {
            switch (row.method) {
            case Method::granger:
            case Method::granger_horizon: {
                if (prep.minmax_degenerate) throw Error(ErrorKind::degenerate, "constant series");
                const auto g = granger::granger_test(prep.scaled, adm_scaled, config.granger_max_lag, row.horizon);
                row.f_stat = g.f;
                row.p_value = g.p;
                row.df1 = g.df1;
                row.df2 = g.df2;
                break;
            }
            case Method::ccf: {
                if (prep.minmax_degenerate) throw Error(ErrorKind::degenerate, "constant series");
                const auto profile = xcorr::ccf_profile(prep.scaled, adm_scaled, config.ccf_window);
                if (auto best = xcorr::optimal_lead(profile)) {
                    row.optimal_lead = best->lead;
                    row.ccf_at_optimal = best->value;
                    apply_latency(row, best->lead, config);
                } else {
                    row.detail = "no non-negative correlation in window";
                }
                if (config.horizon_days <= config.ccf_window) {
                    row.ccf_at_horizon = profile.at_lead(config.horizon_days);
                } else {
                    row.ccf_at_horizon = xcorr::ccf_at_horizon(prep.scaled, adm_scaled, config.horizon_days);
                }
                break;
            }
            case Method::dtw: {
                if (prep.zscore_degenerate) throw Error(ErrorKind::degenerate, "constant series");
                dtw::AlignmentQuery q;
                q.query = dtw::Sequence{prep.zscored};
                q.reference = dtw::Sequence{adm_z};
                q.window = config.dtw_window;
                const auto a = dtw::dtw_align(q);
                const auto leads = dtw::lead_times_from_path(a);
                const auto skip = static_cast<std::size_t>(lo - dtw_lo);
                const double med = median(std::vector<double>(leads.begin() + static_cast<std::ptrdiff_t>(skip), leads.end()));
                row.dtw_median_lead = med;
                row.dtw_normalized_distance = dtw::normalized_distance(a);
                apply_latency(row, med, config);
                out.dtw_indicator = prep.zscored;
                out.dtw_admissions = adm_z;
                out.dtw_start = dtw_lo;
                if (config.export_dtw_paths) {
                    out.path.reserve(a.path.size());
                    for (const auto& [i, j] : a.path) {
                        const long li = static_cast<long>(i), lj = static_cast<long>(j);
                        out.path.push_back({trust, indicator, wave.name, dtw_lo + li, dtw_lo + lj, lj - li});
                    }
                }
                break;
            }
            }
        } catch (const Error& e) {
            row.status = status_of(e);
            row.detail = e.what();
        }
    }
    return out;
}

template <typename F>
void for_each_index(std::size_t count, Execution exec, F&& body) {
    const auto n = static_cast<std::ptrdiff_t>(count);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    }
}

bool row_less(const ReportRow& a, const ReportRow& b) {
    return std::tie(a.trust_id, a.indicator, a.wave_index, a.method) <
           std::tie(b.trust_id, b.indicator, b.wave_index, b.method);
}

} // namespace

AnalysisResult run_analysis(const RunConfig& config, const Panel& admissions,
                            const std::map<std::string, Panel>& indicators, Execution exec) {
    config.validate();
    if (admissions.level() != GeoLevel::trust) throw Error(ErrorKind::invalid_argument, "admissions must be trust level");
    for (const auto& [id, p] : indicators) {
        if (p.level() != GeoLevel::trust) {
            throw Error(ErrorKind::invalid_argument, "indicator '" + id + "' must be mapped to trust level first");
        }
    }

    const std::vector<std::string> trusts = admissions.variables().empty() ? std::vector<std::string>{}
                                                                            : admissions.geos("admissions");
    std::vector<std::string> ind_ids;
    for (const auto& [id, _] : indicators) ind_ids.push_back(id);

    std::vector<Cell> cells;
    cells.reserve(config.waves.size() * trusts.size() * ind_ids.size());
    for (std::size_t w = 0; w < config.waves.size(); ++w) {
        for (std::size_t t = 0; t < trusts.size(); ++t) {
            for (std::size_t k = 0; k < ind_ids.size(); ++k) cells.push_back({w, t, k});
        }
    }

    std::vector<CellOutput> outputs(cells.size());
    for_each_index(cells.size(), exec, [&](std::size_t c) {
        const auto& cell = cells[c];
        const auto& id = ind_ids[cell.indicator];
        const auto& panel = indicators.at(id);
        outputs[c] = compute_cell(config, config.waves[cell.wave], cell.wave, trusts[cell.trust], id,
                                  admissions.at("admissions", trusts[cell.trust]), &panel);
    });

    AnalysisResult result;

    // Multivariate DTW: one alignment per (indicator, wave) over every usable trust column.
    const std::size_t nmv = ind_ids.size() * config.waves.size();
    if (config.methods.contains(Method::dtw)) {
        result.multivariate.resize(nmv);
        for_each_index(nmv, exec, [&](std::size_t idx) {
            const std::size_t k = idx / config.waves.size();
            const std::size_t w = idx % config.waves.size();
            auto& mv = result.multivariate[idx];
            mv.indicator = ind_ids[k];
            mv.wave = config.waves[w].name;
            std::vector<std::vector<double>> qcols, rcols;
            Date start{};
            for (std::size_t t = 0; t < trusts.size(); ++t) {
                const auto& o = outputs[(w * trusts.size() + t) * ind_ids.size() + k];
                if (o.dtw_indicator.empty()) continue;
                if (!qcols.empty() && (o.dtw_indicator.size() != qcols.front().size() || o.dtw_start != start)) continue;
                start = o.dtw_start;
                qcols.push_back(o.dtw_indicator);
                rcols.push_back(o.dtw_admissions);
            }
            mv.trusts = qcols.size();
            if (qcols.empty()) {
                mv.status = CellStatus::no_data;
                mv.detail = "no trust with a usable series";
                return;
            }
            try {
                dtw::AlignmentQuery q;
                q.query = dtw::Sequence::from_columns(qcols);
                q.reference = dtw::Sequence::from_columns(rcols);
                q.window = config.dtw_window;
                const auto a = dtw::dtw_align(q);
                const auto leads = dtw::lead_times_from_path(a);
                const auto skip = static_cast<std::size_t>(std::max(0L, config.waves[w].start - start));
                mv.normalized_distance = dtw::normalized_distance(a);
                mv.median_lead = median(std::vector<double>(leads.begin() + static_cast<std::ptrdiff_t>(skip), leads.end()));
            } catch (const Error& e) {
                mv.status = status_of(e);
                mv.detail = e.what();
            }
        });
    }

    std::size_t total = 0;
    for (const auto& o : outputs) total += o.rows.size();
    result.rows.reserve(total);
    for (auto& o : outputs) {
        for (auto& r : o.rows) result.rows.push_back(std::move(r));
    }
    std::sort(result.rows.begin(), result.rows.end(), row_less);

    if (config.export_dtw_paths) {
        // Same (trust, indicator, wave) order as the rows.
        std::vector<std::size_t> order(outputs.size());
        for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
        auto key = [&](std::size_t c) {
            return std::tie(trusts[cells[c].trust], ind_ids[cells[c].indicator], cells[c].wave);
        };
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
        for (std::size_t c : order) {
            for (auto& p : outputs[c].path) result.dtw_paths.push_back(std::move(p));
        }
    }

    for (const auto& id : ind_ids) {
        const auto& p = indicators.at(id);
        for (const auto& w : config.waves) {
            if (w.start < p.start() || p.end() < w.end) result.coverage.truncated_waves[id].push_back(w.name);
        }
    }
    return result;
}

AnalysisResult run_pipeline(const PipelineInputs& inputs, Execution exec) {
    const auto& config = inputs.config;
    config.validate();
    auto filtered = filter_trusts(inputs.admissions, config);

    std::set<std::string> known_trusts;
    for (const auto& var : inputs.admissions.variables()) {
        for (const auto& g : inputs.admissions.geos(var)) known_trusts.insert(g);
    }

    std::map<std::string, Panel> trust_level;
    std::map<std::string, std::vector<std::string>> absent;
    for (const auto& [id, panel] : inputs.indicators) {
        if (panel.level() == GeoLevel::trust) {
            std::vector<std::string> unknown;
            for (const auto& var : panel.variables()) {
                for (const auto& g : panel.geos(var)) {
                    if (!known_trusts.contains(g)) unknown.push_back(g);
                }
            }
            if (!unknown.empty()) {
                std::string msg = "indicator '" + id + "' has trust ids absent from admissions:";
                for (const auto& u : unknown) msg += " " + u;
                throw Error(ErrorKind::input, msg);
            }
            trust_level.emplace(id, panel);
            continue;
        }
        auto it = inputs.indicator_mappings.find(id);
        const auto& mapping = it == inputs.indicator_mappings.end() ? inputs.mapping : it->second;
        auto mapped = geo::apply_mapping(panel, mapping, exec);
        for (auto& [var, ltlas] : mapped.absent_ltlas) absent[var] = std::move(ltlas);
        trust_level.emplace(id, std::move(mapped.panel));
    }

    auto result = run_analysis(config, filtered.panel, trust_level, exec);
    result.coverage.removed_trusts = std::move(filtered.removed);
    result.coverage.zero_record_ltlas = inputs.mapping.flagged_ltlas();
    result.coverage.absent_ltlas = std::move(absent);
    if (inputs.population) result.trust_population = geo::weighted_population(inputs.mapping, *inputs.population);
    return result;
}

} // namespace leadlag

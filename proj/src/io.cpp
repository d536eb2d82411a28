#include "leadlag/io.hpp"
#include "leadlag/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace leadlag::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const auto c = s.find(',', pos);
        out.push_back(trim(s.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos)));
        if (c == std::string_view::npos) break;
        pos = c + 1;
    }
    return out;
}

/// Line-oriented CSV reader with a mandatory header.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string source, std::vector<std::string_view> header)
        : in_(in), source_(std::move(source)), width_(header.size()) {
        std::string line;
        if (!std::getline(in_, line)) fail("missing header row");
        ++line_no_;
        std::string_view h = line;
        if (h.size() >= 3 && h.substr(0, 3) == "\xEF\xBB\xBF") h.remove_prefix(3); // UTF-8 BOM
        const auto got = split_fields(h);
        if (got != header) {
            std::string want;
            for (auto f : header) want += (want.empty() ? "" : ",") + std::string(f);
            fail("expected header '" + want + "'");
        }
    }

    /// Next non-empty record; false at end of input.
    bool next(std::vector<std::string_view>& fields) {
        while (std::getline(in_, buf_)) {
            ++line_no_;
            if (trim(buf_).empty()) continue;
            fields = split_fields(buf_);
            if (fields.size() != width_) {
                fail("expected " + std::to_string(width_) + " fields, got " + std::to_string(fields.size()));
            }
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorKind::input, source_ + ":" + std::to_string(line_no_) + ": " + msg);
    }

    Date date(std::string_view f) const {
        auto d = parse_iso_date(f);
        if (!d) fail("invalid date '" + std::string(f) + "'");
        return *d;
    }

    double number(std::string_view f) const {
        std::string s(f);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            fail("invalid number '" + s + "'");
        }
        if (used != s.size() || !std::isfinite(v)) fail("invalid number '" + s + "'");
        return v;
    }

    long long count(std::string_view f) const {
        long long v = 0;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || p != f.data() + f.size()) fail("invalid count '" + std::string(f) + "'");
        if (v < 0) fail("negative count '" + std::string(f) + "'");
        return v;
    }

    void require_id(std::string_view f, const char* what) const {
        if (f.empty()) fail(std::string("empty ") + what);
    }

private:
    std::istream& in_;
    std::string source_;
    std::size_t width_;
    std::size_t line_no_ = 0;
    std::string buf_;
};

std::ifstream open_in(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read " + p.string());
    return in;
}

using Observations = std::map<std::string, std::map<Date, std::optional<double>>>; // geo -> date -> value

Panel build_panel(const Observations& obs, GeoLevel level, const std::string& variable, Panel* into) {
    Date lo = obs.begin()->second.begin()->first;
    Date hi = lo;
    for (const auto& [_, days] : obs) {
        lo = std::min(lo, days.begin()->first);
        hi = std::max(hi, days.rbegin()->first);
    }
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    Panel p = into ? *into : Panel{level, lo, len};
    for (const auto& [geo, days] : obs) {
        std::vector<double> v(len, 0.0);
        std::vector<bool> miss(len, true);
        for (const auto& [d, value] : days) {
            if (!value) continue;
            const auto i = static_cast<std::size_t>(d - lo);
            v[i] = *value;
            miss[i] = false;
        }
        TimeSeries raw{lo, std::move(v), std::move(miss)};
        if (raw.missing_count() == raw.size()) {
            throw Error(ErrorKind::input, "series '" + variable + "/" + geo + "' has no observed values");
        }
        p.insert(variable, geo, locf_impute(raw));
    }
    return p;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + p.string());
    return out;
}

std::string num(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string{}; }
std::string num(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string{}; }

std::string flags(const ReportRow& r) {
    std::string f;
    auto add = [&](const char* s) { f += (f.empty() ? "" : ";") + std::string(s); };
    if (r.truncated) add("truncated");
    if (r.status == CellStatus::degenerate) add("degenerate");
    if (r.eroded) add("eroded");
    return f;
}

// Free-text fields may hold commas; keep CSV single-field.
std::string csv_text(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::function<std::vector<std::string>(const ReportRow&)> fields;
    std::function<bool(const ReportRow&)> accepts;
};

std::vector<Table> tables(const RunConfig& config) {
    auto common = [&](const ReportRow& r) {
        return std::vector<std::string>{r.trust_id, r.indicator, r.wave, method_name(r.method, config.horizon_days)};
    };
    auto tail = [](const ReportRow& r, std::vector<std::string> v) {
        v.push_back(to_string(r.status));
        v.push_back(flags(r));
        v.push_back(csv_text(r.detail));
        v.push_back(csv_text(r.provenance));
        return v;
    };
    return {
        {"granger",
         {"trust_id", "indicator", "wave", "method", "horizon", "max_lag", "f_stat", "p_value", "df1", "df2", "status",
          "flags", "detail", "provenance"},
         [=](const ReportRow& r) {
             auto v = common(r);
             v.push_back(std::to_string(r.horizon));
             v.push_back(std::to_string(r.max_lag));
             v.push_back(num(r.f_stat));
             v.push_back(num(r.p_value));
             v.push_back(num(r.df1));
             v.push_back(num(r.df2));
             return tail(r, std::move(v));
         },
         [](const ReportRow& r) { return r.method == Method::granger || r.method == Method::granger_horizon; }},
        {"ccf",
         {"trust_id", "indicator", "wave", "method", "optimal_lead", "ccf_at_optimal", "ccf_at_horizon",
          "effective_lead", "status", "flags", "detail", "provenance"},
         [=](const ReportRow& r) {
             auto v = common(r);
             v.push_back(num(r.optimal_lead));
             v.push_back(num(r.ccf_at_optimal));
             v.push_back(num(r.ccf_at_horizon));
             v.push_back(num(r.effective_lead));
             return tail(r, std::move(v));
         },
         [](const ReportRow& r) { return r.method == Method::ccf; }},
        {"dtw",
         {"trust_id", "indicator", "wave", "method", "median_lead", "normalized_distance", "effective_lead", "status",
          "flags", "detail", "provenance"},
         [=](const ReportRow& r) {
             auto v = common(r);
             v.push_back(num(r.dtw_median_lead));
             v.push_back(num(r.dtw_normalized_distance));
             v.push_back(num(r.effective_lead));
             return tail(r, std::move(v));
         },
         [](const ReportRow& r) { return r.method == Method::dtw; }},
    };
}

// Linear-interpolation quantiles (Hyndman-Fan type 7).
nlohmann::ordered_json quantiles(std::vector<double> v) {
    nlohmann::ordered_json q;
    q["n"] = v.size();
    if (v.empty()) return q;
    std::sort(v.begin(), v.end());
    auto at = [&](double p) {
        const double h = (static_cast<double>(v.size()) - 1.0) * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    q["min"] = v.front();
    q["q25"] = at(0.25);
    q["median"] = at(0.5);
    q["q75"] = at(0.75);
    q["max"] = v.back();
    return q;
}

nlohmann::ordered_json row_json(const ReportRow& r, const RunConfig& config) {
    nlohmann::ordered_json j;
    j["trust_id"] = r.trust_id;
    j["indicator"] = r.indicator;
    j["wave"] = r.wave;
    j["method"] = method_name(r.method, config.horizon_days);
    auto opt = [&](const char* k, const auto& v) {
        if (v) j[k] = *v;
        else j[k] = nullptr;
    };
    if (r.method == Method::granger || r.method == Method::granger_horizon) {
        j["horizon"] = r.horizon;
        j["max_lag"] = r.max_lag;
        opt("f_stat", r.f_stat);
        opt("p_value", r.p_value);
        opt("df1", r.df1);
        opt("df2", r.df2);
    } else if (r.method == Method::ccf) {
        opt("optimal_lead", r.optimal_lead);
        opt("ccf_at_optimal", r.ccf_at_optimal);
        opt("ccf_at_horizon", r.ccf_at_horizon);
        opt("effective_lead", r.effective_lead);
    } else {
        opt("median_lead", r.dtw_median_lead);
        opt("normalized_distance", r.dtw_normalized_distance);
        opt("effective_lead", r.effective_lead);
    }
    j["status"] = to_string(r.status);
    j["flags"] = flags(r);
    j["detail"] = r.detail;
    j["provenance"] = r.provenance;
    return j;
}

nlohmann::ordered_json summary_json(const AnalysisResult& result, const RunConfig& config) {
    // indicator -> wave -> statistic -> values
    std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>> stats;
    std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> statuses;
    const std::string g0 = method_name(Method::granger, config.horizon_days);
    const std::string gh = method_name(Method::granger_horizon, config.horizon_days);
    for (const auto& r : result.rows) {
        statuses[r.indicator][r.wave][method_name(r.method, config.horizon_days) + ":" + to_string(r.status)]++;
        if (r.status != CellStatus::ok) continue;
        auto& s = stats[r.indicator][r.wave];
        switch (r.method) {
        case Method::granger: s[g0 + "_p_value"].push_back(*r.p_value); break;
        case Method::granger_horizon: s[gh + "_p_value"].push_back(*r.p_value); break;
        case Method::ccf:
            if (r.optimal_lead) s["ccf_optimal_lead"].push_back(*r.optimal_lead);
            if (r.ccf_at_horizon) s["ccf_at_horizon"].push_back(*r.ccf_at_horizon);
            break;
        case Method::dtw:
            s["dtw_median_lead"].push_back(*r.dtw_median_lead);
            s["dtw_normalized_distance"].push_back(*r.dtw_normalized_distance);
            break;
        }
    }

    nlohmann::ordered_json j;
    j["horizon_days"] = config.horizon_days;
    nlohmann::ordered_json waves = nlohmann::ordered_json::array();
    for (const auto& w : config.waves) waves.push_back({{"name", w.name}, {"start", w.start.iso()}, {"end", w.end.iso()}});
    j["waves"] = waves;

    nlohmann::ordered_json inds = nlohmann::ordered_json::object();
    std::set<std::string> ids;
    for (const auto& r : result.rows) ids.insert(r.indicator);
    for (const auto& mv : result.multivariate) ids.insert(mv.indicator);
    for (const auto& id : ids) {
        nlohmann::ordered_json per_wave = nlohmann::ordered_json::object();
        for (const auto& w : config.waves) {
            nlohmann::ordered_json e;
            const auto& s = stats[id][w.name];
            for (const auto& name : {g0 + "_p_value", gh + "_p_value", std::string("ccf_optimal_lead"),
                                     std::string("ccf_at_horizon"), std::string("dtw_median_lead"),
                                     std::string("dtw_normalized_distance")}) {
                auto it = s.find(name);
                e[name] = quantiles(it == s.end() ? std::vector<double>{} : it->second);
            }
            nlohmann::ordered_json st = nlohmann::ordered_json::object();
            for (const auto& [k, c] : statuses[id][w.name]) st[k] = c;
            e["status_counts"] = st;
            for (const auto& mv : result.multivariate) {
                if (mv.indicator != id || mv.wave != w.name) continue;
                nlohmann::ordered_json m;
                m["trusts"] = mv.trusts;
                m["status"] = to_string(mv.status);
                m["normalized_distance"] = mv.normalized_distance ? nlohmann::ordered_json(*mv.normalized_distance) : nullptr;
                m["median_lead"] = mv.median_lead ? nlohmann::ordered_json(*mv.median_lead) : nullptr;
                if (!mv.detail.empty()) m["detail"] = mv.detail;
                e["multivariate_dtw"] = m;
            }
            per_wave[w.name] = e;
        }
        inds[id] = per_wave;
    }
    j["indicators"] = inds;

    nlohmann::ordered_json cov;
    nlohmann::ordered_json removed = nlohmann::ordered_json::array();
    for (const auto& r : result.coverage.removed_trusts) {
        removed.push_back({{"trust_id", r.trust_id}, {"reason", r.reason}, {"admissions_in_window", r.admissions_in_window}});
    }
    cov["removed_trusts"] = removed;
    cov["zero_record_ltlas"] = result.coverage.zero_record_ltlas;
    cov["absent_ltlas"] = result.coverage.absent_ltlas;
    cov["truncated_waves"] = result.coverage.truncated_waves;
    j["coverage"] = cov;
    j["trust_population"] = result.trust_population;
    return j;
}

} // namespace

Panel read_admissions(std::istream& in, const std::string& source) {
    CsvReader csv(in, source, {"trust_id", "date", "admissions"});
    Observations obs;
    std::vector<std::string_view> f;
    while (csv.next(f)) {
        csv.require_id(f[0], "trust_id");
        const Date d = csv.date(f[1]);
        std::optional<double> value;
        if (!f[2].empty()) value = static_cast<double>(csv.count(f[2]));
        if (!obs[std::string(f[0])].emplace(d, value).second) {
            csv.fail("duplicate row for trust '" + std::string(f[0]) + "' on " + d.iso());
        }
    }
    if (obs.empty()) throw Error(ErrorKind::input, source + ": no admission records");
    // Rectangular over the union of dates.
    Date lo = obs.begin()->second.begin()->first, hi = lo;
    for (const auto& [_, days] : obs) {
        lo = std::min(lo, days.begin()->first);
        hi = std::max(hi, days.rbegin()->first);
    }
    Panel p{GeoLevel::trust, lo, static_cast<std::size_t>(hi - lo + 1)};
    for (auto& [_, days] : obs) {
        days.try_emplace(lo, std::nullopt);
        days.try_emplace(hi, std::nullopt);
    }
    return build_panel(obs, GeoLevel::trust, "admissions", &p);
}

Panel ingest_admissions(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_admissions(in, path.string());
}

std::map<std::string, Panel> read_indicator(std::istream& in, const std::string& source, GeoLevel level) {
    CsvReader csv(in, source, {"geo_id", "date", "variable", "value"});
    std::map<std::string, Observations> by_var;
    std::vector<std::string_view> f;
    while (csv.next(f)) {
        csv.require_id(f[0], "geo_id");
        csv.require_id(f[2], "variable");
        const Date d = csv.date(f[1]);
        std::optional<double> value;
        if (!f[3].empty()) value = csv.number(f[3]);
        if (!by_var[std::string(f[2])][std::string(f[0])].emplace(d, value).second) {
            csv.fail("duplicate row for '" + std::string(f[2]) + "/" + std::string(f[0]) + "' on " + d.iso());
        }
    }
    if (by_var.empty()) throw Error(ErrorKind::input, source + ": no indicator records");
    std::map<std::string, Panel> out;
    for (auto& [var, obs] : by_var) {
        // Observed range only; dates with every geo blank do not extend coverage.
        std::optional<Date> lo, hi;
        for (const auto& [_, days] : obs) {
            for (const auto& [d, v] : days) {
                if (!v) continue;
                lo = lo ? std::min(*lo, d) : d;
                hi = hi ? std::max(*hi, d) : d;
            }
        }
        if (!lo) throw Error(ErrorKind::input, source + ": variable '" + var + "' has no observed values");
        for (auto& [_, days] : obs) {
            std::erase_if(days, [&](const auto& kv) { return kv.first < *lo || *hi < kv.first; });
            days.try_emplace(*lo, std::nullopt);
            days.try_emplace(*hi, std::nullopt);
        }
        out.emplace(var, build_panel(obs, level, var, nullptr));
    }
    return out;
}

std::map<std::string, Panel> ingest_indicator(const std::filesystem::path& path, GeoLevel level) {
    auto in = open_in(path);
    return read_indicator(in, path.string(), level);
}

std::map<std::string, Panel> ingest_indicator_dir(const std::filesystem::path& dir, const RunConfig& config) {
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::io, "indicator directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::map<std::string, Panel> out;
    for (const auto& file : files) {
        // Level is per variable, so read at the default level and relabel.
        for (auto& [var, panel] : ingest_indicator(file, config.indicator_level)) {
            const GeoLevel level = config.level_of(var);
            Panel p{level, panel.start(), panel.length()};
            for (const auto& [geo, s] : panel.series(var)) p.insert(var, geo, s);
            if (!out.emplace(var, std::move(p)).second) {
                throw Error(ErrorKind::input, "variable '" + var + "' appears in more than one indicator file");
            }
        }
    }
    if (out.empty()) throw Error(ErrorKind::input, "no indicator files in " + dir.string());
    return out;
}

std::vector<geo::AdmissionCount> read_mapping_counts(std::istream& in, const std::string& source) {
    CsvReader csv(in, source, {"ltla_id", "trust_id", "admissions"});
    std::vector<geo::AdmissionCount> out;
    std::vector<std::string_view> f;
    while (csv.next(f)) {
        csv.require_id(f[0], "ltla_id");
        csv.require_id(f[1], "trust_id");
        const double n = csv.number(f[2]);
        if (n < 0) csv.fail("negative admission count");
        out.push_back({std::string(f[0]), std::string(f[1]), n});
    }
    return out;
}

geo::GeoMapping load_mapping(const std::filesystem::path& path) {
    auto in = open_in(path);
    return geo::build_mapping(read_mapping_counts(in, path.string()));
}

geo::PopulationTable read_population(std::istream& in, const std::string& source) {
    CsvReader csv(in, source, {"ltla_id", "population"});
    geo::PopulationTable out;
    std::vector<std::string_view> f;
    while (csv.next(f)) {
        csv.require_id(f[0], "ltla_id");
        const double v = csv.number(f[1]);
        if (v < 0) csv.fail("negative population");
        if (!out.emplace(std::string(f[0]), v).second) csv.fail("duplicate LTLA '" + std::string(f[0]) + "'");
    }
    return out;
}

geo::PopulationTable load_population(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_population(in, path.string());
}

std::map<std::string, std::vector<std::string>> read_groups(std::istream& in, const std::string& source) {
    CsvReader csv(in, source, {"group", "member_variable"});
    std::map<std::string, std::vector<std::string>> out;
    std::set<std::string> seen;
    std::vector<std::string_view> f;
    while (csv.next(f)) {
        csv.require_id(f[0], "group");
        csv.require_id(f[1], "member_variable");
        if (!seen.insert(std::string(f[1])).second) csv.fail("variable '" + std::string(f[1]) + "' is in two groups");
        out[std::string(f[0])].emplace_back(f[1]);
    }
    return out;
}

std::map<std::string, Panel> apply_groups(const std::map<std::string, Panel>& panels,
                                         const std::map<std::string, std::vector<std::string>>& groups) {
    std::map<std::string, Panel> out;
    std::set<std::string> consumed;
    for (const auto& [group, members] : groups) {
        const Panel* first = nullptr;
        Date lo{}, hi{};
        for (const auto& m : members) {
            auto it = panels.find(m);
            if (it == panels.end()) throw Error(ErrorKind::input, "group '" + group + "' names unknown variable '" + m + "'");
            const Panel& p = it->second;
            if (first && p.level() != first->level()) {
                throw Error(ErrorKind::input, "group '" + group + "' mixes geography levels");
            }
            lo = first ? std::max(lo, p.start()) : p.start();
            hi = first ? std::min(hi, p.end()) : p.end();
            first = first ? first : &p;
            consumed.insert(m);
        }
        if (!first) continue;
        if (hi < lo) throw Error(ErrorKind::input, "members of group '" + group + "' share no dates");
        Panel sum{first->level(), lo, static_cast<std::size_t>(hi - lo + 1)};
        std::map<std::string, std::vector<double>> acc;
        for (const auto& m : members) {
            for (const auto& [geo, s] : panels.at(m).series(m)) {
                auto& v = acc.try_emplace(geo, static_cast<std::size_t>(hi - lo + 1), 0.0).first->second;
                const auto sl = slice_window(s, lo, hi);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] += sl[i];
            }
        }
        for (auto& [geo, v] : acc) sum.insert(group, geo, TimeSeries{lo, std::move(v)});
        out.emplace(group, std::move(sum));
    }
    for (const auto& [var, p] : panels) {
        if (consumed.contains(var)) continue;
        if (out.contains(var)) throw Error(ErrorKind::input, "group name '" + var + "' collides with a variable");
        out.emplace(var, p);
    }
    return out;
}

void emit_reports(const AnalysisResult& result, const RunConfig& config, const std::filesystem::path& dir,
                  ReportFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

    for (const auto& table : tables(config)) {
        if (format == ReportFormat::csv) {
            auto out = open_out(dir / (table.name + ".csv"));
            std::string line;
            for (std::size_t i = 0; i < table.header.size(); ++i) line += (i ? "," : "") + table.header[i];
            out << line << '\n';
            for (const auto& r : result.rows) {
                if (!table.accepts(r)) continue;
                const auto f = table.fields(r);
                line.clear();
                for (std::size_t i = 0; i < f.size(); ++i) line += (i ? "," : "") + f[i];
                out << line << '\n';
            }
            if (!out) throw Error(ErrorKind::io, "write failed for " + (dir / (table.name + ".csv")).string());
        } else {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& r : result.rows) {
                if (table.accepts(r)) arr.push_back(row_json(r, config));
            }
            auto out = open_out(dir / (table.name + ".json"));
            out << arr.dump(1) << '\n';
            if (!out) throw Error(ErrorKind::io, "write failed for " + (dir / (table.name + ".json")).string());
        }
    }
    if (config.export_dtw_paths) {
        // Always CSV: paths are long and only ever post-processed.
        auto paths = open_out(dir / "dtw_paths.csv");
        paths << "trust_id,indicator,wave,query_date,ref_date,lead_days\n";
        for (const auto& p : result.dtw_paths) {
            paths << p.trust_id << ',' << p.indicator << ',' << p.wave << ',' << p.query_date.iso() << ','
                  << p.ref_date.iso() << ',' << p.lead_days << '\n';
        }
        if (!paths) throw Error(ErrorKind::io, "write failed for " + (dir / "dtw_paths.csv").string());
    }
    auto out = open_out(dir / "summary.json");
    out << summary_json(result, config).dump(1) << '\n';
    if (!out) throw Error(ErrorKind::io, "write failed for " + (dir / "summary.json").string());
}

} // namespace leadlag::io

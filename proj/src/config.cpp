#include "leadlag/config.hpp"
#include "leadlag/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace leadlag {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    for (;;) {
        const auto next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw Error(ErrorKind::config, "config line " + std::to_string(line) + ": " + msg);
}

int to_int(std::string_view v, std::size_t line) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) fail(line, "expected an integer, got '" + std::string(v) + "'");
    return out;
}

double to_double(std::string_view v, std::size_t line) {
    // from_chars for double is not available on every libstdc++ we target
    std::string s(v);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + s + "'");
    }
    if (used != s.size()) fail(line, "expected a number, got '" + s + "'");
    return out;
}

Date to_date(std::string_view v, std::size_t line) {
    auto d = parse_iso_date(v);
    if (!d) fail(line, "invalid date '" + std::string(v) + "'");
    return *d;
}

GeoLevel to_level(std::string_view v, std::size_t line) {
    if (v == "ltla") return GeoLevel::ltla;
    if (v == "trust") return GeoLevel::trust;
    fail(line, "geo level must be 'ltla' or 'trust'");
}

} // namespace

void RunConfig::validate() const {
    auto bad = [](const std::string& msg) { throw Error(ErrorKind::config, msg); };
    if (waves.empty()) bad("at least one wave is required");
    if (horizon_days <= 0) bad("horizon_days must be positive");
    if (granger_max_lag <= 0) bad("granger_max_lag must be positive");
    if (ccf_window <= 0) bad("ccf_window must be positive");
    if (dtw_window <= 0) bad("dtw_window must be positive");
    if (dtw_warmup_days < 0) bad("dtw_warmup_days must be >= 0");
    if (!(loess.span > 0.0 && loess.span <= 1.0)) bad("loess_span must be in (0, 1]");
    if (loess.degree != 1 && loess.degree != 2) bad("loess_degree must be 1 or 2");
    if (min_annual_admissions < 0) bad("min_annual_admissions must be >= 0");
    if (admissions_window_end < admissions_window_start) bad("admissions_window end precedes start");
    if (methods.empty()) bad("no methods selected");
    for (std::size_t i = 0; i < waves.size(); ++i) {
        if (!(waves[i].start < waves[i].end)) bad("wave '" + waves[i].name + "' must start before it ends");
        if (i > 0 && !(waves[i - 1].end < waves[i].start)) {
            bad("waves '" + waves[i - 1].name + "' and '" + waves[i].name + "' overlap or are out of order");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (waves[k].name == waves[i].name) bad("duplicate wave name '" + waves[i].name + "'");
        }
    }
    for (const auto& [id, lat] : latency) {
        if (lat.lag_days < 0 || lat.cadence_days < 1) bad("latency for '" + id + "' needs lag >= 0 and cadence >= 1");
    }
}

GeoLevel RunConfig::level_of(const std::string& variable) const {
    auto it = indicator_levels.find(variable);
    return it == indicator_levels.end() ? indicator_level : it->second;
}

std::optional<Latency> RunConfig::latency_of(const std::string& indicator) const {
    if (auto it = latency.find(indicator); it != latency.end()) return it->second;
    std::optional<Latency> best;
    std::size_t best_len = 0;
    for (const auto& [key, lat] : latency) {
        if (key.size() > best_len && indicator.compare(0, key.size(), key) == 0) {
            best = lat;
            best_len = key.size();
        }
    }
    return best;
}

std::set<Method> parse_methods(std::string_view list) {
    std::set<Method> out;
    for (auto m : split(list, ',')) {
        if (m == "granger") {
            out.insert(Method::granger);
            out.insert(Method::granger_horizon);
        } else if (m == "ccf") {
            out.insert(Method::ccf);
        } else if (m == "dtw") {
            out.insert(Method::dtw);
        } else if (!m.empty()) {
            throw Error(ErrorKind::config, "unknown method '" + std::string(m) + "' (expected granger, ccf, dtw)");
        }
    }
    if (out.empty()) throw Error(ErrorKind::config, "no methods selected");
    return out;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    bool waves_seen = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    auto resolve = [&](std::string_view p) {
        std::filesystem::path path{std::string(p)};
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
        const auto key = trim(s.substr(0, eq));
        const auto value = trim(s.substr(eq + 1));
        if (value.empty()) fail(line, "empty value for '" + std::string(key) + "'");

        if (key == "wave") {
            const auto parts = split(value, ',');
            if (parts.size() != 3) fail(line, "wave needs 'name,start,end'");
            if (!waves_seen) cfg.waves.clear();
            waves_seen = true;
            cfg.waves.push_back(WaveSpec{std::string(parts[0]), to_date(parts[1], line), to_date(parts[2], line)});
        } else if (key == "horizon_days") {
            cfg.horizon_days = to_int(value, line);
        } else if (key == "granger_max_lag") {
            cfg.granger_max_lag = to_int(value, line);
        } else if (key == "ccf_window") {
            cfg.ccf_window = to_int(value, line);
        } else if (key == "dtw_window") {
            cfg.dtw_window = to_int(value, line);
        } else if (key == "dtw_warmup_days") {
            cfg.dtw_warmup_days = to_int(value, line);
        } else if (key == "loess_span") {
            cfg.loess.span = to_double(value, line);
        } else if (key == "loess_degree") {
            cfg.loess.degree = to_int(value, line);
        } else if (key == "min_annual_admissions") {
            cfg.min_annual_admissions = to_double(value, line);
        } else if (key == "admissions_window") {
            const auto parts = split(value, ',');
            if (parts.size() != 2) fail(line, "admissions_window needs 'start,end'");
            cfg.admissions_window_start = to_date(parts[0], line);
            cfg.admissions_window_end = to_date(parts[1], line);
        } else if (key == "exclude_trusts") {
            for (auto id : split(value, ',')) {
                if (!id.empty()) cfg.exclude_trusts.insert(std::string(id));
            }
        } else if (key == "indicator_level") {
            cfg.indicator_level = to_level(value, line);
        } else if (key == "groups_file") {
            cfg.groups_file = resolve(value);
        } else if (key == "methods") {
            cfg.methods = parse_methods(value);
        } else if (key == "threads") {
            cfg.threads = to_int(value, line);
        } else if (key == "export_dtw_paths") {
            if (value == "true") cfg.export_dtw_paths = true;
            else if (value == "false") cfg.export_dtw_paths = false;
            else fail(line, "expected true or false, got '" + std::string(value) + "'");
        } else if (key.starts_with("level.")) {
            cfg.indicator_levels[std::string(key.substr(6))] = to_level(value, line);
        } else if (key.starts_with("mapping.")) {
            cfg.mappings[std::string(key.substr(8))] = resolve(value);
        } else if (key.starts_with("latency.")) {
            const auto parts = split(value, ',');
            if (parts.size() != 2) fail(line, "latency needs 'lag_days,cadence_days'");
            cfg.latency[std::string(key.substr(8))] = Latency{to_int(parts[0], line), to_int(parts[1], line)};
        } else {
            fail(line, "unknown key '" + std::string(key) + "'");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

} // namespace leadlag

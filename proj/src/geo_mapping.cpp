#include "leadlag/geo_mapping.hpp"
#include "leadlag/error.hpp"

#include <algorithm>
#include <set>

namespace leadlag::geo {

GeoMapping::GeoMapping(std::vector<std::string> ltlas, std::vector<std::string> trusts, std::vector<double> weights,
                       std::vector<bool> zero_rows)
    : ltlas_(std::move(ltlas)), trusts_(std::move(trusts)), weights_(std::move(weights)), zero_rows_(std::move(zero_rows)) {
    if (weights_.size() != ltlas_.size() * trusts_.size() || zero_rows_.size() != ltlas_.size()) {
        throw Error(ErrorKind::invalid_argument, "mapping dimensions are inconsistent");
    }
    for (std::size_t i = 0; i < ltlas_.size(); ++i) {
        if (!ltla_pos_.emplace(ltlas_[i], i).second) throw Error(ErrorKind::input, "duplicate LTLA id " + ltlas_[i]);
    }
    for (std::size_t i = 0; i < trusts_.size(); ++i) {
        if (!trust_pos_.emplace(trusts_[i], i).second) throw Error(ErrorKind::input, "duplicate Trust id " + trusts_[i]);
    }
}

double GeoMapping::weight(const std::string& ltla, const std::string& trust) const {
    const auto l = ltla_index(ltla);
    const auto t = trust_index(trust);
    if (l < 0 || t < 0) return 0.0;
    return weight(static_cast<std::size_t>(l), static_cast<std::size_t>(t));
}

std::vector<std::string> GeoMapping::flagged_ltlas() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ltlas_.size(); ++i) {
        if (zero_rows_[i]) out.push_back(ltlas_[i]);
    }
    return out;
}

std::ptrdiff_t GeoMapping::ltla_index(const std::string& id) const {
    auto it = ltla_pos_.find(id);
    return it == ltla_pos_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::ptrdiff_t GeoMapping::trust_index(const std::string& id) const {
    auto it = trust_pos_.find(id);
    return it == trust_pos_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

GeoMapping build_mapping(const std::vector<AdmissionCount>& records) {
    if (records.empty()) throw Error(ErrorKind::input, "mapping needs at least one admission record");

    std::set<std::string> ltla_set, trust_set;
    bool any_positive = false;
    for (const auto& r : records) {
        if (!(r.admissions >= 0.0)) {
            throw Error(ErrorKind::input, "negative admission count for " + r.ltla_id + " -> " + r.trust_id);
        }
        any_positive = any_positive || r.admissions > 0.0;
        ltla_set.insert(r.ltla_id);
        trust_set.insert(r.trust_id);
    }
    if (!any_positive) throw Error(ErrorKind::input, "mapping records contain no positive counts");

    std::vector<std::string> ltlas(ltla_set.begin(), ltla_set.end());
    std::vector<std::string> trusts(trust_set.begin(), trust_set.end());
    std::vector<double> counts(ltlas.size() * trusts.size(), 0.0);
    auto index_of = [](const std::vector<std::string>& v, const std::string& id) {
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), id) - v.begin());
    };
    for (const auto& r : records) {
        counts[index_of(ltlas, r.ltla_id) * trusts.size() + index_of(trusts, r.trust_id)] += r.admissions;
    }

    std::vector<bool> zero_rows(ltlas.size(), false);
    for (std::size_t l = 0; l < ltlas.size(); ++l) {
        double total = 0.0;
        for (std::size_t t = 0; t < trusts.size(); ++t) total += counts[l * trusts.size() + t];
        if (total == 0.0) {
            zero_rows[l] = true;
            continue;
        }
        for (std::size_t t = 0; t < trusts.size(); ++t) counts[l * trusts.size() + t] /= total;
    }
    return GeoMapping{std::move(ltlas), std::move(trusts), std::move(counts), std::move(zero_rows)};
}

MappedPanel apply_mapping(const Panel& ltla_panel, const GeoMapping& mapping, Execution exec) {
    if (ltla_panel.level() != GeoLevel::ltla) throw Error(ErrorKind::invalid_argument, "apply_mapping expects an LTLA panel");

    std::set<std::string> unknown;
    for (const auto& var : ltla_panel.variables()) {
        for (const auto& [geo, s] : ltla_panel.series(var)) {
            if (mapping.ltla_index(geo) < 0) unknown.insert(geo);
            if (!s.complete()) {
                throw Error(ErrorKind::invalid_argument, "series '" + var + "/" + geo + "' has missing values; impute first");
            }
        }
    }
    if (!unknown.empty()) {
        std::string msg = "geo ids unknown to mapping:";
        for (const auto& id : unknown) msg += " " + id;
        throw Error(ErrorKind::input, msg);
    }

    const std::size_t days = ltla_panel.length();
    const auto& trusts = mapping.trusts();
    const auto ntrust = static_cast<std::ptrdiff_t>(trusts.size());

    MappedPanel out{Panel{GeoLevel::trust, ltla_panel.start(), days}, {}};
    for (const auto& var : ltla_panel.variables()) {
        const auto& geos = ltla_panel.series(var);

        // Contributing LTLAs in mapping order, so the summation order is fixed.
        std::vector<std::pair<std::size_t, const TimeSeries*>> present;
        for (std::size_t l = 0; l < mapping.ltlas().size(); ++l) {
            auto it = geos.find(mapping.ltlas()[l]);
            if (it == geos.end()) {
                if (!mapping.zero_row(l)) out.absent_ltlas[var].push_back(mapping.ltlas()[l]);
            } else {
                present.emplace_back(l, &it->second);
            }
        }

        std::vector<std::vector<double>> trust_values(trusts.size(), std::vector<double>(days, 0.0));
        auto kernel = [&](std::ptrdiff_t t) {
            auto& acc = trust_values[static_cast<std::size_t>(t)];
            for (const auto& [l, series] : present) {
                const double w = mapping.weight(l, static_cast<std::size_t>(t));
                if (w == 0.0) continue;
                const auto vals = series->values();
                for (std::size_t d = 0; d < days; ++d) acc[d] += w * vals[d];
            }
        };
        if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t t = 0; t < ntrust; ++t) kernel(t);
        } else {
            for (std::ptrdiff_t t = 0; t < ntrust; ++t) kernel(t);
        }

        for (std::size_t t = 0; t < trusts.size(); ++t) {
            out.panel.insert(var, trusts[t], TimeSeries{ltla_panel.start(), std::move(trust_values[t])});
        }
    }
    return out;
}

std::map<std::string, double> weighted_population(const GeoMapping& mapping, const PopulationTable& pop) {
    std::vector<std::string> missing;
    for (const auto& l : mapping.ltlas()) {
        auto it = pop.find(l);
        if (it == pop.end()) {
            missing.push_back(l);
        } else if (!(it->second >= 0.0)) {
            throw Error(ErrorKind::input, "negative population for " + l);
        }
    }
    if (!missing.empty()) {
        std::string msg = "population missing for LTLA:";
        for (const auto& id : missing) msg += " " + id;
        throw Error(ErrorKind::input, msg);
    }

    std::map<std::string, double> out;
    for (std::size_t t = 0; t < mapping.trusts().size(); ++t) {
        double total = 0.0;
        for (std::size_t l = 0; l < mapping.ltlas().size(); ++l) {
            total += mapping.weight(l, t) * pop.at(mapping.ltlas()[l]);
        }
        out[mapping.trusts()[t]] = total;
    }
    return out;
}

} // namespace leadlag::geo

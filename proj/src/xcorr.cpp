#include "leadlag/xcorr.hpp"
#include "leadlag/error.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace leadlag::xcorr {

namespace {

struct Centered {
    std::vector<double> values;
    double norm = 0.0;
};

Centered center(std::span<const double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    Centered c;
    c.values.resize(v.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        c.values[i] = v[i] - mean;
        ss += c.values[i] * c.values[i];
    }
    c.norm = std::sqrt(ss);
    return c;
}

void check_inputs(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorKind::invalid_argument, "ccf inputs must have equal length");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error(ErrorKind::invalid_argument, "non-finite input");
    }
    if (is_constant(x) || is_constant(y)) throw Error(ErrorKind::degenerate, "zero variance");
}

void check_lead(std::size_t n, int lead) {
    if (static_cast<long>(std::labs(lead)) >= static_cast<long>(n) - 2) {
        throw Error(ErrorKind::insufficient, "lead " + std::to_string(lead) + " too large for series of length " +
                                                 std::to_string(n));
    }
}

double lead_value(const Centered& cx, const Centered& cy, int lead) {
    const auto n = static_cast<long>(cx.values.size());
    const long t0 = lead >= 0 ? 0 : -lead;
    const long t1 = lead >= 0 ? n - lead : n;
    double acc = 0.0;
    for (long t = t0; t < t1; ++t) acc += cx.values[static_cast<std::size_t>(t)] * cy.values[static_cast<std::size_t>(t + lead)];
    return acc / (cx.norm * cy.norm);
}

} // namespace

double ccf_at_lead(std::span<const double> x, std::span<const double> y, int lead) {
    check_inputs(x, y);
    check_lead(x.size(), lead);
    return lead_value(center(x), center(y), lead);
}

double ccf_at_delay(std::span<const double> x, std::span<const double> y, int delay) { return ccf_at_lead(x, y, -delay); }

CcfProfile ccf_profile(std::span<const double> x, std::span<const double> y, int window) {
    if (window < 0) throw Error(ErrorKind::invalid_argument, "ccf window must be >= 0");
    check_inputs(x, y);
    check_lead(x.size(), window);
    const auto cx = center(x);
    const auto cy = center(y);
    CcfProfile p;
    p.window = window;
    p.values.resize(static_cast<std::size_t>(2 * window + 1));
    for (int lead = -window; lead <= window; ++lead) p.values[static_cast<std::size_t>(lead + window)] = lead_value(cx, cy, lead);
    return p;
}

CcfProfile ccf_profile(const TimeSeries& x, const TimeSeries& y, int window) {
    if (x.start() != y.start() || x.size() != y.size()) throw Error(ErrorKind::invalid_argument, "series are not aligned");
    if (!x.complete() || !y.complete()) throw Error(ErrorKind::invalid_argument, "ccf requires complete series");
    return ccf_profile(x.values(), y.values(), window);
}

std::optional<OptimalLead> optimal_lead(const CcfProfile& profile) {
    std::optional<OptimalLead> best;
    auto better = [](const OptimalLead& cand, const OptimalLead& cur) {
        if (cand.value != cur.value) return cand.value > cur.value;
        const int ac = std::abs(cand.lead), ab = std::abs(cur.lead);
        if (ac != ab) return ac < ab;
        return cand.lead > cur.lead;
    };
    for (int lead = profile.min_lead(); lead <= profile.max_lead(); ++lead) {
        const double v = profile.at_lead(lead);
        if (!(v >= 0.0)) continue;
        const OptimalLead cand{lead, v};
        if (!best || better(cand, *best)) best = cand;
    }
    return best;
}

double ccf_at_horizon(std::span<const double> x, std::span<const double> y, int horizon) {
    return ccf_at_lead(x, y, horizon);
}

} // namespace leadlag::xcorr

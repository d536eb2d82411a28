#include "leadlag/dtw.hpp"
#include "dtw_steps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace leadlag::dtw {

Sequence::Sequence(std::span<const double> univariate)
    : length_(univariate.size()), dims_(1), data_(univariate.begin(), univariate.end()) {}

Sequence::Sequence(std::size_t length, std::size_t dims, std::vector<double> row_major)
    : length_(length), dims_(dims), data_(std::move(row_major)) {
    if (data_.size() != length_ * dims_) throw Error(ErrorKind::invalid_argument, "sequence data size mismatch");
}

Sequence Sequence::from_columns(const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) throw Error(ErrorKind::invalid_argument, "sequence needs at least one column");
    const std::size_t len = columns.front().size();
    std::vector<double> data(len * columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != len) throw Error(ErrorKind::invalid_argument, "sequence columns differ in length");
        for (std::size_t i = 0; i < len; ++i) data[i * columns.size() + c] = columns[c][i];
    }
    return Sequence{len, columns.size(), std::move(data)};
}

Sequence Sequence::permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != dims_) throw Error(ErrorKind::invalid_argument, "permutation size mismatch");
    std::vector<double> data(data_.size());
    for (std::size_t i = 0; i < length_; ++i) {
        for (std::size_t k = 0; k < dims_; ++k) data[i * dims_ + k] = data_[i * dims_ + perm[k]];
    }
    return Sequence{length_, dims_, std::move(data)};
}

double local_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::invalid_argument, "local_distance dimension mismatch");
    if (a.size() == 1) return std::fabs(a[0] - b[0]);
    double ss = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double d = a[c] - b[c];
        ss += d * d;
    }
    return std::sqrt(ss);
}

Alignment dtw_align(const AlignmentQuery& q) {
    detail::validate(q);
    const auto n = static_cast<long>(q.query.length());
    const auto m = static_cast<long>(q.reference.length());
    constexpr double inf = std::numeric_limits<double>::infinity();
    constexpr std::int8_t none = -1;

    // Only band cells are stored: row i covers j in [i - w, i + w].
    const long w = q.window;
    const long width = 2 * w + 1;
    std::vector<double> cost(static_cast<std::size_t>(n * width), inf);
    std::vector<std::int8_t> move_of(static_cast<std::size_t>(n * width), none);
    auto slot = [&](long i, long j) { return static_cast<std::size_t>(i * width + (j - i + w)); };
    auto g = [&](long i, long j) -> double {
        if (i == -1) return 0.0; // virtual open-begin row
        return cost[slot(i, j)];
    };

    if (!q.open_begin) cost[slot(0, 0)] = local_distance(q.query.row(0), q.reference.row(0));

    const auto& moves = detail::asymmetric_p2;
    for (long i = 0; i < n; ++i) {
        const long jlo = std::max(0L, i - w);
        const long jhi = std::min(m - 1, i + w);
        for (long j = jlo; j <= jhi; ++j) {
            double best = cost[slot(i, j)];
            std::int8_t best_move = none;
            for (std::size_t k = 0; k < moves.size(); ++k) {
                const auto& mv = moves[k];
                if (!detail::admissible(mv, i, j, n, m, q.window, q.open_begin)) continue;
                const double start = g(i - mv.start_di, j - mv.start_dj);
                if (start == inf) continue;
                const double total = start + detail::move_cost(mv, q.query, q.reference, i, j);
                if (total < best) {
                    best = total;
                    best_move = static_cast<std::int8_t>(k);
                }
            }
            cost[slot(i, j)] = best;
            move_of[slot(i, j)] = best_move;
        }
    }

    // Choose the end cell.
    long end_j = -1;
    double end_cost = inf;
    if (q.open_end) {
        for (long j = std::max(0L, n - 1 - w); j <= std::min(m - 1, n - 1 + w); ++j) {
            const double c = cost[slot(n - 1, j)];
            if (c == inf) continue;
            const bool better = c < end_cost ||
                                (c == end_cost && std::labs(j - (n - 1)) < std::labs(end_j - (n - 1)));
            if (better) {
                end_cost = c;
                end_j = j;
            }
        }
    } else if (detail::in_band(n - 1, m - 1, q.window)) {
        end_j = m - 1;
        end_cost = cost[slot(n - 1, m - 1)];
    }
    if (end_j < 0 || end_cost == inf) throw Error(ErrorKind::insufficient, "no admissible path");

    Alignment out;
    out.distance = end_cost;
    out.query_length = static_cast<std::size_t>(n);
    out.reference_length = static_cast<std::size_t>(m);
    long i = n - 1, j = end_j;
    for (;;) {
        const std::int8_t k = move_of[slot(i, j)];
        if (k == none) { // closed-begin origin
            out.path.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            break;
        }
        const auto& mv = moves[static_cast<std::size_t>(k)];
        for (int c = mv.ncells - 1; c >= 0; --c) {
            const auto& cell = mv.cells[static_cast<std::size_t>(c)];
            out.path.emplace_back(static_cast<std::size_t>(i - cell.di), static_cast<std::size_t>(j - cell.dj));
        }
        i -= mv.start_di;
        j -= mv.start_dj;
        if (i < 0) break;
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

namespace {

struct Search {
    const AlignmentQuery& q;
    long n, m;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::size_t, std::size_t>> path, best_path;

    Search(const AlignmentQuery& query, long rows, long cols) : q(query), n(rows), m(cols) {}

    void extend(long i, long j, double acc) {
        if (i == n - 1) {
            if ((q.open_end || j == m - 1) && acc < best) {
                best = acc;
                best_path = path;
            }
            return;
        }
        for (const auto& mv : detail::asymmetric_p2) {
            const long ei = i + mv.start_di, ej = j + mv.start_dj;
            if (ei >= n || ej >= m || ej < 0) continue;
            if (!detail::admissible(mv, ei, ej, n, m, q.window, q.open_begin)) continue;
            const std::size_t mark = path.size();
            for (int c = 0; c < mv.ncells; ++c) {
                const auto& cell = mv.cells[static_cast<std::size_t>(c)];
                path.emplace_back(static_cast<std::size_t>(ei - cell.di), static_cast<std::size_t>(ej - cell.dj));
            }
            extend(ei, ej, acc + detail::move_cost(mv, q.query, q.reference, ei, ej));
            path.resize(mark);
        }
    }
};

} // namespace

Alignment brute_force_dtw(const AlignmentQuery& q) {
    detail::validate(q);
    if (q.query.length() > brute_force_limit || q.reference.length() > brute_force_limit) {
        throw Error(ErrorKind::invalid_argument, "oracle scale exceeded");
    }
    Search s{q, static_cast<long>(q.query.length()), static_cast<long>(q.reference.length())};
    if (q.open_begin) {
        for (long j0 = -1; j0 < s.m; ++j0) s.extend(-1, j0, 0.0);
    } else {
        s.path.emplace_back(0, 0);
        s.extend(0, 0, local_distance(q.query.row(0), q.reference.row(0)));
    }
    if (s.best == std::numeric_limits<double>::infinity()) {
        throw Error(ErrorKind::insufficient, "no admissible path");
    }
    Alignment out;
    out.path = std::move(s.best_path);
    out.distance = s.best;
    out.query_length = q.query.length();
    out.reference_length = q.reference.length();
    return out;
}

std::vector<double> lead_times_from_path(const Alignment& a) {
    std::vector<std::vector<std::size_t>> matches(a.query_length);
    for (const auto& [i, j] : a.path) matches[i].push_back(j);
    std::vector<double> leads(a.query_length, 0.0);
    for (std::size_t i = 0; i < a.query_length; ++i) {
        auto& js = matches[i];
        if (js.empty()) throw Error(ErrorKind::invalid_argument, "query index " + std::to_string(i) + " is unmatched");
        std::sort(js.begin(), js.end());
        const std::size_t k = js.size();
        const double median = k % 2 == 1 ? static_cast<double>(js[k / 2])
                                         : 0.5 * (static_cast<double>(js[k / 2 - 1]) + static_cast<double>(js[k / 2]));
        leads[i] = median - static_cast<double>(i);
    }
    return leads;
}

double normalized_distance(const Alignment& a) {
    if (a.query_length == 0) throw Error(ErrorKind::invalid_argument, "empty alignment");
    return a.distance / static_cast<double>(a.query_length);
}

} // namespace leadlag::dtw

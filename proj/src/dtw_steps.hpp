#pragma once

// Step-pattern tables shared by the DP and the exhaustive oracle so both sum
// identical floating-point terms in identical order.

#include "leadlag/dtw.hpp"
#include "leadlag/error.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

namespace leadlag::dtw::detail {

struct Cell {
    int di; // offset back from the end cell
    int dj;
    double weight;
};

struct Move {
    int start_di;
    int start_dj;
    int ncells;
    std::array<Cell, 3> cells; // in path order, last one is (0, 0)
};

inline constexpr double two_thirds = 2.0 / 3.0;

// Diagonal first: the DP keeps the earliest move on exact ties, so flat
// stretches preserve the current offset.
inline constexpr std::array<Move, 3> asymmetric_p2{{
    {1, 1, 1, {{{0, 0, 1.0}, {0, 0, 0.0}, {0, 0, 0.0}}}},
    {2, 3, 3, {{{1, 2, two_thirds}, {0, 1, two_thirds}, {0, 0, two_thirds}}}},
    {3, 2, 3, {{{2, 1, 1.0}, {1, 0, 1.0}, {0, 0, 1.0}}}},
}};

inline bool in_band(long i, long j, int window) { return std::labs(j - i) <= window; }

/// Validates every real cell of `mv` ending at (i, j). The start may be the
/// virtual row i = -1 (open begin) with j >= -1.
inline bool admissible(const Move& mv, long i, long j, long n, long m, int window, bool open_begin) {
    const long si = i - mv.start_di, sj = j - mv.start_dj;
    if (si < 0) {
        if (!open_begin || si != -1 || sj < -1) return false;
    } else if (sj < 0 || !in_band(si, sj, window)) {
        return false;
    }
    for (int c = 0; c < mv.ncells; ++c) {
        const long ci = i - mv.cells[static_cast<std::size_t>(c)].di;
        const long cj = j - mv.cells[static_cast<std::size_t>(c)].dj;
        if (ci < 0 || cj < 0 || ci >= n || cj >= m || !in_band(ci, cj, window)) return false;
    }
    return true;
}

inline double move_cost(const Move& mv, const Sequence& q, const Sequence& r, long i, long j) {
    double acc = 0.0;
    for (int c = 0; c < mv.ncells; ++c) {
        const auto& cell = mv.cells[static_cast<std::size_t>(c)];
        acc += cell.weight * local_distance(q.row(static_cast<std::size_t>(i - cell.di)),
                                            r.row(static_cast<std::size_t>(j - cell.dj)));
    }
    return acc;
}

inline void validate(const AlignmentQuery& q) {
    if (q.query.length() < 4 || q.reference.length() < 4) {
        throw Error(ErrorKind::insufficient, "dtw needs sequences of at least 4 samples");
    }
    if (q.query.dims() != q.reference.dims() || q.query.dims() == 0) {
        throw Error(ErrorKind::invalid_argument, "dtw query and reference must have the same columns");
    }
    if (q.window < 1) throw Error(ErrorKind::invalid_argument, "dtw window must be >= 1");
    for (const Sequence* s : {&q.query, &q.reference}) {
        for (std::size_t i = 0; i < s->length(); ++i) {
            for (double v : s->row(i)) {
                if (std::isnan(v) || std::isinf(v)) throw Error(ErrorKind::invalid_argument, "NaN in dtw input");
            }
        }
    }
}

} // namespace leadlag::dtw::detail

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace leadlag::dtw {

/// Row-major time x dimension matrix. One column per Trust in the
/// multivariate case, a single column otherwise.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::span<const double> univariate);
    Sequence(std::size_t length, std::size_t dims, std::vector<double> row_major);
    static Sequence from_columns(const std::vector<std::vector<double>>& columns);

    [[nodiscard]] std::size_t length() const { return length_; }
    [[nodiscard]] std::size_t dims() const { return dims_; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const { return {data_.data() + i * dims_, dims_}; }

    /// Same sequence with columns reordered: column k of the result is column perm[k].
    [[nodiscard]] Sequence permuted(const std::vector<std::size_t>& perm) const;

private:
    std::size_t length_ = 0;
    std::size_t dims_ = 0;
    std::vector<double> data_;
};

/// Slope-constrained asymmetric pattern with P = 2 (Sakoe-Chiba). Each local
/// move is a chain of cells ending at the current cell; the weights of one
/// chain sum to its query advance, so costs normalise by query length:
///
///   from (i-2, j-3): (i-1, j-2), (i, j-1), (i, j) each weighted 2/3
///   from (i-1, j-1): (i, j) weighted 1
///   from (i-3, j-2): (i-2, j-1), (i-1, j), (i, j) each weighted 1
enum class StepPattern { asymmetric_p2 };

struct AlignmentQuery {
    Sequence query;     // indicator
    Sequence reference; // admissions
    int window = 35;    // Sakoe-Chiba half-width on absolute indices: |j - i| <= window
    StepPattern pattern = StepPattern::asymmetric_p2;
    bool open_begin = true;
    bool open_end = true;
};

struct Alignment {
    std::vector<std::pair<std::size_t, std::size_t>> path; // (query i, reference j), non-decreasing in both
    double distance = 0.0;
    std::size_t query_length = 0;
    std::size_t reference_length = 0;
};

/// Euclidean distance between two equally sized vectors.
[[nodiscard]] double local_distance(std::span<const double> a, std::span<const double> b);

/// Dynamic-programming alignment. Every query index is consumed; with open
/// ends the path may begin and finish at any reference index.
[[nodiscard]] Alignment dtw_align(const AlignmentQuery& q);

/// Exhaustive search over every admissible path. Only for sequences of at most
/// 12 samples; used to verify dtw_align.
[[nodiscard]] Alignment brute_force_dtw(const AlignmentQuery& q);

inline constexpr std::size_t brute_force_limit = 12;

/// Per query index: median matched reference index minus the query index.
/// Positive means the indicator runs ahead of admissions.
[[nodiscard]] std::vector<double> lead_times_from_path(const Alignment& a);

/// Accumulated cost over query length.
[[nodiscard]] double normalized_distance(const Alignment& a);

} // namespace leadlag::dtw

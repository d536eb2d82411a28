#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace leadlag::linalg {

/// Dense column-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    [[nodiscard]] std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    [[nodiscard]] std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class AliasPolicy {
    reject, // throw Error(degenerate, "collinear design")
    drop,   // zero the coefficient of any column in the span of earlier columns
};

struct LeastSquaresFit {
    std::vector<double> coefficients; // one per input column; dropped columns are 0
    std::vector<bool> kept;
    std::size_t rank = 0;
    double rss = 0.0;
};

/// Householder QR least squares, columns processed in input order. A column
/// whose residual norm after projection onto the kept columns falls below
/// `alias_tol` times its own norm is treated as aliased.
[[nodiscard]] LeastSquaresFit least_squares(const Matrix& design, std::span<const double> response,
                                            AliasPolicy policy, double alias_tol = 1e-10);

} // namespace leadlag::linalg

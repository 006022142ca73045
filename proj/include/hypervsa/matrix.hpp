#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hypervsa {

// Minimal dense row-major matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const double& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    [[nodiscard]] std::span<const double> data() const { return a_; }
    [[nodiscard]] std::span<double> data() { return a_; }

    [[nodiscard]] double max_asymmetry() const;
    [[nodiscard]] double frobenius_norm() const;
    [[nodiscard]] double frobenius_distance(const Matrix& other) const;

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

// Symmetric unit-diagonal matrix of desired pairwise similarities.
struct SimilarityTarget {
    std::size_t n = 0;
    Matrix entries;

    // Validates symmetry (1e-12), unit diagonal, and entries within [-1, 1].
    static SimilarityTarget from_matrix(Matrix m);

    // Unit-diagonal matrix with every off-diagonal entry equal to `off`.
    static SimilarityTarget constant_off_diagonal(std::size_t n, double off);

    static SimilarityTarget identity_similarity(std::size_t n);
};

}  // namespace hypervsa

#include "hypervsa/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hypervsa/errors.hpp"

namespace hypervsa {

double Matrix::max_asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = i + 1; j < cols_; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return worst;
}

double Matrix::frobenius_norm() const {
    double sum = 0.0;
    for (double v : a_) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

double Matrix::frobenius_distance(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("frobenius_distance: shape mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        const double d = a_[i] - other.a_[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

SimilarityTarget SimilarityTarget::from_matrix(Matrix m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw data_error("similarity target must be a nonempty square matrix");
    }
    if (m.max_asymmetry() > 1e-12) {
        throw data_error("similarity target is not symmetric within 1e-12");
    }
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(m(i, i) - 1.0) > 1e-12) {
            throw data_error("similarity target diagonal must be 1 (row " + std::to_string(i) + ")");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) < -1.0 - 1e-12 || m(i, j) > 1.0 + 1e-12) {
                throw data_error("similarity target entries must lie in [-1, 1]");
            }
        }
    }
    return SimilarityTarget{n, std::move(m)};
}

SimilarityTarget SimilarityTarget::constant_off_diagonal(std::size_t n, double off) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = (i == j) ? 1.0 : off;
        }
    }
    return from_matrix(std::move(m));
}

SimilarityTarget SimilarityTarget::identity_similarity(std::size_t n) {
    return constant_off_diagonal(n, 0.0);
}

}  // namespace hypervsa

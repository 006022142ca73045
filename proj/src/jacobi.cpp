#include "hypervsa/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hypervsa/errors.hpp"

namespace hypervsa {

namespace {

double off_diagonal_frobenius(const Matrix& a) {
    const std::size_t n = a.rows();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sum += 2.0 * a(i, j) * a(i, j);
        }
    }
    return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigendecompose(const Matrix& s, double off_tol, int max_sweeps) {
    if (s.rows() != s.cols() || s.rows() == 0) {
        throw std::invalid_argument("jacobi: square matrix required");
    }
    if (s.max_asymmetry() > 1e-8) {
        throw numeric_error("jacobi: input asymmetric beyond 1e-8");
    }
    const std::size_t n = s.rows();
    Matrix a = s;
    // Symmetrize exactly so rotations see a(i,j) == a(j,i).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    Matrix vecs = Matrix::identity(n);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_frobenius(a) <= off_tol) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                // Stable tangent of the rotation angle.
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                     : -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vecs(k, p);
                    const double vkq = vecs(k, q);
                    vecs(k, p) = c * vkp - sn * vkq;
                    vecs(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = a(i, i);
    }
    // Sort descending, permuting eigenvector columns alongside.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = values[order[c]];
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, c) = vecs(r, order[c]);
        }
    }
    return out;
}

}  // namespace hypervsa

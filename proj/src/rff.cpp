#include "hypervsa/rff.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hypervsa/errors.hpp"
#include "hypervsa/jacobi.hpp"
#include "hypervsa/ops.hpp"

namespace hypervsa::rff {

Matrix GaussianFactor::loading() const {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            a(i, k) = u(i, k) * std::sqrt(lambda[k]);
        }
    }
    return a;
}

Matrix GaussianFactor::reconstruction() const {
    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                sum += u(i, k) * lambda[k] * u(j, k);
            }
            r(i, j) = sum;
        }
    }
    return r;
}

SimilarityTarget rbf_target(std::span<const double> values, double sigma,
                            std::optional<std::pair<double, double>> rescale) {
    if (sigma <= 0.0) {
        throw std::invalid_argument("rbf_target: sigma must be positive");
    }
    if (values.empty()) {
        throw std::invalid_argument("rbf_target: value list must be nonempty");
    }
    if (rescale) {
        const auto [lo, hi] = *rescale;
        if (lo < -1.0 || hi > 1.0 || lo >= hi) {
            throw std::invalid_argument("rbf_target: rescale bounds must satisfy -1 <= lo < hi <= 1");
        }
    }
    const std::size_t n = values.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = values[i] - values[j];
            const double v = std::exp(-d * d / (2.0 * sigma * sigma));
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    if (rescale && n > 1) {
        const auto [lo, hi] = *rescale;
        double omin = 1.0;
        double omax = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    omin = std::min(omin, m(i, j));
                    omax = std::max(omax, m(i, j));
                }
            }
        }
        const double span = omax - omin;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    m(i, j) = (span < 1e-15) ? 0.5 * (lo + hi)
                                             : lo + (m(i, j) - omin) * (hi - lo) / span;
                }
            }
        }
    }
    return SimilarityTarget::from_matrix(std::move(m));
}

Matrix sin_transform(const SimilarityTarget& m) {
    Matrix out(m.n, m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            out(i, j) = std::sin(0.5 * std::numbers::pi * m.entries(i, j));
        }
    }
    for (std::size_t i = 0; i < m.n; ++i) {
        out(i, i) = 1.0;
    }
    return out;
}

GaussianFactor psd_factor(const Matrix& s) {
    if (s.rows() != s.cols() || s.rows() == 0) {
        throw std::invalid_argument("psd_factor: square matrix required");
    }
    if (s.max_asymmetry() > 1e-8) {
        throw numeric_error("psd_factor: input asymmetric beyond 1e-8");
    }
    SymmetricEigen eig = jacobi_eigendecompose(s);
    GaussianFactor f;
    f.n = s.rows();
    f.u = std::move(eig.vectors);
    f.lambda = std::move(eig.values);
    double peak = 0.0;
    for (double l : f.lambda) {
        peak = std::max(peak, std::abs(l));
    }
    // Eigenvalues within roundoff of zero are zero, not clipped mass.
    const double snap = 1e-12 * std::max(1.0, peak);
    for (std::size_t i = 0; i < f.n; ++i) {
        f.trace += s(i, i);
        if (std::abs(f.lambda[i]) <= snap) {
            f.lambda[i] = 0.0;
        } else if (f.lambda[i] < 0.0) {
            f.clipped_mass += -f.lambda[i];
            f.lambda[i] = 0.0;
        }
    }
    return f;
}

double arcsine_moment(double rho) {
    if (rho < -1.0 || rho > 1.0) {
        throw std::invalid_argument("arcsine_moment: |rho| must be <= 1");
    }
    return (2.0 / std::numbers::pi) * std::asin(rho);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

std::vector<BinaryHypervector> sample_signs_from_loading(const Matrix& loading, std::size_t dim,
                                                         SeededRng rng) {
    const std::size_t n = loading.rows();
    std::vector<BinaryHypervector> vecs(n, BinaryHypervector(dim));
    const std::size_t nwords = vecs.front().word_count();
    // One Gaussian column per output dimension, one derived stream per column.
    // Work is blocked by 64-column words so each word has a single writer;
    // the stream schedule depends only on the column index, so results are
    // bitwise independent of the thread count.
#pragma omp parallel for schedule(static)
    for (long long w = 0; w < static_cast<long long>(nwords); ++w) {
        std::uint64_t acc[1024] = {0};
        double x[1024];
        const std::size_t col_begin = static_cast<std::size_t>(w) * 64;
        const std::size_t col_end = std::min(col_begin + 64, dim);
        for (std::size_t d = col_begin; d < col_end; ++d) {
            SeededRng col_rng = rng.derive(d);
            for (std::size_t k = 0; k < n; ++k) {
                x[k] = col_rng.next_gaussian();
            }
            const std::uint64_t mask = 1ULL << (d % 64);
            for (std::size_t i = 0; i < n; ++i) {
                double sum = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    sum += loading(i, k) * x[k];
                }
                if (sum >= 0.0) {  // sgn(0) := +1
                    acc[i] |= mask;
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            vecs[i].words()[static_cast<std::size_t>(w)] = acc[i];
        }
    }
    return vecs;
}

std::vector<CyclicHypervector> sample_quantiles_from_loading(const Matrix& loading,
                                                             std::span<const double> row_std,
                                                             int order, std::size_t dim,
                                                             SeededRng rng) {
    const std::size_t n = loading.rows();
    std::vector<CyclicHypervector> vecs(n, CyclicHypervector(dim, order));
#pragma omp parallel for schedule(static)
    for (long long d = 0; d < static_cast<long long>(dim); ++d) {
        SeededRng col_rng = rng.derive(static_cast<std::uint64_t>(d));
        double x[1024];
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = col_rng.next_gaussian();
        }
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                sum += loading(i, k) * x[k];
            }
            const double z = sum / row_std[i];
            auto cell = static_cast<int>(std::floor(static_cast<double>(order) * normal_cdf(z)));
            cell = std::min(cell, order - 1);
            cell = std::max(cell, 0);
            vecs[i].elements()[static_cast<std::size_t>(d)] = static_cast<std::uint8_t>(cell);
        }
    }
    return vecs;
}

namespace {

GaussianFactor factor_of(const SimilarityTarget& m) {
    return psd_factor(sin_transform(m));
}

}  // namespace

CorrelatedBasis sample_correlated_binary(const SimilarityTarget& m, std::size_t dim,
                                         SeededRng rng) {
    if (dim == 0) {
        throw std::invalid_argument("sample_correlated_binary: dim must be >= 1");
    }
    if (m.n > 1024) {
        throw std::invalid_argument("sample_correlated_binary: at most 1024 entities supported");
    }
    const GaussianFactor f = factor_of(m);
    CorrelatedBasis basis;
    basis.family = Family::Binary;
    basis.order = 0;
    basis.dim = dim;
    basis.target = m;
    basis.seed = rng.master_seed();
    basis.clipped_ratio = f.trace > 0.0 ? f.clipped_mass / f.trace : 0.0;
    basis.binary = sample_signs_from_loading(f.loading(), dim, rng);
    return basis;
}

CorrelatedBasis sample_correlated_cyclic(const SimilarityTarget& m, std::size_t dim, int order,
                                         SeededRng rng) {
    if (dim == 0) {
        throw std::invalid_argument("sample_correlated_cyclic: dim must be >= 1");
    }
    if (order < 2) {
        throw std::invalid_argument("sample_correlated_cyclic: order must be >= 2");
    }
    if (m.n > 1024) {
        throw std::invalid_argument("sample_correlated_cyclic: at most 1024 entities supported");
    }
    const GaussianFactor f = factor_of(m);
    const Matrix a = f.loading();
    std::vector<double> row_std(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < m.n; ++k) {
            sum += a(i, k) * a(i, k);
        }
        row_std[i] = std::sqrt(sum);
        if (!(row_std[i] > 0.0)) {
            throw numeric_error("sample_correlated_cyclic: degenerate target, zero variance at entity " +
                                std::to_string(i));
        }
    }
    CorrelatedBasis basis;
    basis.family = Family::Cyclic;
    basis.order = order;
    basis.dim = dim;
    basis.target = m;
    basis.seed = rng.master_seed();
    basis.clipped_ratio = f.trace > 0.0 ? f.clipped_mass / f.trace : 0.0;
    basis.cyclic = sample_quantiles_from_loading(a, row_std, order, dim, rng);
    return basis;
}

CorrelatedBasis random_basis(Family family, int order, std::size_t count, std::size_t dim,
                             SeededRng rng) {
    if (count == 0) {
        throw std::invalid_argument("random_basis: count must be >= 1");
    }
    CorrelatedBasis basis;
    basis.family = family;
    basis.order = family == Family::Binary ? 0 : order;
    basis.dim = dim;
    basis.target = SimilarityTarget::identity_similarity(count);
    basis.seed = rng.master_seed();
    if (family == Family::Binary) {
        basis.binary.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            basis.binary.push_back(random_binary(dim, 0.5, rng.derive(i)));
        }
    } else {
        basis.cyclic.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            basis.cyclic.push_back(random_cyclic(dim, order, rng.derive(i)));
        }
    }
    return basis;
}

Matrix empirical_similarity(const CorrelatedBasis& basis) {
    if (basis.family == Family::Cyclic) {
        return empirical_similarity(basis, CyclicSimilaritySpec(basis.order));
    }
    const std::size_t n = basis.size();
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = similarity(basis.binary[i], basis.binary[j]);
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

Matrix empirical_similarity(const CorrelatedBasis& basis, const CyclicSimilaritySpec& spec) {
    if (basis.family == Family::Binary) {
        return empirical_similarity(basis);
    }
    const std::size_t n = basis.size();
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = similarity(basis.cyclic[i], basis.cyclic[j], spec);
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

}  // namespace hypervsa::rff

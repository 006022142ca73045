#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hypervsa/binary_hv.hpp"
#include "hypervsa/cyclic_hv.hpp"
#include "hypervsa/matrix.hpp"
#include "hypervsa/rng.hpp"

namespace hypervsa::rff {

enum class Family : std::uint8_t { Binary = 0, Cyclic = 1 };

// Clipped Gaussian factor of a sin-transformed target: the eigendecomposition
// with negative eigenvalues zeroed. Reconstruction is the Frobenius-nearest
// PSD matrix.
struct GaussianFactor {
    std::size_t n = 0;
    Matrix u;                       // n x n orthonormal columns
    std::vector<double> lambda;     // clipped eigenvalues, >= 0, descending
    double clipped_mass = 0.0;      // sum of |negative eigenvalues| removed
    double trace = 0.0;             // trace of the input matrix

    // U * diag(sqrt(lambda)).
    [[nodiscard]] Matrix loading() const;
    // U * diag(lambda) * U^T.
    [[nodiscard]] Matrix reconstruction() const;
    // Diagnostic: clipped mass above 5% of the trace means the target sits
    // well outside what sign sampling can realize.
    [[nodiscard]] bool far_from_binary_expressible() const {
        return clipped_mass > 0.05 * trace;
    }
};

// Ordered family of basis hypervectors realizing a similarity target, plus
// the provenance needed to reproduce it.
struct CorrelatedBasis {
    Family family = Family::Binary;
    int order = 0;  // 0 for binary
    std::size_t dim = 0;
    std::vector<BinaryHypervector> binary;
    std::vector<CyclicHypervector> cyclic;
    SimilarityTarget target;
    std::uint64_t seed = 0;
    // clipped_mass / trace of the factored target; above 0.05 the target is
    // far from what sign sampling can realize and callers should warn.
    double clipped_ratio = 0.0;

    [[nodiscard]] std::size_t size() const {
        return family == Family::Binary ? binary.size() : cyclic.size();
    }
};

// M_ij = exp(-(v_i - v_j)^2 / (2 sigma^2)); optional affine remap of the
// off-diagonal range onto [lo, hi] with the diagonal reset to 1.
SimilarityTarget rbf_target(std::span<const double> values, double sigma,
                            std::optional<std::pair<double, double>> rescale = std::nullopt);

// Elementwise sin((pi/2) * M).
Matrix sin_transform(const SimilarityTarget& m);

// Eigendecompose and clip negative eigenvalues to zero.
GaussianFactor psd_factor(const Matrix& s);

// sgn(U Lambda_+^{1/2} X) with X an n x D standard Gaussian, one derived
// stream per column; sgn(0) := +1.
CorrelatedBasis sample_correlated_binary(const SimilarityTarget& m, std::size_t dim, SeededRng rng);

// As the binary sampler, but each Gaussian row is standardized by its own
// clipped-factor standard deviation and pushed through floor(n * Phi(z)).
CorrelatedBasis sample_correlated_cyclic(const SimilarityTarget& m, std::size_t dim, int order,
                                         SeededRng rng);

// i.i.d. basis (the classic initialization); target recorded as identity.
CorrelatedBasis random_basis(Family family, int order, std::size_t count, std::size_t dim,
                             SeededRng rng);

// (2/pi) * arcsin(rho).
double arcsine_moment(double rho);

// Pairwise similarity matrix of a basis (cyclic uses the default spec unless
// one is supplied).
Matrix empirical_similarity(const CorrelatedBasis& basis);
Matrix empirical_similarity(const CorrelatedBasis& basis, const CyclicSimilaritySpec& spec);

// Kernels behind the samplers, exposed for the test oracles: signs (or
// quantile cells) of loading-matrix images of per-column Gaussian draws.
std::vector<BinaryHypervector> sample_signs_from_loading(const Matrix& loading, std::size_t dim,
                                                         SeededRng rng);
std::vector<CyclicHypervector> sample_quantiles_from_loading(const Matrix& loading,
                                                             std::span<const double> row_std,
                                                             int order, std::size_t dim,
                                                             SeededRng rng);

// Standard normal CDF.
double normal_cdf(double z);

}  // namespace hypervsa::rff

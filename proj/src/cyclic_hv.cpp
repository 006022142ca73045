#include "hypervsa/cyclic_hv.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypervsa {

CyclicHypervector::CyclicHypervector(std::size_t dim, int order)
    : dim_(dim), order_(order), elems_(dim, 0) {
    if (dim == 0) {
        throw std::invalid_argument("CyclicHypervector: dim must be positive");
    }
    if (order < 2 || order > 256) {
        throw std::invalid_argument("CyclicHypervector: order must be in [2, 256]");
    }
}

CyclicSimilaritySpec::CyclicSimilaritySpec(int order) : order_(order) {
    if (order < 2 || order > 256) {
        throw std::invalid_argument("CyclicSimilaritySpec: order must be in [2, 256]");
    }
    alpha_.assign(static_cast<std::size_t>(order - 1), 0.0);
    alpha_.front() = 1.0;  // character k = 1
    if (order > 2) {
        alpha_.back() = 1.0;  // conjugate character k = n-1
    }
    build_table();
}

CyclicSimilaritySpec::CyclicSimilaritySpec(int order, std::span<const double> alpha)
    : order_(order), alpha_(alpha.begin(), alpha.end()) {
    if (order < 2 || order > 256) {
        throw std::invalid_argument("CyclicSimilaritySpec: order must be in [2, 256]");
    }
    if (alpha_.size() != static_cast<std::size_t>(order - 1)) {
        throw std::invalid_argument("CyclicSimilaritySpec: alpha must have n-1 weights");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < alpha_.size(); ++k) {
        if (alpha_[k] < 0.0) {
            throw std::invalid_argument("CyclicSimilaritySpec: alpha weights must be nonnegative");
        }
        const std::size_t mirror = alpha_.size() - 1 - k;
        if (std::abs(alpha_[k] - alpha_[mirror]) > 1e-12) {
            throw std::invalid_argument(
                "CyclicSimilaritySpec: alpha(k) must equal alpha(n-k), violated at k=" +
                std::to_string(k + 1));
        }
        total += alpha_[k];
    }
    if (total <= 0.0) {
        throw std::invalid_argument("CyclicSimilaritySpec: alpha must have positive total mass");
    }
    build_table();
}

void CyclicSimilaritySpec::build_table() {
    const int n = order_;
    double total = 0.0;
    for (double a : alpha_) {
        total += a;
    }
    table_.assign(static_cast<std::size_t>(n), 0.0);
    // Fill d <= n/2 then mirror, so table[d] == table[n-d] holds exactly.
    for (int d = 0; d <= n / 2; ++d) {
        double s = 0.0;
        for (int k = 1; k < n; ++k) {
            s += alpha_[static_cast<std::size_t>(k - 1)] *
                 std::cos(2.0 * std::numbers::pi * static_cast<double>(d) * k / n);
        }
        table_[static_cast<std::size_t>(d)] = s / total;
    }
    for (int d = n / 2 + 1; d < n; ++d) {
        table_[static_cast<std::size_t>(d)] = table_[static_cast<std::size_t>(n - d)];
    }
    table_[0] = 1.0;
}

}  // namespace hypervsa

#include "hypervsa/cdc.hpp"

#include <cmath>
#include <stdexcept>

namespace hypervsa::cdc {

namespace {

CdcResult make_result(double depth) {
    return CdcResult{depth, static_cast<long long>(std::floor(depth + 0.5))};
}

}  // namespace

void CdcQuery::validate() const {
    if (n_features < 2.0) {
        throw std::invalid_argument("cdc: feature count must be >= 2");
    }
    if (dim < 2.0) {
        throw std::invalid_argument("cdc: hypervector dimension must be >= 2");
    }
    if (group_bits < 1 || group_bits > 8) {
        throw std::invalid_argument("cdc: group bits must be in [1, 8]");
    }
}

CdcResult cdc_binary_hdc(const CdcQuery& q) {
    q.validate();
    const double ld = std::log2(q.dim);
    return make_result(std::log2(q.n_features) + 1.0 + 1.5 * ld * (1.0 + ld));
}

CdcResult cdc_group(const CdcQuery& q) {
    q.validate();
    return make_result(3.0 * q.group_bits * std::log2(q.n_features) + 24.0 * std::log2(q.dim));
}

CdcResult cdc_perceptron(const CdcQuery& q) {
    q.validate();
    const double ld = std::log2(q.dim);
    return make_result(91.0 + 96.0 * std::log2(q.n_features) + 1.5 * ld * (1.0 + ld));
}

}  // namespace hypervsa::cdc

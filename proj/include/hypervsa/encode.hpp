#pragma once

#include <span>
#include <vector>

#include "hypervsa/binary_hv.hpp"
#include "hypervsa/cyclic_hv.hpp"
#include "hypervsa/dataset.hpp"
#include "hypervsa/rff.hpp"

namespace hypervsa::learn {

// Round-half-up quantization of [-1, 1] features onto {0, ..., 2^bits - 1};
// out-of-range inputs are clamped (that is the contract, not an error).
std::vector<int> quantize_features(std::span<const double> x, int bits = 8);

// Basis lookup plus the positional shift schedule (feature j rotates by j).
struct Encoder {
    rff::CorrelatedBasis basis;
    std::size_t num_features = 0;
};

struct EncodedDataset {
    rff::Family family = rff::Family::Binary;
    int order = 0;
    std::size_t dim = 0;
    std::vector<BinaryHypervector> binary;
    std::vector<CyclicHypervector> cyclic;
    std::vector<int> labels;

    [[nodiscard]] std::size_t size() const {
        return family == rff::Family::Binary ? binary.size() : cyclic.size();
    }
};

// Bound product of shifted basis vectors (binary XNOR fold; cyclic sum mod n).
BinaryHypervector encode(std::span<const int> indices,
                         std::span<const BinaryHypervector> basis);
CyclicHypervector encode(std::span<const int> indices, std::span<const CyclicHypervector> basis,
                         int order);

// Encodes every sample; parallel over samples. pre_indexed datasets skip
// quantization and use the stored indices directly.
EncodedDataset encode_dataset(const harness::Dataset& ds, const rff::CorrelatedBasis& basis);

}  // namespace hypervsa::learn

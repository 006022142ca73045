#include "hypervsa/encode.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hypervsa/errors.hpp"
#include "hypervsa/ops.hpp"

namespace hypervsa::learn {

std::vector<int> quantize_features(std::span<const double> x, int bits) {
    if (bits < 1 || bits > 16) {
        throw std::invalid_argument("quantize_features: bits must be in [1, 16]");
    }
    const int levels = (1 << bits) - 1;
    std::vector<int> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = x[i];
        v = std::max(-1.0, std::min(1.0, v));
        auto idx = static_cast<int>(std::floor((v + 1.0) * 0.5 * levels + 0.5));
        out[i] = std::max(0, std::min(levels, idx));
    }
    return out;
}

BinaryHypervector encode(std::span<const int> indices,
                         std::span<const BinaryHypervector> basis) {
    if (basis.empty()) {
        throw std::invalid_argument("encode: empty basis");
    }
    const std::size_t dim = basis.front().dim();
    BinaryHypervector acc = BinaryHypervector::all_plus(dim);
    BinaryHypervector rotated(dim);
    auto aw = acc.words();
    const auto rw = rotated.words();
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const int idx = indices[j];
        if (idx < 0 || static_cast<std::size_t>(idx) >= basis.size()) {
            throw data_error("encode: index " + std::to_string(idx) +
                             " outside basis of size " + std::to_string(basis.size()));
        }
        permute_into(rotated, basis[static_cast<std::size_t>(idx)], static_cast<long long>(j));
        for (std::size_t w = 0; w < aw.size(); ++w) {
            aw[w] = ~(aw[w] ^ rw[w]);  // XNOR fold = sign product
        }
    }
    acc.mask_padding();
    return acc;
}

CyclicHypervector encode(std::span<const int> indices, std::span<const CyclicHypervector> basis,
                         int order) {
    if (basis.empty()) {
        throw std::invalid_argument("encode: empty basis");
    }
    const std::size_t dim = basis.front().dim();
    std::vector<std::uint32_t> acc(dim, 0);
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const int idx = indices[j];
        if (idx < 0 || static_cast<std::size_t>(idx) >= basis.size()) {
            throw data_error("encode: index " + std::to_string(idx) +
                             " outside basis of size " + std::to_string(basis.size()));
        }
        const auto elems = basis[static_cast<std::size_t>(idx)].elements();
        const std::size_t shift = j % dim;
        // acc[(i + shift) mod D] += elems[i], as two contiguous runs.
        for (std::size_t i = 0; i + shift < dim; ++i) {
            acc[i + shift] += elems[i];
        }
        for (std::size_t i = dim - shift; i < dim; ++i) {
            acc[i + shift - dim] += elems[i];
        }
    }
    CyclicHypervector out(dim, order);
    auto oe = out.elements();
    const auto n = static_cast<std::uint32_t>(order);
    for (std::size_t i = 0; i < dim; ++i) {
        oe[i] = static_cast<std::uint8_t>(acc[i] % n);
    }
    return out;
}

EncodedDataset encode_dataset(const harness::Dataset& ds, const rff::CorrelatedBasis& basis) {
    EncodedDataset out;
    out.family = basis.family;
    out.order = basis.order;
    out.dim = basis.dim;
    out.labels = ds.labels;

    // Pre-compute and validate index rows so the parallel loop cannot throw.
    std::vector<std::vector<int>> index_rows(ds.num_samples);
    for (std::size_t i = 0; i < ds.num_samples; ++i) {
        if (ds.pre_indexed) {
            index_rows[i].resize(ds.num_features);
            for (std::size_t j = 0; j < ds.num_features; ++j) {
                index_rows[i][j] = static_cast<int>(ds.sample(i)[j]);
            }
        } else {
            index_rows[i] = quantize_features(ds.sample(i));
        }
        for (int idx : index_rows[i]) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= basis.size()) {
                throw data_error("encode_dataset: sample " + std::to_string(i) + " index " +
                                 std::to_string(idx) + " outside basis of size " +
                                 std::to_string(basis.size()));
            }
        }
    }

    if (basis.family == rff::Family::Binary) {
        out.binary.assign(ds.num_samples, BinaryHypervector(basis.dim));
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(ds.num_samples); ++i) {
            out.binary[static_cast<std::size_t>(i)] =
                encode(index_rows[static_cast<std::size_t>(i)], basis.binary);
        }
    } else {
        out.cyclic.assign(ds.num_samples, CyclicHypervector(basis.dim, basis.order));
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(ds.num_samples); ++i) {
            out.cyclic[static_cast<std::size_t>(i)] =
                encode(index_rows[static_cast<std::size_t>(i)], basis.cyclic, basis.order);
        }
    }
    return out;
}

}  // namespace hypervsa::learn

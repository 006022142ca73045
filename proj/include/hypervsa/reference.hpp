#pragma once

#include <span>

#include "hypervsa/binary_hv.hpp"
#include "hypervsa/cyclic_hv.hpp"
#include "hypervsa/rng.hpp"

// Straightforward per-coordinate implementations of the core operations.
// These avoid the packed-word kernels and all threading; the test suite
// asserts bitwise agreement with the production paths and the benchmark
// target compares throughput.
namespace hypervsa::ref {

double similarity(const BinaryHypervector& u, const BinaryHypervector& v);
double similarity(const CyclicHypervector& u, const CyclicHypervector& v,
                  const CyclicSimilaritySpec& spec);

BinaryHypervector bind(const BinaryHypervector& u, const BinaryHypervector& v);
CyclicHypervector bind(const CyclicHypervector& u, const CyclicHypervector& v);

BinaryHypervector permute(const BinaryHypervector& v, long long shift);
CyclicHypervector permute(const CyclicHypervector& v, long long shift);

BinaryHypervector bundle(std::span<const BinaryHypervector> vs, SeededRng rng);
CyclicHypervector bundle(std::span<const CyclicHypervector> vs, const CyclicSimilaritySpec& spec,
                         SeededRng rng);

// Serial bind-fold encoder: binds shifted basis vectors one feature at a time.
BinaryHypervector encode(std::span<const int> indices, std::span<const BinaryHypervector> basis);
CyclicHypervector encode(std::span<const int> indices, std::span<const CyclicHypervector> basis);

}  // namespace hypervsa::ref

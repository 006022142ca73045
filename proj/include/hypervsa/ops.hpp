#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypervsa/binary_hv.hpp"
#include "hypervsa/cyclic_hv.hpp"
#include "hypervsa/rng.hpp"

namespace hypervsa {

// --- similarity ---

// (matches - mismatches) / D via XNOR + popcount; exact up to one division.
double similarity(const BinaryHypervector& u, const BinaryHypervector& v);

// (1/D) sum_i table[(u_i - v_i) mod n].
double similarity(const CyclicHypervector& u, const CyclicHypervector& v,
                  const CyclicSimilaritySpec& spec);

// --- binding ---

BinaryHypervector bind(const BinaryHypervector& u, const BinaryHypervector& v);
CyclicHypervector bind(const CyclicHypervector& u, const CyclicHypervector& v);
CyclicHypervector invert(const CyclicHypervector& u);

// --- permutation (cyclic rotation by shift mod D) ---

BinaryHypervector permute(const BinaryHypervector& v, long long shift);
CyclicHypervector permute(const CyclicHypervector& v, long long shift);

// Non-allocating variant; out must share v's dimension.
void permute_into(BinaryHypervector& out, const BinaryHypervector& v, long long shift);

// --- bundling ---

// Streaming majority accumulator for binary vectors. Finalization resolves
// each zero-sum coordinate with exactly one draw from the given stream, in
// coordinate order.
class BinaryVoteAccumulator {
  public:
    explicit BinaryVoteAccumulator(std::size_t dim);

    void add(const BinaryHypervector& v);
    void add_signs(std::span<const std::int8_t> signs);

    [[nodiscard]] std::span<const std::int64_t> votes() const { return votes_; }
    [[nodiscard]] std::span<std::int64_t> votes() { return votes_; }
    [[nodiscard]] std::size_t dim() const { return votes_.size(); }

    // Merge another accumulator (integer adds commute, so per-thread partials
    // combine deterministically).
    void merge(const BinaryVoteAccumulator& other);

    [[nodiscard]] BinaryHypervector finalize(SeededRng rng) const;

  private:
    std::vector<std::int64_t> votes_;
};

// Streaming symbol-count accumulator for cyclic vectors. Finalization picks
// per coordinate the argmax over g of sum_{g'} count[g'] * table[(g-g') mod n],
// one draw per tied coordinate in coordinate order.
class CyclicVoteAccumulator {
  public:
    CyclicVoteAccumulator(std::size_t dim, int order);

    void add(const CyclicHypervector& v);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] std::int64_t count(std::size_t i, int symbol) const {
        return counts_[i * static_cast<std::size_t>(order_) + static_cast<std::size_t>(symbol)];
    }

    void merge(const CyclicVoteAccumulator& other);

    [[nodiscard]] CyclicHypervector finalize(const CyclicSimilaritySpec& spec, SeededRng rng) const;

  private:
    std::size_t dim_ = 0;
    int order_ = 0;
    std::vector<std::int64_t> counts_;  // dim x order
};

BinaryHypervector bundle(std::span<const BinaryHypervector> vs, SeededRng rng);
CyclicHypervector bundle(std::span<const CyclicHypervector> vs, const CyclicSimilaritySpec& spec,
                         SeededRng rng);

// --- random generation ---

// i.i.d. coordinates, +1 with probability p_plus. p_plus == 0.5 consumes one
// 64-bit draw per word; any other probability consumes one double per
// coordinate.
BinaryHypervector random_binary(std::size_t dim, double p_plus, SeededRng rng);

// i.i.d. uniform elements. order == 2 mirrors the random_binary(0.5) draw
// schedule so the binary/cyclic bijection holds bitwise.
CyclicHypervector random_cyclic(std::size_t dim, int order, SeededRng rng);

// --- binary <-> order-2 cyclic bijection (0 <-> +1, 1 <-> -1) ---

CyclicHypervector to_cyclic(const BinaryHypervector& v);
BinaryHypervector to_binary(const CyclicHypervector& v);

}  // namespace hypervsa

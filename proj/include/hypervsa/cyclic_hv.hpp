#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hypervsa {

// Fixed-length sequence over Z/nZ, one unsigned byte per element (n <= 256).
class CyclicHypervector {
  public:
    CyclicHypervector() = default;
    CyclicHypervector(std::size_t dim, int order);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] int order() const { return order_; }

    [[nodiscard]] std::uint8_t element(std::size_t i) const { return elems_[i]; }
    void set_element(std::size_t i, std::uint8_t value) { elems_[i] = value; }

    [[nodiscard]] std::span<const std::uint8_t> elements() const { return elems_; }
    [[nodiscard]] std::span<std::uint8_t> elements() { return elems_; }

    bool operator==(const CyclicHypervector&) const = default;

  private:
    std::size_t dim_ = 0;
    int order_ = 0;
    std::vector<std::uint8_t> elems_;
};

// Character-weighted similarity lookup for the cyclic group of a given order.
// table[d] = sum_k alpha(k) cos(2 pi d k / n) / sum_k alpha(k) for the
// difference d = (x - y) mod n. The default weighting puts all mass on the
// fundamental character pair {1, n-1}, giving table[d] = cos(2 pi d / n).
class CyclicSimilaritySpec {
  public:
    explicit CyclicSimilaritySpec(int order);
    CyclicSimilaritySpec(int order, std::span<const double> alpha);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] double table(int diff) const { return table_[static_cast<std::size_t>(diff)]; }
    [[nodiscard]] std::span<const double> table_values() const { return table_; }

    // Weight on character k, for k in 1..n-1 (index k-1).
    [[nodiscard]] std::span<const double> alpha() const { return alpha_; }

  private:
    void build_table();

    int order_ = 0;
    std::vector<double> alpha_;
    std::vector<double> table_;
};

}  // namespace hypervsa

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hypervsa {

// Fixed-length sign vector over {-1,+1}, bit-packed into 64-bit words.
// Bit 1 encodes +1. Coordinate 0 is the least-significant bit of word 0 and
// bit order within a word is little-endian. Padding bits past dim() are kept
// at zero; every operation masks them back out.
class BinaryHypervector {
  public:
    static constexpr std::size_t kWordBits = 64;

    BinaryHypervector() = default;
    explicit BinaryHypervector(std::size_t dim);

    static BinaryHypervector all_plus(std::size_t dim);
    static BinaryHypervector all_minus(std::size_t dim);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t word_count() const { return words_.size(); }

    [[nodiscard]] bool bit(std::size_t i) const {
        return (words_[i / kWordBits] >> (i % kWordBits)) & 1ULL;
    }
    void set_bit(std::size_t i, bool value) {
        const std::uint64_t mask = 1ULL << (i % kWordBits);
        if (value) {
            words_[i / kWordBits] |= mask;
        } else {
            words_[i / kWordBits] &= ~mask;
        }
    }

    [[nodiscard]] int sign(std::size_t i) const { return bit(i) ? 1 : -1; }
    void set_sign(std::size_t i, int s) { set_bit(i, s > 0); }

    [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }
    [[nodiscard]] std::span<std::uint64_t> words() { return words_; }

    // Mask covering the payload bits of the last word (all-ones when dim is a
    // multiple of 64).
    [[nodiscard]] std::uint64_t last_word_mask() const;

    // Forces padding bits back to zero after word-level writes.
    void mask_padding();

    bool operator==(const BinaryHypervector&) const = default;

  private:
    std::size_t dim_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace hypervsa

#include "hypervsa/binary_hv.hpp"

#include <stdexcept>

namespace hypervsa {

BinaryHypervector::BinaryHypervector(std::size_t dim)
    : dim_(dim), words_((dim + kWordBits - 1) / kWordBits, 0ULL) {
    if (dim == 0) {
        throw std::invalid_argument("BinaryHypervector: dim must be positive");
    }
}

BinaryHypervector BinaryHypervector::all_plus(std::size_t dim) {
    BinaryHypervector v(dim);
    for (auto& w : v.words_) {
        w = ~0ULL;
    }
    v.mask_padding();
    return v;
}

BinaryHypervector BinaryHypervector::all_minus(std::size_t dim) {
    return BinaryHypervector(dim);
}

std::uint64_t BinaryHypervector::last_word_mask() const {
    const std::size_t rem = dim_ % kWordBits;
    return rem == 0 ? ~0ULL : ((1ULL << rem) - 1ULL);
}

void BinaryHypervector::mask_padding() {
    if (!words_.empty()) {
        words_.back() &= last_word_mask();
    }
}

}  // namespace hypervsa

#include "hypervsa/rng.hpp"

#include <cmath>
#include <numbers>

namespace hypervsa {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; full-period mixer with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_(master_seed), stream_(stream_index) {
    state_ = mix64(mix64(master_seed + kGolden) ^ (stream_index * 0xD1B54A32D192ED03ULL + kGolden));
}

SeededRng SeededRng::derive(std::uint64_t index) const {
    return SeededRng(mix64(master_ ^ mix64(stream_ + kGolden)), index + 1);
}

std::uint64_t SeededRng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double SeededRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_gaussian_;
    }
    // Box-Muller on (0,1] x [0,1) uniforms.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_gaussian_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace hypervsa

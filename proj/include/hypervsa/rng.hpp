#pragma once

#include <cstdint>

namespace hypervsa {

// Counter-style random stream keyed by (master seed, stream index).
// Deriving a child stream is a pure function of the parent identity, so any
// schedule of derivations (per column, per trial, per sample) reproduces the
// same values no matter how the work is distributed over threads.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t master_seed, std::uint64_t stream_index = 0);

    // Child stream i; independent-quality and deterministic.
    [[nodiscard]] SeededRng derive(std::uint64_t index) const;

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    // Standard normal via Box-Muller; second value of each pair is cached.
    double next_gaussian();

    [[nodiscard]] std::uint64_t master_seed() const { return master_; }
    [[nodiscard]] std::uint64_t stream_index() const { return stream_; }

  private:
    std::uint64_t master_;
    std::uint64_t stream_;
    std::uint64_t state_;
    double spare_gaussian_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace hypervsa

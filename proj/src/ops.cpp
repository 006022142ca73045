#include "hypervsa/ops.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hypervsa {

namespace {

void require_match(const BinaryHypervector& u, const BinaryHypervector& v) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("binary hypervector dimension mismatch: " +
                                    std::to_string(u.dim()) + " vs " + std::to_string(v.dim()));
    }
}

void require_match(const CyclicHypervector& u, const CyclicHypervector& v) {
    if (u.dim() != v.dim() || u.order() != v.order()) {
        throw std::invalid_argument("cyclic hypervector dim/order mismatch");
    }
}

}  // namespace

double similarity(const BinaryHypervector& u, const BinaryHypervector& v) {
    require_match(u, v);
    const auto uw = u.words();
    const auto vw = v.words();
    std::uint64_t hamming = 0;
    for (std::size_t i = 0; i < uw.size(); ++i) {
        hamming += static_cast<std::uint64_t>(__builtin_popcountll(uw[i] ^ vw[i]));
    }
    const auto d = static_cast<std::int64_t>(u.dim());
    return static_cast<double>(d - 2 * static_cast<std::int64_t>(hamming)) /
           static_cast<double>(d);
}

double similarity(const CyclicHypervector& u, const CyclicHypervector& v,
                  const CyclicSimilaritySpec& spec) {
    require_match(u, v);
    if (spec.order() != u.order()) {
        throw std::invalid_argument("similarity spec order does not match hypervectors");
    }
    const int n = u.order();
    const auto ue = u.elements();
    const auto ve = v.elements();
    // Count difference classes, then one table pass; exact integer counts.
    std::int64_t diff_counts[256] = {0};
    for (std::size_t i = 0; i < ue.size(); ++i) {
        int d = ue[i] - ve[i];
        if (d < 0) {
            d += n;
        }
        ++diff_counts[d];
    }
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
        total += static_cast<double>(diff_counts[d]) * spec.table(d);
    }
    return total / static_cast<double>(u.dim());
}

BinaryHypervector bind(const BinaryHypervector& u, const BinaryHypervector& v) {
    require_match(u, v);
    BinaryHypervector out(u.dim());
    const auto uw = u.words();
    const auto vw = v.words();
    auto ow = out.words();
    for (std::size_t i = 0; i < uw.size(); ++i) {
        ow[i] = ~(uw[i] ^ vw[i]);  // XNOR: product of signs
    }
    out.mask_padding();
    return out;
}

CyclicHypervector bind(const CyclicHypervector& u, const CyclicHypervector& v) {
    require_match(u, v);
    const int n = u.order();
    CyclicHypervector out(u.dim(), n);
    const auto ue = u.elements();
    const auto ve = v.elements();
    auto oe = out.elements();
    for (std::size_t i = 0; i < ue.size(); ++i) {
        int s = ue[i] + ve[i];
        if (s >= n) {
            s -= n;
        }
        oe[i] = static_cast<std::uint8_t>(s);
    }
    return out;
}

CyclicHypervector invert(const CyclicHypervector& u) {
    const int n = u.order();
    CyclicHypervector out(u.dim(), n);
    const auto ue = u.elements();
    auto oe = out.elements();
    for (std::size_t i = 0; i < ue.size(); ++i) {
        oe[i] = static_cast<std::uint8_t>(ue[i] == 0 ? 0 : n - ue[i]);
    }
    return out;
}

BinaryHypervector permute(const BinaryHypervector& v, long long shift) {
    BinaryHypervector out(v.dim());
    permute_into(out, v, shift);
    return out;
}

void permute_into(BinaryHypervector& out, const BinaryHypervector& v, long long shift) {
    if (out.dim() != v.dim()) {
        throw std::invalid_argument("permute_into: dimension mismatch");
    }
    const auto d = static_cast<long long>(v.dim());
    const std::size_t j = static_cast<std::size_t>(((shift % d) + d) % d);
    const auto in = v.words();
    auto ow = out.words();
    const std::size_t nwords = in.size();
    if (j == 0) {
        std::copy(in.begin(), in.end(), ow.begin());
        return;
    }
    // out = (v << j) | (v >> (D - j)) over the logical D-bit ring.
    const std::size_t dim = v.dim();
    std::fill(ow.begin(), ow.end(), 0ULL);

    const std::size_t word_shift = j / 64;
    const unsigned bit_shift = static_cast<unsigned>(j % 64);
    // Left shift by j: bit b of input lands at b + j.
    for (std::size_t w = 0; w < nwords; ++w) {
        std::uint64_t lo = in[w] << bit_shift;
        std::uint64_t hi =
            (bit_shift && w > 0) ? (in[w - 1] >> (64 - bit_shift)) : 0ULL;
        const std::size_t dst = w + word_shift;
        if (dst < nwords) {
            ow[dst] |= lo | hi;
        }
    }
    // Carry out of the low part: bits that overflow past word nwords-1 within
    // the shifted copy, plus the wrap-around of bits from positions >= D - j.
    // Handle the wrap by shifting right by (D - j) and OR-ing in.
    const std::size_t r = dim - j;  // right-shift amount
    const std::size_t rws = r / 64;
    const unsigned rbs = static_cast<unsigned>(r % 64);
    for (std::size_t w = 0; w < nwords; ++w) {
        const std::size_t src = w + rws;
        if (src >= nwords) {
            break;
        }
        std::uint64_t val = in[src] >> rbs;
        if (rbs && src + 1 < nwords) {
            val |= in[src + 1] << (64 - rbs);
        }
        ow[w] |= val;
    }
    out.mask_padding();
}

CyclicHypervector permute(const CyclicHypervector& v, long long shift) {
    const auto d = static_cast<long long>(v.dim());
    const std::size_t j = static_cast<std::size_t>(((shift % d) + d) % d);
    CyclicHypervector out(v.dim(), v.order());
    const auto in = v.elements();
    auto oe = out.elements();
    // out[(i + j) mod D] = in[i]; two contiguous copies.
    std::copy(in.begin(), in.end() - static_cast<std::ptrdiff_t>(j),
              oe.begin() + static_cast<std::ptrdiff_t>(j));
    std::copy(in.end() - static_cast<std::ptrdiff_t>(j), in.end(), oe.begin());
    return out;
}

// --- bundling ---

BinaryVoteAccumulator::BinaryVoteAccumulator(std::size_t dim) : votes_(dim, 0) {
    if (dim == 0) {
        throw std::invalid_argument("BinaryVoteAccumulator: dim must be positive");
    }
}

void BinaryVoteAccumulator::add(const BinaryHypervector& v) {
    if (v.dim() != votes_.size()) {
        throw std::invalid_argument("vote accumulator dimension mismatch");
    }
    const auto words = v.words();
    for (std::size_t i = 0; i < votes_.size(); ++i) {
        votes_[i] += ((words[i / 64] >> (i % 64)) & 1ULL) ? 1 : -1;
    }
}

void BinaryVoteAccumulator::add_signs(std::span<const std::int8_t> signs) {
    if (signs.size() != votes_.size()) {
        throw std::invalid_argument("vote accumulator dimension mismatch");
    }
    for (std::size_t i = 0; i < votes_.size(); ++i) {
        votes_[i] += signs[i];
    }
}

void BinaryVoteAccumulator::merge(const BinaryVoteAccumulator& other) {
    if (other.votes_.size() != votes_.size()) {
        throw std::invalid_argument("vote accumulator dimension mismatch");
    }
    for (std::size_t i = 0; i < votes_.size(); ++i) {
        votes_[i] += other.votes_[i];
    }
}

BinaryHypervector BinaryVoteAccumulator::finalize(SeededRng rng) const {
    BinaryHypervector out(votes_.size());
    for (std::size_t i = 0; i < votes_.size(); ++i) {
        if (votes_[i] > 0) {
            out.set_bit(i, true);
        } else if (votes_[i] == 0) {
            // Candidates in bijection order {+1, -1}; one draw per tie.
            out.set_bit(i, rng.next_double() < 0.5);
        }
    }
    return out;
}

CyclicVoteAccumulator::CyclicVoteAccumulator(std::size_t dim, int order)
    : dim_(dim), order_(order), counts_(dim * static_cast<std::size_t>(order), 0) {
    if (dim == 0 || order < 2 || order > 256) {
        throw std::invalid_argument("CyclicVoteAccumulator: bad dim/order");
    }
}

void CyclicVoteAccumulator::add(const CyclicHypervector& v) {
    if (v.dim() != dim_ || v.order() != order_) {
        throw std::invalid_argument("vote accumulator dim/order mismatch");
    }
    const auto elems = v.elements();
    const auto n = static_cast<std::size_t>(order_);
    for (std::size_t i = 0; i < dim_; ++i) {
        ++counts_[i * n + elems[i]];
    }
}

void CyclicVoteAccumulator::merge(const CyclicVoteAccumulator& other) {
    if (other.dim_ != dim_ || other.order_ != order_) {
        throw std::invalid_argument("vote accumulator dim/order mismatch");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
}

CyclicHypervector CyclicVoteAccumulator::finalize(const CyclicSimilaritySpec& spec,
                                                  SeededRng rng) const {
    if (spec.order() != order_) {
        throw std::invalid_argument("finalize: spec order mismatch");
    }
    const int n = order_;
    CyclicHypervector out(dim_, n);
    auto oe = out.elements();
    int ties[256];
    for (std::size_t i = 0; i < dim_; ++i) {
        const std::int64_t* cnt = counts_.data() + i * static_cast<std::size_t>(n);
        double best = 0.0;
        int num_ties = 0;
        for (int g = 0; g < n; ++g) {
            double score = 0.0;
            for (int gp = 0; gp < n; ++gp) {
                if (cnt[gp] != 0) {
                    int d = g - gp;
                    if (d < 0) {
                        d += n;
                    }
                    score += static_cast<double>(cnt[gp]) * spec.table(d);
                }
            }
            if (g == 0 || score > best) {
                best = score;
                ties[0] = g;
                num_ties = 1;
            } else if (score == best) {
                ties[num_ties++] = g;
            }
        }
        if (num_ties == 1) {
            oe[i] = static_cast<std::uint8_t>(ties[0]);
        } else {
            auto pick = static_cast<int>(rng.next_double() * num_ties);
            pick = std::min(pick, num_ties - 1);
            oe[i] = static_cast<std::uint8_t>(ties[pick]);
        }
    }
    return out;
}

BinaryHypervector bundle(std::span<const BinaryHypervector> vs, SeededRng rng) {
    if (vs.empty()) {
        throw std::invalid_argument("bundle: empty input list");
    }
    BinaryVoteAccumulator acc(vs.front().dim());
    for (const auto& v : vs) {
        acc.add(v);
    }
    return acc.finalize(rng);
}

CyclicHypervector bundle(std::span<const CyclicHypervector> vs, const CyclicSimilaritySpec& spec,
                         SeededRng rng) {
    if (vs.empty()) {
        throw std::invalid_argument("bundle: empty input list");
    }
    CyclicVoteAccumulator acc(vs.front().dim(), vs.front().order());
    for (const auto& v : vs) {
        acc.add(v);
    }
    return acc.finalize(spec, rng);
}

// --- random generation ---

BinaryHypervector random_binary(std::size_t dim, double p_plus, SeededRng rng) {
    if (p_plus < 0.0 || p_plus > 1.0) {
        throw std::invalid_argument("random_binary: p_plus must be in [0, 1]");
    }
    BinaryHypervector out(dim);
    auto words = out.words();
    if (p_plus == 0.5) {
        for (auto& w : words) {
            w = rng.next_u64();
        }
        out.mask_padding();
    } else {
        for (std::size_t i = 0; i < dim; ++i) {
            if (rng.next_double() < p_plus) {
                out.set_bit(i, true);
            }
        }
    }
    return out;
}

CyclicHypervector random_cyclic(std::size_t dim, int order, SeededRng rng) {
    CyclicHypervector out(dim, order);
    auto elems = out.elements();
    if (order == 2) {
        // Same word draws as random_binary(0.5); element = 1 - bit.
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (i % 64 == 0) {
                w = rng.next_u64();
            }
            elems[i] = static_cast<std::uint8_t>(((w >> (i % 64)) & 1ULL) ^ 1ULL);
        }
    } else {
        for (std::size_t i = 0; i < dim; ++i) {
            auto e = static_cast<int>(rng.next_double() * order);
            elems[i] = static_cast<std::uint8_t>(std::min(e, order - 1));
        }
    }
    return out;
}

CyclicHypervector to_cyclic(const BinaryHypervector& v) {
    CyclicHypervector out(v.dim(), 2);
    auto elems = out.elements();
    for (std::size_t i = 0; i < v.dim(); ++i) {
        elems[i] = v.bit(i) ? 0 : 1;
    }
    return out;
}

BinaryHypervector to_binary(const CyclicHypervector& v) {
    if (v.order() != 2) {
        throw std::invalid_argument("to_binary: order-2 hypervector required");
    }
    BinaryHypervector out(v.dim());
    const auto elems = v.elements();
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out.set_bit(i, elems[i] == 0);
    }
    return out;
}

}  // namespace hypervsa

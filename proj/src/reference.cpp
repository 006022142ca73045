#include "hypervsa/reference.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hypervsa/ops.hpp"

namespace hypervsa::ref {

double similarity(const BinaryHypervector& u, const BinaryHypervector& v) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("ref::similarity: dimension mismatch");
    }
    long long sum = 0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        sum += u.sign(i) * v.sign(i);
    }
    return static_cast<double>(sum) / static_cast<double>(u.dim());
}

double similarity(const CyclicHypervector& u, const CyclicHypervector& v,
                  const CyclicSimilaritySpec& spec) {
    if (u.dim() != v.dim() || u.order() != v.order() || spec.order() != u.order()) {
        throw std::invalid_argument("ref::similarity: dim/order mismatch");
    }
    const int n = u.order();
    double total = 0.0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        int d = u.element(i) - v.element(i);
        if (d < 0) {
            d += n;
        }
        total += spec.table(d);
    }
    return total / static_cast<double>(u.dim());
}

BinaryHypervector bind(const BinaryHypervector& u, const BinaryHypervector& v) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument("ref::bind: dimension mismatch");
    }
    BinaryHypervector out(u.dim());
    for (std::size_t i = 0; i < u.dim(); ++i) {
        out.set_sign(i, u.sign(i) * v.sign(i));
    }
    return out;
}

CyclicHypervector bind(const CyclicHypervector& u, const CyclicHypervector& v) {
    if (u.dim() != v.dim() || u.order() != v.order()) {
        throw std::invalid_argument("ref::bind: dim/order mismatch");
    }
    CyclicHypervector out(u.dim(), u.order());
    for (std::size_t i = 0; i < u.dim(); ++i) {
        out.set_element(i, static_cast<std::uint8_t>((u.element(i) + v.element(i)) % u.order()));
    }
    return out;
}

BinaryHypervector permute(const BinaryHypervector& v, long long shift) {
    const auto d = static_cast<long long>(v.dim());
    const std::size_t j = static_cast<std::size_t>(((shift % d) + d) % d);
    BinaryHypervector out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out.set_bit((i + j) % v.dim(), v.bit(i));
    }
    return out;
}

CyclicHypervector permute(const CyclicHypervector& v, long long shift) {
    const auto d = static_cast<long long>(v.dim());
    const std::size_t j = static_cast<std::size_t>(((shift % d) + d) % d);
    CyclicHypervector out(v.dim(), v.order());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out.set_element((i + j) % v.dim(), v.element(i));
    }
    return out;
}

BinaryHypervector bundle(std::span<const BinaryHypervector> vs, SeededRng rng) {
    if (vs.empty()) {
        throw std::invalid_argument("ref::bundle: empty input list");
    }
    const std::size_t dim = vs.front().dim();
    BinaryHypervector out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        long long sum = 0;
        for (const auto& v : vs) {
            sum += v.sign(i);
        }
        if (sum > 0) {
            out.set_bit(i, true);
        } else if (sum == 0) {
            out.set_bit(i, rng.next_double() < 0.5);
        }
    }
    return out;
}

CyclicHypervector bundle(std::span<const CyclicHypervector> vs, const CyclicSimilaritySpec& spec,
                         SeededRng rng) {
    if (vs.empty()) {
        throw std::invalid_argument("ref::bundle: empty input list");
    }
    const std::size_t dim = vs.front().dim();
    const int n = vs.front().order();
    CyclicHypervector out(dim, n);
    std::vector<int> ties;
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
        for (const auto& v : vs) {
            ++counts[v.element(i)];
        }
        double best = 0.0;
        ties.clear();
        for (int g = 0; g < n; ++g) {
            double score = 0.0;
            for (int gp = 0; gp < n; ++gp) {
                if (counts[static_cast<std::size_t>(gp)] != 0) {
                    score += static_cast<double>(counts[static_cast<std::size_t>(gp)]) *
                             spec.table((g - gp + n) % n);
                }
            }
            if (g == 0 || score > best) {
                best = score;
                ties.assign(1, g);
            } else if (score == best) {
                ties.push_back(g);
            }
        }
        if (ties.size() == 1) {
            out.set_element(i, static_cast<std::uint8_t>(ties[0]));
        } else {
            auto pick = static_cast<std::size_t>(rng.next_double() * static_cast<double>(ties.size()));
            pick = std::min(pick, ties.size() - 1);
            out.set_element(i, static_cast<std::uint8_t>(ties[pick]));
        }
    }
    return out;
}

BinaryHypervector encode(std::span<const int> indices, std::span<const BinaryHypervector> basis) {
    BinaryHypervector acc = BinaryHypervector::all_plus(basis.front().dim());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        acc = hypervsa::ref::bind(
            acc, hypervsa::ref::permute(basis[static_cast<std::size_t>(indices[j])],
                                        static_cast<long long>(j)));
    }
    return acc;
}

CyclicHypervector encode(std::span<const int> indices, std::span<const CyclicHypervector> basis) {
    CyclicHypervector acc(basis.front().dim(), basis.front().order());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        acc = hypervsa::ref::bind(
            acc, hypervsa::ref::permute(basis[static_cast<std::size_t>(indices[j])],
                                        static_cast<long long>(j)));
    }
    return acc;
}

}  // namespace hypervsa::ref

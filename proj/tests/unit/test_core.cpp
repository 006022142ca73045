#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hypervsa/ops.hpp"
#include "hypervsa/rng.hpp"

using namespace hypervsa;

namespace {

BinaryHypervector from_signs(std::initializer_list<int> signs) {
    BinaryHypervector v(signs.size());
    std::size_t i = 0;
    for (int s : signs) {
        v.set_sign(i++, s);
    }
    return v;
}

CyclicHypervector from_elems(int order, std::initializer_list<int> elems) {
    CyclicHypervector v(elems.size(), order);
    std::size_t i = 0;
    for (int e : elems) {
        v.set_element(i++, static_cast<std::uint8_t>(e));
    }
    return v;
}

BinaryHypervector negated(const BinaryHypervector& v) {
    BinaryHypervector out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out.set_sign(i, -v.sign(i));
    }
    return out;
}

}  // namespace

TEST_CASE("binary similarity basics") {
    SeededRng rng(1);
    const auto u = random_binary(1000, 0.5, rng.derive(0));
    CHECK(similarity(u, u) == 1.0);
    CHECK(similarity(u, negated(u)) == -1.0);

    const auto a = from_signs({1, 1, -1, -1});
    const auto b = from_signs({1, -1, -1, 1});
    CHECK(similarity(a, b) == 0.0);

    CHECK_THROWS_AS(similarity(u, BinaryHypervector(999)), std::invalid_argument);
}

TEST_CASE("binary binding identities") {
    SeededRng rng(2);
    const auto u = random_binary(512, 0.5, rng.derive(0));
    CHECK(bind(u, u) == BinaryHypervector::all_plus(512));
    CHECK(bind(u, BinaryHypervector::all_plus(512)) == u);
}

TEST_CASE("binding preserves similarity exactly") {
    SeededRng rng(3);
    const auto u = random_binary(1024, 0.5, rng.derive(0));
    const auto v = random_binary(1024, 0.5, rng.derive(1));
    const auto w = random_binary(1024, 0.5, rng.derive(2));
    CHECK(similarity(bind(u, w), bind(v, w)) == similarity(u, v));
}

TEST_CASE("bundle of one and majority of three") {
    SeededRng rng(4);
    const auto u = random_binary(777, 0.5, rng.derive(0));
    const auto w = random_binary(777, 0.5, rng.derive(1));
    std::vector<BinaryHypervector> single{u};
    CHECK(bundle(single, rng.derive(2)) == u);
    std::vector<BinaryHypervector> two_to_one{u, u, w};
    CHECK(bundle(two_to_one, rng.derive(3)) == u);

    std::vector<BinaryHypervector> empty;
    CHECK_THROWS_AS(bundle(std::span<const BinaryHypervector>(empty), rng.derive(4)),
                    std::invalid_argument);
}

TEST_CASE("bundle of three random vectors has mean member similarity near 1/2") {
    // theta_3 = arccos(1/2): expected member similarity is 0.5.
    SeededRng rng(5);
    const std::size_t dim = 100000;
    std::vector<BinaryHypervector> vs;
    for (int i = 0; i < 3; ++i) {
        vs.push_back(random_binary(dim, 0.5, rng.derive(static_cast<std::uint64_t>(i))));
    }
    const auto b = bundle(vs, rng.derive(9));
    double mean = 0.0;
    for (const auto& v : vs) {
        mean += similarity(b, v);
    }
    mean /= 3.0;
    CHECK(std::abs(mean - 0.5) < 0.01);
}

TEST_CASE("permutation definition and inverses") {
    const auto v = from_signs({1, -1, -1, 1});  // (a,b,c,d)
    CHECK(permute(v, 0) == v);
    CHECK(permute(v, 4) == v);
    // j=1: (d,a,b,c)
    const auto rotated = permute(v, 1);
    CHECK(rotated.sign(0) == v.sign(3));
    CHECK(rotated.sign(1) == v.sign(0));
    CHECK(rotated.sign(2) == v.sign(1));
    CHECK(rotated.sign(3) == v.sign(2));

    SeededRng rng(6);
    const auto big = random_binary(5000, 0.5, rng.derive(0));
    for (long long j : {1LL, 63LL, 64LL, 65LL, 1000LL, 4999LL, -17LL}) {
        CHECK(permute(permute(big, j), -j) == big);
    }
}

TEST_CASE("permutation preserves similarity exactly") {
    SeededRng rng(7);
    const auto u = random_binary(3000, 0.5, rng.derive(0));
    const auto v = random_binary(3000, 0.5, rng.derive(1));
    for (long long j : {1LL, 100LL, 2999LL}) {
        CHECK(similarity(permute(u, j), permute(v, j)) == similarity(u, v));
    }
}

TEST_CASE("cyclic similarity spec invariants") {
    for (int n : {2, 3, 4, 8, 16}) {
        const CyclicSimilaritySpec spec(n);
        CHECK(spec.table(0) == 1.0);
        double sum = 0.0;
        for (int d = 0; d < n; ++d) {
            CHECK(spec.table(d) == doctest::Approx(spec.table((n - d) % n)).epsilon(1e-15));
            CHECK(spec.table(d) >= -1.0 - 1e-12);
            CHECK(spec.table(d) <= 1.0 + 1e-12);
            sum += spec.table(d);
        }
        CHECK(std::abs(sum) <= 1e-12);
    }
}

TEST_CASE("weighted alpha spec validates symmetry and sign") {
    const std::vector<double> good{0.5, 1.0, 0.5};  // n = 4, alpha(1)=alpha(3)
    CHECK_NOTHROW(CyclicSimilaritySpec(4, good));
    const std::vector<double> asym{0.5, 1.0, 0.25};
    CHECK_THROWS_AS(CyclicSimilaritySpec(4, asym), std::invalid_argument);
    const std::vector<double> negative{-0.5, 1.0, -0.5};
    CHECK_THROWS_AS(CyclicSimilaritySpec(4, negative), std::invalid_argument);
}

TEST_CASE("cyclic similarity values") {
    const CyclicSimilaritySpec spec4(4);
    const auto u4 = from_elems(4, {0, 1, 2, 3});
    CHECK(similarity(u4, u4, spec4) == 1.0);
    const auto v4 = from_elems(4, {2, 3, 0, 1});  // constant difference 2
    CHECK(similarity(u4, v4, spec4) == doctest::Approx(-1.0).epsilon(1e-12));

    // n=3, constant difference 1: cos(2 pi/3) = -1/2, the off-diagonal the
    // binary family cannot express.
    const CyclicSimilaritySpec spec3(3);
    const auto u3 = from_elems(3, {0, 1, 2});
    const auto v3 = from_elems(3, {1, 2, 0});
    CHECK(similarity(u3, v3, spec3) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("cyclic binding and inversion") {
    const CyclicSimilaritySpec spec(5);
    const auto u = from_elems(5, {3, 3, 3});
    const auto v = from_elems(5, {4, 4, 4});
    const auto bound = bind(u, v);
    CHECK(bound.element(0) == 2);  // (3+4) mod 5

    const auto zero = from_elems(5, {0, 0, 0});
    CHECK(bind(u, zero) == u);
    CHECK(bind(u, invert(u)) == zero);

    SeededRng rng(8);
    const auto g = random_cyclic(1024, 8, rng.derive(0));
    const auto x = random_cyclic(1024, 8, rng.derive(1));
    const auto y = random_cyclic(1024, 8, rng.derive(2));
    const CyclicSimilaritySpec spec8(8);
    CHECK(similarity(bind(g, x), bind(g, y), spec8) == similarity(x, y, spec8));
}

TEST_CASE("cyclic bundling majority and maximality") {
    const CyclicSimilaritySpec spec(3);
    SeededRng rng(9);
    const auto u = random_cyclic(2000, 3, rng.derive(0));
    const auto w = random_cyclic(2000, 3, rng.derive(1));
    std::vector<CyclicHypervector> single{u};
    CHECK(bundle(single, spec, rng.derive(2)) == u);

    // Two votes beat one under the cosine table at every coordinate.
    std::vector<CyclicHypervector> vs{u, u, w};
    const auto b = bundle(vs, spec, rng.derive(3));
    for (std::size_t i = 0; i < u.dim(); ++i) {
        if (u.element(i) != w.element(i)) {
            CHECK(b.element(i) == u.element(i));
        }
    }

    // Maximality: the winner's summed table score is >= every candidate's.
    CyclicVoteAccumulator acc(u.dim(), 3);
    for (const auto& v : vs) {
        acc.add(v);
    }
    for (std::size_t i = 0; i < u.dim(); ++i) {
        double best = 0.0;
        for (int g = 0; g < 3; ++g) {
            double score = 0.0;
            for (int gp = 0; gp < 3; ++gp) {
                score += static_cast<double>(acc.count(i, gp)) * spec.table((g - gp + 3) % 3);
            }
            if (g == b.element(i)) {
                best = score;
            }
        }
        for (int g = 0; g < 3; ++g) {
            double score = 0.0;
            for (int gp = 0; gp < 3; ++gp) {
                score += static_cast<double>(acc.count(i, gp)) * spec.table((g - gp + 3) % 3);
            }
            CHECK(best >= score - 1e-12);
        }
    }
}

TEST_CASE("random generation properties") {
    SeededRng rng(10);
    const auto all_plus = random_binary(256, 1.0, rng.derive(0));
    CHECK(all_plus == BinaryHypervector::all_plus(256));

    const auto a = random_binary(100000, 0.5, rng.derive(1));
    const auto b = random_binary(100000, 0.5, rng.derive(2));
    CHECK(std::abs(similarity(a, b)) < 0.02);

    const CyclicSimilaritySpec spec(8);
    const auto c = random_cyclic(100000, 8, rng.derive(3));
    const auto d = random_cyclic(100000, 8, rng.derive(4));
    CHECK(std::abs(similarity(c, d, spec)) < 0.02);

    CHECK_THROWS_AS(random_binary(16, 1.5, rng.derive(5)), std::invalid_argument);
}

TEST_CASE("binary operations equal their order-2 cyclic counterparts") {
    SeededRng rng(11);
    const std::size_t dim = 4097;  // nonaligned to stress padding
    const CyclicSimilaritySpec spec2(2);

    // Random generation follows the same draw schedule.
    const auto rb = random_binary(dim, 0.5, SeededRng(77, 5));
    const auto rc = random_cyclic(dim, 2, SeededRng(77, 5));
    CHECK(to_binary(rc) == rb);

    const auto u = random_binary(dim, 0.5, rng.derive(0));
    const auto v = random_binary(dim, 0.5, rng.derive(1));
    const auto cu = to_cyclic(u);
    const auto cv = to_cyclic(v);

    CHECK(similarity(u, v) == doctest::Approx(similarity(cu, cv, spec2)).epsilon(1e-12));
    CHECK(to_binary(bind(cu, cv)) == bind(u, v));
    CHECK(to_binary(permute(cu, 13)) == permute(u, 13));

    // Bundling with an even count exercises the tie path; both sides must
    // consume draws identically.
    const auto w = random_binary(dim, 0.5, rng.derive(2));
    const auto x = random_binary(dim, 0.5, rng.derive(3));
    std::vector<BinaryHypervector> bs{u, v, w, x};
    std::vector<CyclicHypervector> cs{cu, cv, to_cyclic(w), to_cyclic(x)};
    const auto bb = bundle(bs, SeededRng(123, 9));
    const auto cb = bundle(cs, spec2, SeededRng(123, 9));
    CHECK(to_binary(cb) == bb);
}

TEST_CASE("bundle ties consume one draw per tied coordinate in order") {
    // Two antipodal vectors tie everywhere; the result must equal the
    // coordinate-wise draw sequence.
    const std::size_t dim = 130;
    BinaryHypervector u = BinaryHypervector::all_plus(dim);
    BinaryHypervector v(dim);  // all minus
    std::vector<BinaryHypervector> vs{u, v};
    SeededRng tie_stream(321, 4);
    const auto bundled = bundle(vs, tie_stream);
    SeededRng replay(321, 4);
    for (std::size_t i = 0; i < dim; ++i) {
        CHECK(bundled.bit(i) == (replay.next_double() < 0.5));
    }
}

TEST_CASE("padding bits stay zero through the packed operations") {
    SeededRng rng(12);
    for (std::size_t dim : {1UL, 63UL, 64UL, 65UL, 127UL, 1000UL}) {
        auto v = random_binary(dim, 0.5, rng.derive(dim));
        auto w = random_binary(dim, 0.5, rng.derive(dim + 1));
        for (const auto& r : {bind(v, w), permute(v, 7), bundle(std::vector{v, w, v}, rng.derive(2))}) {
            const std::uint64_t mask = r.last_word_mask();
            CHECK((r.words().back() & ~mask) == 0);
        }
    }
}

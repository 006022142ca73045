#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hypervsa/errors.hpp"
#include "hypervsa/jacobi.hpp"
#include "hypervsa/ops.hpp"
#include "hypervsa/rff.hpp"

using namespace hypervsa;

TEST_CASE("rbf target closed form") {
    std::vector<double> values(256);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<double>(i);
    }
    const auto m = rff::rbf_target(values, 32.0);
    CHECK(m.entries(5, 5) == 1.0);
    // Oracle: exp(-(32)^2 / (2*32^2)) = exp(-1/2).
    CHECK(m.entries(0, 32) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    // Distant values decay toward zero.
    CHECK(m.entries(0, 255) < 1e-10);

    CHECK_THROWS_AS(rff::rbf_target(values, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rff::rbf_target(values, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(rff::rbf_target(values, 16.0, std::pair{0.5, 0.2}), std::invalid_argument);
}

TEST_CASE("rbf rescale maps the off-diagonal range") {
    std::vector<double> values{0.0, 1.0, 2.0, 10.0};
    const auto m = rff::rbf_target(values, 1.0, std::pair{-0.5, 0.9});
    double lo = 1.0;
    double hi = -1.0;
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m.entries(i, i) == 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            if (i != j) {
                lo = std::min(lo, m.entries(i, j));
                hi = std::max(hi, m.entries(i, j));
            }
        }
    }
    CHECK(lo == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("sin transform values") {
    const auto m = SimilarityTarget::constant_off_diagonal(3, -1.0 / 3.0);
    const auto s = rff::sin_transform(m);
    CHECK(s(0, 0) == 1.0);
    CHECK(s(0, 1) == doctest::Approx(-0.5).epsilon(1e-12));

    const auto z = SimilarityTarget::constant_off_diagonal(3, 0.0);
    CHECK(rff::sin_transform(z)(0, 1) == 0.0);
    const auto one = SimilarityTarget::constant_off_diagonal(2, 1.0);
    CHECK(rff::sin_transform(one)(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("psd factor on an already PSD matrix") {
    // (3/2) I3 - (1/2) 1_3x3 has eigenvalues {0, 3/2, 3/2}.
    Matrix s(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            s(i, j) = i == j ? 1.0 : -0.5;
        }
    }
    const auto f = rff::psd_factor(s);
    CHECK(f.clipped_mass == 0.0);
    CHECK(f.lambda[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(f.lambda[1] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(std::abs(f.lambda[2]) < 1e-10);
    CHECK(f.reconstruction().frobenius_distance(s) < 1e-8);

    // Columns are orthonormal.
    const Matrix& u = f.u;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
            double dot = 0.0;
            for (std::size_t r = 0; r < 3; ++r) {
                dot += u(r, a) * u(r, b);
            }
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("psd factor clips exactly one negative eigenvalue for off-diagonal -sqrt2/2") {
    // Oracle: a 3x3 unit-diagonal matrix with constant off-diagonal c has
    // eigenvalues {1+2c, 1-c, 1-c}; at c = -sqrt(2)/2 the negative one is
    // 1 - sqrt(2).
    const double c = -std::numbers::sqrt2 / 2.0;
    Matrix s(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            s(i, j) = i == j ? 1.0 : c;
        }
    }
    const auto f = rff::psd_factor(s);
    CHECK(f.clipped_mass == doctest::Approx(std::numbers::sqrt2 - 1.0).epsilon(1e-9));
    int zeros = 0;
    for (double l : f.lambda) {
        if (l == 0.0) {
            ++zeros;
        }
    }
    CHECK(zeros == 1);
}

TEST_CASE("psd factor rejects asymmetric input") {
    Matrix s(2, 2);
    s(0, 0) = s(1, 1) = 1.0;
    s(0, 1) = 0.5;
    s(1, 0) = 0.4;
    CHECK_THROWS_AS(rff::psd_factor(s), numeric_error);
}

TEST_CASE("psd projection is Frobenius-nearest among random PSD candidates") {
    SeededRng rng(31);
    Matrix s(5, 5);
    for (std::size_t i = 0; i < 5; ++i) {
        s(i, i) = 1.0;
        for (std::size_t j = i + 1; j < 5; ++j) {
            const double v = 2.0 * rng.next_double() - 1.0;
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    const auto f = rff::psd_factor(s);
    const Matrix recon = f.reconstruction();
    const double best = recon.frobenius_distance(s);
    for (int trial = 0; trial < 100; ++trial) {
        // Random PSD candidate: G G^T with unit diagonal, scaled arbitrarily.
        Matrix g(5, 3);
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                g(i, j) = rng.next_gaussian();
            }
        }
        Matrix p(5, 5);
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 5; ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < 3; ++k) {
                    dot += g(i, k) * g(j, k);
                }
                p(i, j) = dot;
            }
        }
        // Normalize the diagonal to 1 then scale by a random positive factor.
        std::vector<double> d(5);
        for (std::size_t i = 0; i < 5; ++i) {
            d[i] = std::sqrt(std::max(p(i, i), 1e-12));
        }
        const double scale = 0.1 + 1.9 * rng.next_double();
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t j = 0; j < 5; ++j) {
                p(i, j) = scale * p(i, j) / (d[i] * d[j]);
            }
        }
        CHECK(best <= p.frobenius_distance(s) + 1e-9);
    }
}

TEST_CASE("arcsine moment") {
    CHECK(rff::arcsine_moment(0.0) == 0.0);
    CHECK(rff::arcsine_moment(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(rff::arcsine_moment(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(rff::arcsine_moment(1.01), std::invalid_argument);
}

TEST_CASE("sign-correlation Monte Carlo matches the arcsine law") {
    // Loading rows with unit norm and inner product rho give jointly Gaussian
    // unit-variance pairs; the sampled sign correlation must follow
    // (2/pi) arcsin(rho).
    const std::size_t dim = 200000;
    for (double rho : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        Matrix loading(2, 2);
        loading(0, 0) = 1.0;
        loading(0, 1) = 0.0;
        loading(1, 0) = rho;
        loading(1, 1) = std::sqrt(1.0 - rho * rho);
        const auto vecs = rff::sample_signs_from_loading(loading, dim, SeededRng(404));
        const double emp = similarity(vecs[0], vecs[1]);
        CHECK(std::abs(emp - rff::arcsine_moment(rho)) <= 0.01);
    }
}

TEST_CASE("binary sampling achieves the identity target") {
    const auto target = SimilarityTarget::identity_similarity(4);
    const auto basis = rff::sample_correlated_binary(target, 100000, SeededRng(7));
    const auto emp = rff::empirical_similarity(basis);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(emp(i, i) == 1.0);
        for (std::size_t j = i + 1; j < 4; ++j) {
            CHECK(std::abs(emp(i, j)) <= 0.02);
        }
    }
}

TEST_CASE("binary sampling reaches the classic-unreachable -1/3 target") {
    const auto target = SimilarityTarget::constant_off_diagonal(3, -1.0 / 3.0);
    const auto basis = rff::sample_correlated_binary(target, 100000, SeededRng(8));
    const auto emp = rff::empirical_similarity(basis);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            CHECK(std::abs(emp(i, j) - (-1.0 / 3.0)) <= 0.02);
        }
    }
}

TEST_CASE("binary sampling of the inexpressible -1/2 target lands at the clipped value") {
    const auto target = SimilarityTarget::constant_off_diagonal(3, -0.5);
    const auto sigma = rff::sin_transform(target);
    const auto f = rff::psd_factor(sigma);
    CHECK(f.clipped_mass > 0.0);
    const Matrix clipped = f.reconstruction();
    // Oracle: expected sign correlation is (2/pi) arcsin of the clipped
    // correlation; for this target that value is exactly -1/3.
    const double expected =
        rff::arcsine_moment(clipped(0, 1) / std::sqrt(clipped(0, 0) * clipped(1, 1)));
    CHECK(expected == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));

    const auto basis = rff::sample_correlated_binary(target, 100000, SeededRng(9));
    const auto emp = rff::empirical_similarity(basis);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            CHECK(std::abs(emp(i, j) - expected) <= 0.02);
            CHECK(emp(i, j) > -0.5);  // strictly short of the unreachable target
        }
    }
}

TEST_CASE("empirical similarity deviation obeys the concentration bound") {
    const std::size_t dim = 40000;
    const auto target = SimilarityTarget::constant_off_diagonal(5, 0.3);
    const auto basis = rff::sample_correlated_binary(target, dim, SeededRng(10));
    const auto sigma = rff::sin_transform(target);
    const auto f = rff::psd_factor(sigma);
    const Matrix clipped = f.reconstruction();
    const auto emp = rff::empirical_similarity(basis);
    const double bound = 4.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) {
            const double mean =
                rff::arcsine_moment(clipped(i, j) / std::sqrt(clipped(i, i) * clipped(j, j)));
            CHECK(std::abs(emp(i, j) - mean) <= bound);
        }
    }
}

TEST_CASE("binary sampling is scale-free per loading row") {
    Matrix loading(3, 3);
    SeededRng fill(11);
    for (auto& v : loading.data()) {
        v = fill.next_gaussian();
    }
    Matrix scaled = loading;
    for (std::size_t k = 0; k < 3; ++k) {
        scaled(1, k) *= 3.7;  // positive row scaling
    }
    const auto a = rff::sample_signs_from_loading(loading, 5000, SeededRng(12));
    const auto b = rff::sample_signs_from_loading(scaled, 5000, SeededRng(12));
    CHECK(a == b);
}

TEST_CASE("cyclic sampling of the identity target is uniform per entity") {
    const int n = 8;
    const std::size_t dim = 100000;
    const auto target = SimilarityTarget::identity_similarity(3);
    const auto basis = rff::sample_correlated_cyclic(target, dim, n, SeededRng(13));
    for (const auto& v : basis.cyclic) {
        std::vector<double> counts(static_cast<std::size_t>(n), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            counts[v.element(i)] += 1.0;
        }
        const double expected = static_cast<double>(dim) / n;
        double chi2 = 0.0;
        for (double c : counts) {
            chi2 += (c - expected) * (c - expected) / expected;
        }
        // 7 degrees of freedom; 0.001 quantile is 24.3.
        CHECK(chi2 < 24.3);
    }
}

TEST_CASE("cyclic sampling with duplicate entities yields identical vectors") {
    const auto target = SimilarityTarget::constant_off_diagonal(3, 1.0);
    const auto basis = rff::sample_correlated_cyclic(target, 20000, 4, SeededRng(14));
    CHECK(basis.cyclic[0] == basis.cyclic[1]);
    CHECK(basis.cyclic[1] == basis.cyclic[2]);
}

TEST_CASE("order-2 cyclic sampling matches binary sampling in distribution") {
    const auto target = SimilarityTarget::constant_off_diagonal(3, -1.0 / 3.0);
    const std::size_t dim = 100000;
    const auto cyc = rff::sample_correlated_cyclic(target, dim, 2, SeededRng(15));
    const auto emp = rff::empirical_similarity(cyc);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            CHECK(std::abs(emp(i, j) - (-1.0 / 3.0)) <= 0.02);
        }
    }
}

TEST_CASE("empirical similarity of identical vectors is all ones") {
    rff::CorrelatedBasis basis;
    basis.family = rff::Family::Binary;
    basis.dim = 640;
    basis.target = SimilarityTarget::identity_similarity(3);
    const auto v = random_binary(640, 0.5, SeededRng(16));
    basis.binary = {v, v, v};
    const auto emp = rff::empirical_similarity(basis);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(emp(i, j) == 1.0);
        }
    }
}

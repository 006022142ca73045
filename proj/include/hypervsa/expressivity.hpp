#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hypervsa/binary_hv.hpp"
#include "hypervsa/matrix.hpp"
#include "hypervsa/rng.hpp"

namespace hypervsa::expressivity {

// One-dimensional similarity pattern: a sign vector with s_1 = +1 and its
// rank-one outer product. The D=1 similarity matrices are exactly these.
struct SignAtom {
    int n = 0;
    std::vector<int> pattern;  // entries in {-1,+1}, pattern[0] == +1
    Matrix outer;              // pattern * pattern^T
};

// All 2^(n-1) atoms in canonical order: lexicographic over patterns with +1
// sorting before -1, so the all-plus atom comes first. Guarded to n <= 12.
std::vector<SignAtom> enumerate_atoms(int n);

struct ExpressibilityReport {
    bool feasible = false;
    std::vector<double> weights;   // convex coefficients, canonical atom order
    double residual = 0.0;         // max abs deviation of the re-multiplied hull point
    std::string certificate_note;
};

// Convex-hull membership: is M within eps (entrywise, off-diagonal) of a
// convex combination of sign-atom outer products?
ExpressibilityReport check_binary_expressible(const SimilarityTarget& m, double eps);

// Classic random initialization can only reach expected 3x3 similarity
// matrices whose off-diagonals are (xy, xz, yz); their product is a square,
// so at least one must be nonnegative.
bool verify_classic_limit(const Matrix& expected, double tol);

// Expression DAG over generator hypervectors built from bind and permute
// nodes only (the classic-initialization composition class).
class ClassicExpr {
  public:
    static ClassicExpr leaf(int generator);
    static ClassicExpr bind(const ClassicExpr& lhs, const ClassicExpr& rhs);
    static ClassicExpr permute(const ClassicExpr& inner, long long shift);

    [[nodiscard]] BinaryHypervector eval(std::span<const BinaryHypervector> generators) const;
    [[nodiscard]] int max_generator() const;

  private:
    enum class Kind { Leaf, Bind, Permute };
    struct Node {
        Kind kind;
        int generator = -1;
        long long shift = 0;
        std::size_t lhs = 0;
        std::size_t rhs = 0;
    };
    std::vector<Node> nodes_;  // root is the last node
};

struct ClassicInitEstimate {
    Matrix mean;       // 3x3 empirical expectation
    Matrix std_error;  // per-entry standard error
    std::size_t trials = 0;
};

// Monte-Carlo estimate of E[M] for three composed vectors over K generators
// with per-generator +1 probabilities.
ClassicInitEstimate classic_init_expectation(const std::array<ClassicExpr, 3>& roots,
                                             std::span<const double> generator_probs,
                                             std::size_t trials, std::size_t dim, SeededRng rng);

// C(2k, k) / 4^k: exact 128-bit arithmetic through k = 30, log-gamma beyond.
double central_binomial_ratio(int k);

// theta_{2k+1} = arccos(C(2k,k)/4^k), in degrees. k <= 500.
double bundling_angle_theory_deg(int k);

// No-flip probability p_k = (1 + C(2k,k)/4^k) / 2.
double pk(int k);

// Checks p_{k+1} < p_k strictly for all k < kmax.
bool pk_monotone_check(int kmax);

// Bundles 2k+1 i.i.d. random vectors, measures the angle to a uniformly
// chosen member, averaged over trials. Requires dim >= 1000.
double bundling_angle_empirical_deg(int k, std::size_t dim, std::size_t trials, SeededRng rng);

}  // namespace hypervsa::expressivity

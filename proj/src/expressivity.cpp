#include "hypervsa/expressivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hypervsa/ops.hpp"
#include "hypervsa/simplex.hpp"

namespace hypervsa::expressivity {

std::vector<SignAtom> enumerate_atoms(int n) {
    if (n < 2 || n > 12) {
        throw std::invalid_argument("enumerate_atoms: n must be in [2, 12]");
    }
    const std::size_t count = 1ULL << (n - 1);
    std::vector<SignAtom> atoms;
    atoms.reserve(count);
    for (std::size_t a = 0; a < count; ++a) {
        SignAtom atom;
        atom.n = n;
        atom.pattern.resize(static_cast<std::size_t>(n));
        atom.pattern[0] = 1;
        for (int j = 1; j < n; ++j) {
            // High bit corresponds to s_2 so index order is lexicographic
            // with +1 before -1.
            const bool neg = (a >> (n - 1 - j)) & 1ULL;
            atom.pattern[static_cast<std::size_t>(j)] = neg ? -1 : 1;
        }
        atom.outer = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
                atom.outer(i, j) = static_cast<double>(atom.pattern[i] * atom.pattern[j]);
            }
        }
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

ExpressibilityReport check_binary_expressible(const SimilarityTarget& m, double eps) {
    if (m.n < 2 || m.n > 12) {
        throw std::invalid_argument("check_binary_expressible: n must be in [2, 12]");
    }
    if (eps < 0.0) {
        throw std::invalid_argument("check_binary_expressible: eps must be >= 0");
    }
    const auto atoms = enumerate_atoms(static_cast<int>(m.n));
    const std::size_t num_atoms = atoms.size();
    const std::size_t num_pairs = m.n * (m.n - 1) / 2;

    // Variables: lambda (num_atoms), upper slack u_p, lower surplus l_p.
    // Rows: sum lambda = 1; per pair p = (i<j):
    //   sum_s lambda_s O_s(i,j) + u_p = M_ij + eps
    //   sum_s lambda_s O_s(i,j) - l_p = M_ij - eps
    const std::size_t rows = 1 + 2 * num_pairs;
    const std::size_t cols = num_atoms + 2 * num_pairs;
    Matrix a(rows, cols);
    std::vector<double> b(rows, 0.0);

    for (std::size_t s = 0; s < num_atoms; ++s) {
        a(0, s) = 1.0;
    }
    b[0] = 1.0;

    std::size_t p = 0;
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = i + 1; j < m.n; ++j, ++p) {
            const std::size_t upper_row = 1 + 2 * p;
            const std::size_t lower_row = 2 + 2 * p;
            for (std::size_t s = 0; s < num_atoms; ++s) {
                a(upper_row, s) = atoms[s].outer(i, j);
                a(lower_row, s) = atoms[s].outer(i, j);
            }
            a(upper_row, num_atoms + p) = 1.0;
            a(lower_row, num_atoms + num_pairs + p) = -1.0;
            b[upper_row] = m.entries(i, j) + eps;
            b[lower_row] = m.entries(i, j) - eps;
        }
    }

    const auto lp = hypervsa::lp::find_feasible_point(a, b, 1e-9);

    ExpressibilityReport report;
    report.weights.assign(num_atoms, 0.0);
    double weight_sum = 0.0;
    for (std::size_t s = 0; s < num_atoms; ++s) {
        report.weights[s] = std::max(lp.x[s], 0.0);
        weight_sum += report.weights[s];
    }
    if (weight_sum > 0.0) {
        for (auto& w : report.weights) {
            w /= weight_sum;
        }
    }
    // Independent verification: re-multiply the weights against the atoms.
    double residual = 0.0;
    std::size_t worst_i = 0;
    std::size_t worst_j = 1;
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = i + 1; j < m.n; ++j) {
            double value = 0.0;
            for (std::size_t s = 0; s < num_atoms; ++s) {
                value += report.weights[s] * atoms[s].outer(i, j);
            }
            const double dev = std::abs(value - m.entries(i, j));
            if (dev > residual) {
                residual = dev;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    report.residual = residual;
    report.feasible = lp.feasible && residual <= eps + 1e-9;

    std::ostringstream note;
    if (report.feasible) {
        note << "feasible: " << num_atoms << " atoms, re-multiplied residual " << residual;
    } else {
        note << "infeasible: phase-1 mass " << lp.infeasibility
             << "; closest hull point misses entry (" << worst_i << "," << worst_j
             << ") target " << m.entries(worst_i, worst_j) << " by " << residual;
    }
    report.certificate_note = note.str();
    return report;
}

bool verify_classic_limit(const Matrix& expected, double tol) {
    if (expected.rows() != 3 || expected.cols() != 3) {
        throw std::invalid_argument("verify_classic_limit: 3x3 matrix required");
    }
    if (expected.max_asymmetry() > 1e-9) {
        throw std::invalid_argument("verify_classic_limit: matrix must be symmetric");
    }
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(expected(i, i) - 1.0) > 1e-9) {
            throw std::invalid_argument("verify_classic_limit: unit diagonal required");
        }
    }
    const double worst = std::max({expected(0, 1), expected(0, 2), expected(1, 2)});
    return worst >= -tol;
}

ClassicExpr ClassicExpr::leaf(int generator) {
    if (generator < 0) {
        throw std::invalid_argument("ClassicExpr: generator index must be >= 0");
    }
    ClassicExpr e;
    e.nodes_.push_back(Node{Kind::Leaf, generator, 0, 0, 0});
    return e;
}

ClassicExpr ClassicExpr::bind(const ClassicExpr& lhs, const ClassicExpr& rhs) {
    ClassicExpr e;
    e.nodes_ = lhs.nodes_;
    const std::size_t offset = e.nodes_.size();
    for (Node node : rhs.nodes_) {
        if (node.kind != Kind::Leaf) {
            node.lhs += offset;
            node.rhs += offset;
        }
        e.nodes_.push_back(node);
    }
    e.nodes_.push_back(Node{Kind::Bind, -1, 0, offset - 1, e.nodes_.size() - 1});
    return e;
}

ClassicExpr ClassicExpr::permute(const ClassicExpr& inner, long long shift) {
    ClassicExpr e;
    e.nodes_ = inner.nodes_;
    e.nodes_.push_back(Node{Kind::Permute, -1, shift, e.nodes_.size() - 1, 0});
    return e;
}

BinaryHypervector ClassicExpr::eval(std::span<const BinaryHypervector> generators) const {
    std::vector<BinaryHypervector> values(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& node = nodes_[i];
        switch (node.kind) {
            case Kind::Leaf:
                if (static_cast<std::size_t>(node.generator) >= generators.size()) {
                    throw std::invalid_argument("ClassicExpr::eval: generator index out of range");
                }
                values[i] = generators[static_cast<std::size_t>(node.generator)];
                break;
            case Kind::Bind:
                values[i] = hypervsa::bind(values[node.lhs], values[node.rhs]);
                break;
            case Kind::Permute:
                values[i] = hypervsa::permute(values[node.lhs], node.shift);
                break;
        }
    }
    return values.back();
}

int ClassicExpr::max_generator() const {
    int top = -1;
    for (const Node& node : nodes_) {
        if (node.kind == Kind::Leaf) {
            top = std::max(top, node.generator);
        }
    }
    return top;
}

ClassicInitEstimate classic_init_expectation(const std::array<ClassicExpr, 3>& roots,
                                             std::span<const double> generator_probs,
                                             std::size_t trials, std::size_t dim, SeededRng rng) {
    if (trials == 0 || dim == 0) {
        throw std::invalid_argument("classic_init_expectation: trials and dim must be positive");
    }
    for (double p : generator_probs) {
        if (p < 0.0 || p > 1.0) {
            throw std::invalid_argument("classic_init_expectation: probabilities must be in [0, 1]");
        }
    }
    int needed = -1;
    for (const auto& root : roots) {
        needed = std::max(needed, root.max_generator());
    }
    if (needed >= static_cast<int>(generator_probs.size())) {
        throw std::invalid_argument("classic_init_expectation: composition uses generator " +
                                    std::to_string(needed) + " but only " +
                                    std::to_string(generator_probs.size()) + " probabilities given");
    }

    // Per-trial off-diagonal triples (01, 02, 12); filled in parallel, then
    // reduced in trial order so the result is thread-count independent.
    std::vector<std::array<double, 3>> samples(trials);
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < static_cast<long long>(trials); ++t) {
        SeededRng trial_rng = rng.derive(static_cast<std::uint64_t>(t));
        std::vector<BinaryHypervector> gens;
        gens.reserve(generator_probs.size());
        for (std::size_t k = 0; k < generator_probs.size(); ++k) {
            gens.push_back(random_binary(dim, generator_probs[k], trial_rng.derive(k)));
        }
        const BinaryHypervector v0 = roots[0].eval(gens);
        const BinaryHypervector v1 = roots[1].eval(gens);
        const BinaryHypervector v2 = roots[2].eval(gens);
        samples[static_cast<std::size_t>(t)] = {similarity(v0, v1), similarity(v0, v2),
                                                similarity(v1, v2)};
    }

    std::array<double, 3> mean = {0.0, 0.0, 0.0};
    for (const auto& s : samples) {
        for (int e = 0; e < 3; ++e) {
            mean[static_cast<std::size_t>(e)] += s[static_cast<std::size_t>(e)];
        }
    }
    for (auto& v : mean) {
        v /= static_cast<double>(trials);
    }
    std::array<double, 3> var = {0.0, 0.0, 0.0};
    for (const auto& s : samples) {
        for (int e = 0; e < 3; ++e) {
            const double d = s[static_cast<std::size_t>(e)] - mean[static_cast<std::size_t>(e)];
            var[static_cast<std::size_t>(e)] += d * d;
        }
    }

    ClassicInitEstimate est;
    est.trials = trials;
    est.mean = Matrix::identity(3);
    est.std_error = Matrix(3, 3);
    const std::array<std::pair<std::size_t, std::size_t>, 3> pairs = {
        {{0, 1}, {0, 2}, {1, 2}}};
    for (std::size_t e = 0; e < 3; ++e) {
        const auto [i, j] = pairs[e];
        est.mean(i, j) = mean[e];
        est.mean(j, i) = mean[e];
        const double se = trials > 1
                              ? std::sqrt(var[e] / (static_cast<double>(trials) - 1.0) /
                                          static_cast<double>(trials))
                              : 0.0;
        est.std_error(i, j) = se;
        est.std_error(j, i) = se;
    }
    return est;
}

double central_binomial_ratio(int k) {
    if (k < 0) {
        throw std::invalid_argument("central_binomial_ratio: k must be >= 0");
    }
    if (k <= 30) {
        unsigned __int128 binom = 1;
        for (int i = 1; i <= k; ++i) {
            // C(2k, k) built incrementally: multiply by (k+i), divide by i.
            binom = binom * static_cast<unsigned>(k + i) / static_cast<unsigned>(i);
        }
        long double ratio = static_cast<long double>(binom);
        ratio = std::ldexp(ratio, -2 * k);  // exact power-of-two scaling
        return static_cast<double>(ratio);
    }
    const double log_ratio = std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0) -
                             2.0 * static_cast<double>(k) * std::numbers::ln2;
    return std::exp(log_ratio);
}

double bundling_angle_theory_deg(int k) {
    if (k < 0) {
        throw std::invalid_argument("bundling_angle_theory_deg: k must be >= 0");
    }
    if (k > 500) {
        throw std::invalid_argument("bundling_angle_theory_deg: k must be <= 500");
    }
    return std::acos(central_binomial_ratio(k)) * 180.0 / std::numbers::pi;
}

double pk(int k) {
    return 0.5 * (1.0 + central_binomial_ratio(k));
}

bool pk_monotone_check(int kmax) {
    for (int k = 0; k < kmax; ++k) {
        if (!(pk(k + 1) < pk(k))) {
            return false;
        }
    }
    return true;
}

double bundling_angle_empirical_deg(int k, std::size_t dim, std::size_t trials, SeededRng rng) {
    if (k < 0) {
        throw std::invalid_argument("bundling_angle_empirical_deg: k must be >= 0");
    }
    if (dim < 1000) {
        throw std::invalid_argument("bundling_angle_empirical_deg: dim must be >= 1000");
    }
    if (trials == 0) {
        throw std::invalid_argument("bundling_angle_empirical_deg: trials must be >= 1");
    }
    const std::size_t members = 2 * static_cast<std::size_t>(k) + 1;
    std::vector<double> angles(trials, 0.0);
#pragma omp parallel for schedule(static)
    for (long long t = 0; t < static_cast<long long>(trials); ++t) {
        SeededRng trial_rng = rng.derive(static_cast<std::uint64_t>(t));
        std::vector<BinaryHypervector> vs;
        vs.reserve(members);
        for (std::size_t j = 0; j < members; ++j) {
            vs.push_back(random_binary(dim, 0.5, trial_rng.derive(j)));
        }
        const BinaryHypervector bundled = bundle(vs, trial_rng.derive(members));
        SeededRng pick_rng = trial_rng.derive(members + 1);
        auto pick = static_cast<std::size_t>(pick_rng.next_double() * static_cast<double>(members));
        pick = std::min(pick, members - 1);
        const double s = std::clamp(similarity(bundled, vs[pick]), -1.0, 1.0);
        angles[static_cast<std::size_t>(t)] = std::acos(s) * 180.0 / std::numbers::pi;
    }
    double sum = 0.0;
    for (double a : angles) {
        sum += a;
    }
    return sum / static_cast<double>(trials);
}

}  // namespace hypervsa::expressivity

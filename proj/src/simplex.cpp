#include "hypervsa/simplex.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "hypervsa/errors.hpp"

namespace hypervsa::lp {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

FeasibilityResult find_feasible_point(const Matrix& a, std::span<const double> b, double tol) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) {
        throw std::invalid_argument("find_feasible_point: rhs length mismatch");
    }

    // Tableau columns: n structural + m artificial + 1 rhs. Rows flipped so
    // rhs >= 0; artificial basis start. Last row is the phase-1 objective.
    const std::size_t cols = n + m + 1;
    std::vector<double> t((m + 1) * cols, 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * cols + c]; };

    for (std::size_t r = 0; r < m; ++r) {
        const double flip = b[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            at(r, c) = flip * a(r, c);
        }
        at(r, n + r) = 1.0;
        at(r, n + m) = flip * b[r];
    }
    // Objective row: minimize sum of artificials; reduced costs after pricing
    // out the artificial basis are -sum of each structural column.
    for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            s += at(r, c);
        }
        at(m, c) = -s;
    }
    double obj = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        obj += at(r, n + m);
    }
    at(m, n + m) = -obj;

    std::vector<std::size_t> basis(m);
    std::uint64_t basis_hash = 0;
    for (std::size_t r = 0; r < m; ++r) {
        basis[r] = n + r;
        basis_hash ^= mix64(n + r);
    }

    const double pivot_eps = 1e-11;
    const std::size_t max_pivots = 5000000;
    FeasibilityResult result;

    // Dantzig pricing normally; a repeated basis on a degenerate plateau
    // switches to Bland's rule until the objective next strictly improves,
    // which rules out cycling.
    bool bland_mode = false;
    double last_objective = std::numeric_limits<double>::infinity();
    std::unordered_set<std::uint64_t> plateau_bases;

    while (true) {
        if (result.pivots >= max_pivots) {
            throw numeric_error("simplex: pivot limit exceeded");
        }
        std::size_t enter = cols;
        if (bland_mode) {
            for (std::size_t c = 0; c < n + m; ++c) {
                if (at(m, c) < -pivot_eps) {
                    enter = c;
                    break;
                }
            }
        } else {
            double most_negative = -pivot_eps;
            for (std::size_t c = 0; c < n + m; ++c) {
                if (at(m, c) < most_negative) {
                    most_negative = at(m, c);
                    enter = c;
                }
            }
        }
        if (enter == cols) {
            break;  // optimal
        }
        // Ratio test; ties broken by the lowest basis variable index.
        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double coef = at(r, enter);
            if (coef > pivot_eps) {
                const double ratio = at(r, n + m) / coef;
                if (ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 &&
                     (leave == m || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave == m) {
            // Unbounded phase-1 cannot happen (objective bounded below by 0);
            // bail out defensively.
            break;
        }
        // Pivot.
        const double pivot = at(leave, enter);
        for (std::size_t c = 0; c < cols; ++c) {
            at(leave, c) /= pivot;
        }
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave) {
                continue;
            }
            const double factor = at(r, enter);
            if (factor != 0.0) {
                for (std::size_t c = 0; c < cols; ++c) {
                    at(r, c) -= factor * at(leave, c);
                }
            }
        }
        basis_hash ^= mix64(basis[leave]) ^ mix64(enter);
        basis[leave] = enter;
        ++result.pivots;

        const double objective = -at(m, n + m);
        if (objective < last_objective - 1e-13) {
            last_objective = objective;
            bland_mode = false;
            plateau_bases.clear();
        } else if (!bland_mode) {
            if (!plateau_bases.insert(basis_hash).second) {
                bland_mode = true;  // basis seen before on this plateau
            }
            if (plateau_bases.size() > 100000) {
                plateau_bases.clear();  // bound memory; worst case re-detects
            }
        }
    }

    result.infeasibility = -at(m, n + m);
    result.feasible = result.infeasibility <= tol;
    result.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) {
            result.x[basis[r]] = at(r, n + m);
        }
    }
    return result;
}

}  // namespace hypervsa::lp

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hypervsa/matrix.hpp"

namespace hypervsa::lp {

struct FeasibilityResult {
    bool feasible = false;
    std::vector<double> x;        // candidate point (structural variables)
    double infeasibility = 0.0;   // phase-1 optimum (sum of artificials)
    std::size_t pivots = 0;
};

// Finds x >= 0 with A x = b by phase-1 dense simplex with Bland's rule.
// Declares feasible when the residual artificial mass drops below tol.
FeasibilityResult find_feasible_point(const Matrix& a, std::span<const double> b,
                                      double tol = 1e-9);

}  // namespace hypervsa::lp

#pragma once

#include <vector>

#include "hypervsa/matrix.hpp"

namespace hypervsa {

struct SymmetricEigen {
    Matrix vectors;               // columns are orthonormal eigenvectors
    std::vector<double> values;   // matching eigenvalues, descending
};

// Cyclic Jacobi rotations; converges when the off-diagonal Frobenius mass
// drops to off_tol (absolute). Sized for the n <= 1024 matrices this project
// works with.
SymmetricEigen jacobi_eigendecompose(const Matrix& s, double off_tol = 1e-10,
                                     int max_sweeps = 100);

}  // namespace hypervsa

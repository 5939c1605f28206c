#pragma once

#include <Eigen/Dense>

namespace taskrisk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order;
/// column i of `vectors` pairs with `values[i]`.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
    int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition. Converges when the off-diagonal Frobenius
/// norm drops below rel_tol * ||A||_F; throws ConvergenceError after max_sweeps.
SymmetricEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-12, int max_sweeps = 100);

/// Natural log of det(a) for a square matrix. Throws SingularityError when det(a) <= 0.
double log_determinant(const Matrix& a);

/// Inverse through partial-pivot LU. Throws SingularityError when a is singular
/// or when ||a^-1 a - I||_max exceeds check_tol.
Matrix checked_inverse(const Matrix& a, double check_tol = 1e-8);

/// Ratio of largest to smallest absolute eigenvalue of a symmetric matrix.
double condition_number(const Matrix& symmetric);

}  // namespace taskrisk

#include "taskrisk/linalg.hpp"

#include "taskrisk/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace taskrisk {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) s += a(i, j) * a(i, j);
        }
    }
    return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Matrix& input, double rel_tol, int max_sweeps) {
    const Eigen::Index n = input.rows();
    Matrix a = 0.5 * (input + input.transpose());
    Matrix v = Matrix::Identity(n, n);
    const double threshold = rel_tol * a.norm();

    int sweep = 0;
    double off = off_diagonal_norm(a);
    while (off > threshold) {
        if (sweep == max_sweeps) throw ConvergenceError("jacobi eigensolver", off);
        ++sweep;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle that annihilates a(p,q) (Rutishauser's stable form).
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        off = off_diagonal_norm(a);
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) > a(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        out.values(r) = a(order[static_cast<std::size_t>(r)], order[static_cast<std::size_t>(r)]);
        out.vectors.col(r) = v.col(order[static_cast<std::size_t>(r)]);
    }
    out.sweeps = sweep;
    return out;
}

double log_determinant(const Matrix& a) {
    const Eigen::PartialPivLU<Matrix> lu(a);
    const Matrix& u = lu.matrixLU();
    double log_abs = 0.0;
    double sign = lu.permutationP().determinant();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const double d = u(i, i);
        if (d == 0.0 || !std::isfinite(d)) throw SingularityError("determinant is zero");
        if (d < 0) sign = -sign;
        log_abs += std::log(std::abs(d));
    }
    if (sign <= 0) throw SingularityError("determinant is negative (matrix is indefinite)");
    return log_abs;
}

Matrix checked_inverse(const Matrix& a, double check_tol) {
    const Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) throw SingularityError("matrix is not invertible");
    Matrix inv = lu.inverse();
    const double residual = (inv * a - Matrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
    if (!(residual <= check_tol)) {
        throw SingularityError("inverse check failed (|A^-1 A - I| = " + std::to_string(residual) + ")");
    }
    return inv;
}

double condition_number(const Matrix& symmetric) {
    const auto eig = jacobi_eigen(symmetric);
    const Vector abs_values = eig.values.cwiseAbs();
    const double smallest = abs_values.minCoeff();
    if (smallest == 0.0) return std::numeric_limits<double>::infinity();
    return abs_values.maxCoeff() / smallest;
}

}  // namespace taskrisk

#pragma once

#include <Eigen/Dense>

#include "aoii/errors.hpp"

namespace aoii {

using Matrix = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;
using Vec = Eigen::VectorXd;

/// a^n for integer n >= 0. Plain products for small exponents, repeated
/// squaring above 8.
Matrix matrix_power(const Matrix& a, long n);

/// LU factorization of (I - a) with a singularity guard.
/// Throws SingularSystem when (I - a) is not invertible to working precision.
class TransientSolver {
public:
    explicit TransientSolver(const Matrix& a);

    /// (I - a)^{-1} x
    Vec solve(const Vec& x) const;
    /// y (I - a)^{-1}
    RowVec solve_left(const RowVec& y) const;
    Matrix inverse() const;

    int size() const { return static_cast<int>(lu_.rows()); }

private:
    Eigen::PartialPivLU<Matrix> lu_;   // I - a
    Eigen::PartialPivLU<Matrix> lu_t_; // (I - a)^T, for left solves
};

/// True iff the directed graph of strictly positive entries of p is strongly
/// connected.
bool is_irreducible(const Matrix& p);

} // namespace aoii

#include "aoii/linalg.hpp"

#include <vector>

namespace aoii {

Matrix matrix_power(const Matrix& a, long n) {
    const auto k = a.rows();
    if (n < 0) {
        throw OutOfRange("matrix_power: negative exponent");
    }
    Matrix result = Matrix::Identity(k, k);
    if (n <= 8) {
        for (long i = 0; i < n; ++i) {
            result = result * a;
        }
        return result;
    }
    Matrix base = a;
    long e = n;
    while (e > 0) {
        if (e & 1) {
            result = result * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

TransientSolver::TransientSolver(const Matrix& a)
    : lu_(Matrix(Matrix::Identity(a.rows(), a.cols()) - a)),
      lu_t_(Matrix((Matrix::Identity(a.rows(), a.cols()) - a).transpose())) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("TransientSolver: matrix must be square");
    }
    if (lu_.rcond() < 1e-13) {
        throw SingularSystem("(I - A) is numerically singular; absorption is not certain");
    }
}

Vec TransientSolver::solve(const Vec& x) const {
    return lu_.solve(x);
}

RowVec TransientSolver::solve_left(const RowVec& y) const {
    // y (I-a)^{-1} via the transposed system
    return lu_t_.solve(y.transpose()).transpose();
}

Matrix TransientSolver::inverse() const {
    return lu_.inverse();
}

bool is_irreducible(const Matrix& p) {
    const int n = static_cast<int>(p.rows());
    if (n == 0) {
        return false;
    }
    // strong connectivity: forward reachability from 0 in G and in G^T
    auto reaches_all = [&](bool transposed) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{0};
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                double w = transposed ? p(v, u) : p(u, v);
                if (w > 0.0 && !seen[v]) {
                    seen[v] = true;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == n;
    };
    return reaches_all(false) && reaches_all(true);
}

} // namespace aoii

#include "aoii/markov.hpp"

#include <cmath>
#include <string>

namespace aoii {

namespace {

void check_probability_entries(const Matrix& m, const char* what, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            if (v < -tol) {
                throw NegativeEntry(std::string(what) + ": entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") = " + std::to_string(v));
            }
            if (v > 1.0 + tol) {
                throw NotStochastic(std::string(what) + ": entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") exceeds 1");
            }
        }
    }
}

} // namespace

DtmcSource DtmcSource::validate(Matrix q, const Tolerances& tol) {
    if (q.rows() != q.cols() || q.rows() < 2) {
        throw DimensionMismatch("DtmcSource: need a square matrix with n >= 2");
    }
    check_probability_entries(q, "DtmcSource", 1e-12);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        const double s = q.row(i).sum();
        if (std::abs(s - 1.0) > tol.validation) {
            throw NotStochastic("DtmcSource: row " + std::to_string(i) + " sums to " +
                                std::to_string(s));
        }
    }
    if (!is_irreducible(q)) {
        throw NotIrreducible("DtmcSource: chain is not irreducible");
    }
    return DtmcSource(std::move(q));
}

Amc::Amc(Matrix a, Matrix b, RowVec beta, const Tolerances& tol)
    : a_(std::move(a)), b_(std::move(b)), beta_(std::move(beta)) {
    if (a_.rows() != a_.cols() || b_.rows() != a_.rows() || beta_.cols() != a_.rows()) {
        throw DimensionMismatch("Amc: inconsistent block dimensions");
    }
    check_probability_entries(a_, "Amc TPTS", 1e-12);
    check_probability_entries(b_, "Amc APTS", 1e-12);
    for (Eigen::Index i = 0; i < a_.rows(); ++i) {
        const double s = a_.row(i).sum() + b_.row(i).sum();
        if (std::abs(s - 1.0) > tol.validation) {
            throw NotStochastic("Amc: row " + std::to_string(i) + " of [A|B] sums to " +
                                std::to_string(s));
        }
    }
    double bsum = 0.0;
    for (Eigen::Index i = 0; i < beta_.cols(); ++i) {
        if (beta_(i) < -1e-12 || beta_(i) > 1.0 + 1e-12) {
            throw NotStochastic("Amc: IPV entry out of [0,1]");
        }
        bsum += beta_(i);
    }
    if (bsum > 1.0 + 1e-12) {
        throw NotStochastic("Amc: IPV sums above 1");
    }
    // absorption must be certain: (I - A) invertible with bounded condition
    TransientSolver guard(a_);
    (void)guard;
}

double ph_pmf(const RowVec& beta, const Matrix& a, long t) {
    if (t < 1) {
        throw OutOfRange("ph_pmf: t must be >= 1");
    }
    const Vec exit = Vec::Ones(a.rows()) - a * Vec::Ones(a.rows());
    if (t <= 1) {
        return beta.dot(exit);
    }
    return (beta * matrix_power(a, t - 1)).dot(exit);
}

double ph_pmf(const Amc& amc, long t) {
    return ph_pmf(amc.beta(), amc.a(), t);
}

Matrix fundamental_matrix(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatch("fundamental_matrix: matrix must be square");
    }
    TransientSolver solver(a);
    return solver.inverse();
}

RowVec absorption_probabilities(const Amc& amc) {
    TransientSolver solver(amc.a());
    const RowVec w = solver.solve_left(amc.beta());
    RowVec probs = w * amc.b();
    if (std::abs(probs.sum() - amc.beta().sum()) > 1e-9) {
        throw SingularSystem("absorption_probabilities: mass balance violated");
    }
    return probs;
}

RowVec stationary_distribution(const Matrix& p, const Tolerances& tol) {
    const auto n = p.rows();
    if (n != p.cols() || n < 1) {
        throw DimensionMismatch("stationary_distribution: matrix must be square");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = p.row(i).sum();
        if (std::abs(s - 1.0) > tol.validation) {
            throw NotStochastic("stationary_distribution: row " + std::to_string(i) +
                                " sums to " + std::to_string(s));
        }
    }
    if (!is_irreducible(p)) {
        throw NotIrreducible("stationary_distribution: P is not irreducible");
    }
    // pi (I - P + 1 1^T) = 1^T  solved as the transposed system
    const Matrix m = Matrix::Identity(n, n) - p + Matrix::Ones(n, n);
    Eigen::PartialPivLU<Matrix> lu(m.transpose());
    if (lu.rcond() < 1e-13) {
        throw SingularSystem("stationary_distribution: singular system");
    }
    Vec pi_t = lu.solve(Vec::Ones(n));
    RowVec pi = pi_t.transpose();
    pi /= pi.sum();
    if (pi.minCoeff() < -1e-12) {
        throw SingularSystem("stationary_distribution: negative stationary mass");
    }
    pi = pi.cwiseMax(0.0);
    const double residual = (pi * p - pi).cwiseAbs().maxCoeff();
    if (residual > tol.algebra) {
        throw SingularSystem("stationary_distribution: residual " + std::to_string(residual) +
                             " exceeds tolerance");
    }
    return pi;
}

} // namespace aoii

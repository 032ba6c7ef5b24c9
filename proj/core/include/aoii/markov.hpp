#pragma once

#include "aoii/linalg.hpp"
#include "aoii/tolerances.hpp"

namespace aoii {

/// Irreducible row-stochastic source chain. Construct through validate().
class DtmcSource {
public:
    /// Checks entries in [0,1], row sums = 1 and irreducibility.
    /// Throws NegativeEntry, NotStochastic, NotIrreducible.
    static DtmcSource validate(Matrix q, const Tolerances& tol = {});

    int size() const { return static_cast<int>(q_.rows()); }
    const Matrix& q() const { return q_; }
    double q(int i, int j) const { return q_(i, j); }

private:
    explicit DtmcSource(Matrix q) : q_(std::move(q)) {}
    Matrix q_;
};

/// Absorbing Markov chain (A, B, beta): K transient states, L absorbing.
/// Rows of [A | B] sum to 1; beta may be sub-stochastic (the deficit is
/// mass absorbed before the first step).
class Amc {
public:
    Amc(Matrix a, Matrix b, RowVec beta, const Tolerances& tol = {});

    const Matrix& a() const { return a_; }
    const Matrix& b() const { return b_; }
    const RowVec& beta() const { return beta_; }
    int num_transient() const { return static_cast<int>(a_.rows()); }
    int num_absorbing() const { return static_cast<int>(b_.cols()); }

private:
    Matrix a_;
    Matrix b_;
    RowVec beta_;
};

/// P(T = t) for the absorption time of the chain with IPV beta and TPTS a:
/// beta a^{t-1} (1 - a 1), t >= 1.
double ph_pmf(const RowVec& beta, const Matrix& a, long t);
double ph_pmf(const Amc& amc, long t);

/// F = (I - A)^{-1}; entry (i,j) is the expected number of visits to
/// transient state j starting from i.
Matrix fundamental_matrix(const Matrix& a);

/// beta (I - A)^{-1} B: probability of ending in each absorbing state.
/// Entries sum to beta * 1.
RowVec absorption_probabilities(const Amc& amc);

/// Unique pi with pi P = pi, pi 1 = 1 for an irreducible row-stochastic P,
/// via the dense solve pi (I - P + 1 1^T) = 1^T.
RowVec stationary_distribution(const Matrix& p, const Tolerances& tol = {});

} // namespace aoii

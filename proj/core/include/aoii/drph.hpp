#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aoii/linalg.hpp"
#include "aoii/markov.hpp"
#include "aoii/tolerances.hpp"

namespace aoii {

/// Dual-regime absorbing chain (beta1, A1, A2, B1, B2, tau): transition
/// blocks switch from regime 1 to regime 2 once the elapsed time passes tau.
/// Regime 1 may be non-absorbing (it only runs tau slots); (I - A2) must be
/// invertible so regime 2 absorbs with certainty.
class DrAmc {
public:
    DrAmc(RowVec beta1, Matrix a1, Matrix a2, Matrix b1, Matrix b2, long tau,
          const Tolerances& tol = {});

    const RowVec& beta1() const { return beta1_; }
    const Matrix& a1() const { return a1_; }
    const Matrix& a2() const { return a2_; }
    const Matrix& b1() const { return b1_; }
    const Matrix& b2() const { return b2_; }
    long tau() const { return tau_; }
    int num_transient() const { return static_cast<int>(a1_.rows()); }

private:
    RowVec beta1_;
    Matrix a1_, a2_, b1_, b2_;
    long tau_;
};

/// Absorption-time law of a DR-AMC with absorbing states merged.
class DrPh {
public:
    DrPh(RowVec beta1, Matrix a1, Matrix a2, long tau, const Tolerances& tol = {});

    const RowVec& beta1() const { return beta1_; }
    const Matrix& a1() const { return a1_; }
    const Matrix& a2() const { return a2_; }
    long tau() const { return tau_; }
    int num_transient() const { return static_cast<int>(a1_.rows()); }

private:
    RowVec beta1_;
    Matrix a1_, a2_;
    long tau_;
};

/// AoII penalty f(t) = sum_k coeffs[k] t^k, degree <= 8.
class PolynomialPenalty {
public:
    explicit PolynomialPenalty(std::vector<double> coeffs);

    double operator()(long t) const;
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Probes f(t) on t = 1..1000 and the leading coefficient sign; returns
    /// a description when the penalty takes negative values there.
    std::optional<std::string> nonnegativity_warning() const;

private:
    std::vector<double> coeffs_;
};

using PenaltySet = std::vector<PolynomialPenalty>;

/// beta2 = beta1 A1^tau: sub-distribution over phases on entry to regime 2.
RowVec regime2_ipv(const DrPh& d);

/// P(T = t): regime-1 kernel for t <= tau, (beta2, A2) with exponent
/// t - tau - 1 beyond.
double drph_pmf(const DrPh& d, long t);

/// P(T > t) = beta1 A1^t 1 for t <= tau, beta2 A2^{t-tau} 1 beyond.
double drph_survival(const DrPh& d, long t);

/// Stirling numbers of the second kind via S(n,m) = m S(n-1,m) + S(n-1,m-1).
/// Exact; throws OutOfRange outside 1 <= m <= n <= 64 or if the exact value
/// does not fit in 64 bits.
std::uint64_t stirling2(int n, int m);

/// sum_{t>=1} t^k beta a^{t-1} (1 - a 1) in closed form, by converting t^k
/// to falling-factorial powers: sum_n S(k,n) n! beta a^{n-1} (I-a)^{-n} 1.
double ph_power_sum(const RowVec& beta, const Matrix& a, int k);

/// E[T^m], m <= 8: finite regime-1 sum plus the regime-2 tail expanded with
/// the substitution s = t - tau (only nonnegative powers of A2 appear).
double drph_moment(const DrPh& d, int m);

/// a = E[sum_{t=1}^{T} f(t)] = sum_{t>=1} f(t) P(T >= t), evaluated in
/// closed form for polynomial f.
double expected_penalty_sum(const DrPh& d, const PolynomialPenalty& f);

/// Survival-form evaluation for arbitrary f with an explicit horizon.
/// Throws HorizonTooSmall when the tail past the horizon is not negligible.
double expected_penalty_sum(const DrPh& d, const std::function<double(long)>& f, long horizon,
                            const Tolerances& tol = {});

/// Arbitrary-f overload without a horizon: always throws
/// TruncationHorizonRequired (no closed form is attempted).
double expected_penalty_sum(const DrPh& d, const std::function<double(long)>& f);

/// Brute-force reference: direct summation of f(t) P(T >= t) up to horizon.
/// Independent of the closed-form path (no matrix inverses).
double truncated_penalty_oracle(const DrPh& d, const std::function<double(long)>& f, long horizon,
                                const Tolerances& tol = {});

/// Incremental pmf/survival walker; O(K^2) per step. Starts at t = 1.
class DrPhSeries {
public:
    explicit DrPhSeries(const DrPh& d);

    long t() const { return t_; }
    double pmf() const { return pmf_; }
    double survival() const { return survival_; } // P(T > t)
    void advance();

private:
    const DrPh& d_;
    long t_;
    RowVec w_; // beta * (regime kernel)^(t-1), regime-local exponent
    double pmf_;
    double survival_;
};

} // namespace aoii

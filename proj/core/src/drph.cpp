#include "aoii/drph.hpp"

#include <array>
#include <cmath>

namespace aoii {

namespace {

void check_unit_interval(const Matrix& m, const char* what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) < -1e-12) {
                throw NegativeEntry(std::string(what) + ": negative entry");
            }
            if (m(i, j) > 1.0 + 1e-12) {
                throw NotStochastic(std::string(what) + ": entry exceeds 1");
            }
        }
    }
}

void check_sub_stochastic_ipv(const RowVec& beta) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < beta.cols(); ++i) {
        if (beta(i) < -1e-12 || beta(i) > 1.0 + 1e-12) {
            throw NotStochastic("IPV entry out of [0,1]");
        }
        s += beta(i);
    }
    if (s > 1.0 + 1e-12) {
        throw NotStochastic("IPV sums above 1");
    }
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

} // namespace

DrAmc::DrAmc(RowVec beta1, Matrix a1, Matrix a2, Matrix b1, Matrix b2, long tau,
             const Tolerances& tol)
    : beta1_(std::move(beta1)), a1_(std::move(a1)), a2_(std::move(a2)), b1_(std::move(b1)),
      b2_(std::move(b2)), tau_(tau) {
    const auto k = a1_.rows();
    if (a1_.cols() != k || a2_.rows() != k || a2_.cols() != k || b1_.rows() != k ||
        b2_.rows() != k || beta1_.cols() != k) {
        throw DimensionMismatch("DrAmc: inconsistent block dimensions");
    }
    if (tau_ < 0) {
        throw OutOfRange("DrAmc: tau must be nonnegative");
    }
    check_unit_interval(a1_, "DrAmc A1");
    check_unit_interval(a2_, "DrAmc A2");
    check_unit_interval(b1_, "DrAmc B1");
    check_unit_interval(b2_, "DrAmc B2");
    check_sub_stochastic_ipv(beta1_);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double s1 = a1_.row(i).sum() + b1_.row(i).sum();
        const double s2 = a2_.row(i).sum() + b2_.row(i).sum();
        if (std::abs(s1 - 1.0) > tol.validation || std::abs(s2 - 1.0) > tol.validation) {
            throw NotStochastic("DrAmc: row " + std::to_string(i) + " of [A|B] does not sum to 1");
        }
    }
    TransientSolver regime2_guard(a2_);
    (void)regime2_guard;
}

DrPh::DrPh(RowVec beta1, Matrix a1, Matrix a2, long tau, const Tolerances& tol)
    : beta1_(std::move(beta1)), a1_(std::move(a1)), a2_(std::move(a2)), tau_(tau) {
    (void)tol;
    const auto k = a1_.rows();
    if (a1_.cols() != k || a2_.rows() != k || a2_.cols() != k || beta1_.cols() != k) {
        throw DimensionMismatch("DrPh: inconsistent dimensions");
    }
    if (tau_ < 0) {
        throw OutOfRange("DrPh: tau must be nonnegative");
    }
    check_unit_interval(a1_, "DrPh A1");
    check_unit_interval(a2_, "DrPh A2");
    check_sub_stochastic_ipv(beta1_);
    TransientSolver regime2_guard(a2_);
    (void)regime2_guard;
}

PolynomialPenalty::PolynomialPenalty(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw OutOfRange("PolynomialPenalty: need at least the constant coefficient");
    }
    if (coeffs_.size() > 9) {
        throw OutOfRange("PolynomialPenalty: degree cap is 8");
    }
}

double PolynomialPenalty::operator()(long t) const {
    double r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        r = r * static_cast<double>(t) + *it;
    }
    return r;
}

std::optional<std::string> PolynomialPenalty::nonnegativity_warning() const {
    if (coeffs_.back() < 0.0) {
        return "leading coefficient is negative; penalty is eventually negative";
    }
    for (long t = 1; t <= 1000; ++t) {
        if ((*this)(t) < 0.0) {
            return "penalty is negative at t = " + std::to_string(t);
        }
    }
    return std::nullopt;
}

RowVec regime2_ipv(const DrPh& d) {
    return d.beta1() * matrix_power(d.a1(), d.tau());
}

double drph_pmf(const DrPh& d, long t) {
    if (t < 1) {
        throw OutOfRange("drph_pmf: t must be >= 1");
    }
    const auto k = d.num_transient();
    const Vec ones = Vec::Ones(k);
    if (t <= d.tau()) {
        const Vec exit1 = ones - d.a1() * ones;
        return (d.beta1() * matrix_power(d.a1(), t - 1)).dot(exit1);
    }
    const Vec exit2 = ones - d.a2() * ones;
    return (regime2_ipv(d) * matrix_power(d.a2(), t - d.tau() - 1)).dot(exit2);
}

double drph_survival(const DrPh& d, long t) {
    if (t < 0) {
        throw OutOfRange("drph_survival: t must be >= 0");
    }
    const auto k = d.num_transient();
    const Vec ones = Vec::Ones(k);
    if (t <= d.tau()) {
        return (d.beta1() * matrix_power(d.a1(), t)).dot(ones);
    }
    return (regime2_ipv(d) * matrix_power(d.a2(), t - d.tau())).dot(ones);
}

std::uint64_t stirling2(int n, int m) {
    constexpr int kCap = 64;
    if (n < 1 || m < 1 || m > n || n > kCap) {
        throw OutOfRange("stirling2: need 1 <= m <= n <= 64");
    }
    struct Table {
        std::array<std::array<std::uint64_t, kCap + 1>, kCap + 1> value{};
        std::array<std::array<bool, kCap + 1>, kCap + 1> ok{};
        Table() {
            value[0][0] = 1;
            for (int nn = 0; nn <= kCap; ++nn) {
                ok[nn][0] = true; // S(n, 0) = 0 for n >= 1, S(0, 0) = 1
            }
            for (int nn = 1; nn <= kCap; ++nn) {
                for (int mm = 1; mm <= nn; ++mm) {
                    const bool prev_ok = ok[nn - 1][mm - 1] && (mm > nn - 1 || ok[nn - 1][mm]);
                    std::uint64_t scaled = 0;
                    bool fits = prev_ok;
                    if (fits && mm <= nn - 1) {
                        fits = !__builtin_mul_overflow(value[nn - 1][mm],
                                                       static_cast<std::uint64_t>(mm), &scaled);
                    }
                    std::uint64_t v = 0;
                    if (fits) {
                        fits = !__builtin_add_overflow(scaled, value[nn - 1][mm - 1], &v);
                    }
                    value[nn][mm] = v;
                    ok[nn][mm] = fits;
                }
            }
        }
    };
    static const Table table;
    if (!table.ok[n][m]) {
        throw OutOfRange("stirling2: exact value does not fit in 64 bits");
    }
    return table.value[n][m];
}

double ph_power_sum(const RowVec& beta, const Matrix& a, int k) {
    if (k < 0 || k > 20) {
        throw OutOfRange("ph_power_sum: exponent must be in 0..20");
    }
    if (k == 0) {
        return beta.sum();
    }
    TransientSolver solver(a);
    const auto n_phases = a.rows();
    Vec y = Vec::Ones(n_phases);   // becomes (I-a)^{-n} 1
    RowVec w = beta;               // becomes beta a^{n-1}
    double total = 0.0;
    double n_factorial = 1.0;
    for (int n = 1; n <= k; ++n) {
        n_factorial *= n;
        y = solver.solve(y);
        total += static_cast<double>(stirling2(k, n)) * n_factorial * w.dot(y);
        if (n < k) {
            w = w * a;
        }
    }
    return total;
}

double drph_moment(const DrPh& d, int m) {
    if (m < 1 || m > 8) {
        throw OutOfRange("drph_moment: order must be in 1..8");
    }
    const auto k = d.num_transient();
    const Vec ones = Vec::Ones(k);
    const Vec exit1 = ones - d.a1() * ones;
    double total = 0.0;
    RowVec w = d.beta1();
    for (long t = 1; t <= d.tau(); ++t) {
        total += std::pow(static_cast<double>(t), m) * w.dot(exit1);
        w = w * d.a1();
    }
    // w = beta2; tail sum_{s>=1} (s+tau)^m pmf2(s) by binomial expansion
    const double tau = static_cast<double>(d.tau());
    for (int r = 0; r <= m; ++r) {
        total += binomial(m, r) * std::pow(tau, m - r) * ph_power_sum(w, d.a2(), r);
    }
    return total;
}

double expected_penalty_sum(const DrPh& d, const PolynomialPenalty& f) {
    const auto k = d.num_transient();
    const Vec ones = Vec::Ones(k);
    const int deg = f.degree();
    double total = 0.0;
    RowVec w = d.beta1();
    for (long t = 1; t <= d.tau(); ++t) {
        total += f(t) * w.dot(ones); // P(T >= t) = beta1 A1^{t-1} 1 in regime 1
        w = w * d.a1();
    }
    // w = beta2. Regime-2 part: sum_{s>=1} f(s+tau) beta2 A2^{s-1} 1, with the
    // survival kernel folded into the pmf kernel via beta2 (I-A2)^{-1}.
    TransientSolver solver(d.a2());
    const RowVec w_surv = solver.solve_left(w);
    const double tau = static_cast<double>(d.tau());
    for (int m = 0; m <= deg; ++m) {
        double g = 0.0;
        for (int kk = m; kk <= deg; ++kk) {
            g += f.coeffs()[kk] * binomial(kk, m) * std::pow(tau, kk - m);
        }
        total += g * ph_power_sum(w_surv, d.a2(), m);
    }
    return total;
}

double expected_penalty_sum(const DrPh& d, const std::function<double(long)>& f, long horizon,
                            const Tolerances& tol) {
    return truncated_penalty_oracle(d, f, horizon, tol);
}

double expected_penalty_sum(const DrPh& d, const std::function<double(long)>& f) {
    (void)d;
    (void)f;
    throw TruncationHorizonRequired(
        "expected_penalty_sum: non-polynomial penalties need an explicit horizon");
}

double truncated_penalty_oracle(const DrPh& d, const std::function<double(long)>& f, long horizon,
                                const Tolerances& tol) {
    if (horizon < 1) {
        throw HorizonTooSmall("truncated_penalty_oracle: horizon must be >= 1");
    }
    if (drph_survival(d, horizon) >= tol.tail) {
        throw HorizonTooSmall("truncated_penalty_oracle: survival at horizon " +
                              std::to_string(horizon) + " is not below tail tolerance");
    }
    DrPhSeries series(d);
    double total = 0.0;
    double p_at_least = d.beta1().sum(); // P(T >= 1)
    for (long t = 1; t <= horizon; ++t) {
        total += f(t) * p_at_least;
        p_at_least = series.survival(); // P(T > t) = P(T >= t+1)
        series.advance();
        if (p_at_least <= 0.0) {
            break;
        }
    }
    return total;
}

DrPhSeries::DrPhSeries(const DrPh& d) : d_(d), t_(1), w_(d.beta1()) {
    const auto k = d_.num_transient();
    const Vec ones = Vec::Ones(k);
    if (t_ <= d_.tau()) {
        pmf_ = w_.dot(ones - d_.a1() * ones);
        survival_ = w_.dot(d_.a1() * ones);
    } else {
        pmf_ = w_.dot(ones - d_.a2() * ones);
        survival_ = w_.dot(d_.a2() * ones);
    }
}

void DrPhSeries::advance() {
    const auto k = d_.num_transient();
    const Vec ones = Vec::Ones(k);
    w_ = w_ * (t_ <= d_.tau() ? d_.a1() : d_.a2());
    ++t_;
    if (t_ <= d_.tau()) {
        pmf_ = w_.dot(ones - d_.a1() * ones);
        survival_ = w_.dot(d_.a1() * ones);
    } else {
        pmf_ = w_.dot(ones - d_.a2() * ones);
        survival_ = w_.dot(d_.a2() * ones);
    }
}

} // namespace aoii

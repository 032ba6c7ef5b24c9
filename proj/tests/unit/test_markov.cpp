#include "doctest.h"
#include "test_util.hpp"

#include <aoii/markov.hpp>
#include <aoii/presets.hpp>
#include <aoii/sim.hpp>
#include <aoii/smdp.hpp>

using namespace aoii;
using namespace aoii::testutil;

TEST_CASE("validate_dtmc accepts the 2-state example chain") {
    Matrix q(2, 2);
    q << 0.65, 0.35, 0.25, 0.75;
    const DtmcSource src = DtmcSource::validate(q);
    CHECK(src.size() == 2);
    CHECK(src.q(0, 1) == 0.35);
}

TEST_CASE("validate_dtmc rejects bad inputs") {
    Matrix id = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DtmcSource::validate(id), NotIrreducible);

    Matrix short_row(2, 2);
    short_row << 0.5, 0.4, 0.3, 0.7;
    CHECK_THROWS_AS(DtmcSource::validate(short_row), NotStochastic);

    Matrix negative(2, 2);
    negative << -0.2, 1.2, 0.5, 0.5;
    CHECK_THROWS_AS(DtmcSource::validate(negative), NegativeEntry);

    Matrix tiny(1, 1);
    tiny << 1.0;
    CHECK_THROWS_AS(DtmcSource::validate(tiny), DimensionMismatch);
}

TEST_CASE("ph_pmf scalar geometric") {
    Matrix a(1, 1);
    a << 0.3;
    RowVec beta(1);
    beta << 1.0;
    CHECK(ph_pmf(beta, a, 2) == doctest::Approx(0.3 * 0.7).epsilon(1e-15));
    CHECK(ph_pmf(beta, a, 1) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK_THROWS_AS(ph_pmf(beta, a, 0), OutOfRange);
}

TEST_CASE("ph_pmf sums to the initial transient mass") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 3);
        const Matrix a = make_random_tpts(rng, k);
        const RowVec beta = make_random_ipv(rng, k);
        // truncate where the remaining transient mass drops below 1e-12
        long horizon = 1;
        while ((beta * matrix_power(a, horizon)).sum() >= 1e-12) {
            ++horizon;
        }
        double total = 0.0;
        for (long t = 1; t <= horizon; ++t) {
            total += ph_pmf(beta, a, t);
        }
        CHECK(total == doctest::Approx(beta.sum()).epsilon(1e-10));
    }
}

TEST_CASE("ph_pmf of a cycle's regime-1 chain matches simulated natural resync times") {
    // cycle j=2 (1-based) of the 3-state preset with transmissions disabled:
    // out-of-sync durations follow PH(beta1 / (1-q_jj), A1)
    const Preset p = preset_source("q2");
    const int j = 1;
    const long no_tx = 1000;
    const CycleChain chain = CycleChain::build(p.source, 0.8, j, no_tx);
    const RowVec beta = chain.dr().beta1() / chain.leave_probability();
    const Matrix a = chain.dr().a1();

    const long cycles = 200000;
    const CycleCensus census = cycle_census(p.source, 0.8, j, no_tx, cycles, 777, p.penalties[j]);
    for (long t = 1; t <= 6; ++t) {
        const double expected = ph_pmf(beta, a, t);
        const double observed = t < static_cast<long>(census.t_pmf.size())
                                    ? census.t_pmf[static_cast<std::size_t>(t)]
                                    : 0.0;
        const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(cycles));
        CHECK(std::abs(observed - expected) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("fundamental_matrix basics") {
    CHECK(fundamental_matrix(Matrix::Zero(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-14));

    Matrix half(1, 1);
    half << 0.5;
    CHECK(fundamental_matrix(half)(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

    Matrix ones(1, 1);
    ones << 1.0;
    CHECK_THROWS_AS(fundamental_matrix(ones), SingularSystem);
}

TEST_CASE("fundamental_matrix equals the truncated Neumann series") {
    const Preset p = preset_source("q2");
    const CycleChain chain = CycleChain::build(p.source, 0.8, 1, 2);
    const Matrix a = chain.dr().a2();
    const Matrix f = fundamental_matrix(a);
    Matrix series = Matrix::Zero(a.rows(), a.cols());
    Matrix power = Matrix::Identity(a.rows(), a.cols());
    for (int t = 0; t < 400; ++t) {
        series += power;
        power = power * a;
    }
    CHECK((f - series).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(f.minCoeff() >= 0.0);
}

TEST_CASE("fundamental_matrix times (I - a) is the identity") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 3);
        const Matrix a = make_random_tpts(rng, k);
        const Matrix f = fundamental_matrix(a);
        const Matrix prod = f * (Matrix::Identity(k, k) - a);
        CHECK((prod - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("absorption_probabilities one-step and single-target cases") {
    Matrix a = Matrix::Zero(1, 1);
    Matrix b(1, 2);
    b << 0.4, 0.6;
    RowVec beta(1);
    beta << 1.0;
    const RowVec probs = absorption_probabilities(Amc(a, b, beta));
    CHECK(probs(0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(probs(1) == doctest::Approx(0.6).epsilon(1e-14));

    Matrix a2(2, 2);
    a2 << 0.3, 0.2, 0.1, 0.4;
    Matrix b2(2, 1);
    b2 << 0.5, 0.5;
    RowVec beta2(2);
    beta2 << 0.6, 0.3; // sub-stochastic IPV
    const RowVec single = absorption_probabilities(Amc(a2, b2, beta2));
    CHECK(single(0) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("absorption_probabilities match simulated cycle outcomes") {
    // cycle j=2 (1-based) of q2 with tau=0 is a single-regime absorbing chain
    const Preset p = preset_source("q2");
    const int j = 1;
    const CycleChain chain = CycleChain::build(p.source, 0.8, j, 0);
    const RowVec beta = chain.dr().beta1() / chain.leave_probability();
    const Amc amc(chain.dr().a2(), chain.dr().b2(), beta);
    const RowVec probs = absorption_probabilities(amc);
    CHECK(probs.sum() == doctest::Approx(beta.sum()).epsilon(1e-9));

    const long cycles = 200000;
    const CycleCensus census = cycle_census(p.source, 0.8, j, 0, cycles, 4242, p.penalties[j]);
    for (int i = 0; i < 3; ++i) {
        const double se =
            std::sqrt(probs(i) * (1.0 - probs(i)) / static_cast<double>(cycles));
        CHECK(std::abs(census.absorb_freq[static_cast<std::size_t>(i)] - probs(i)) <=
              3.0 * se + 1e-12);
    }
}

TEST_CASE("Amc construction validates its blocks") {
    Matrix a(1, 1);
    a << 0.3;
    Matrix b(1, 1);
    b << 0.6; // row of [A|B] sums to 0.9
    RowVec beta(1);
    beta << 1.0;
    CHECK_THROWS_AS(Amc(a, b, beta), NotStochastic);

    Matrix b_ok(1, 1);
    b_ok << 0.7;
    RowVec beta_heavy(1);
    beta_heavy << 1.5;
    CHECK_THROWS_AS(Amc(a, b_ok, beta_heavy), NotStochastic);

    Matrix b_wrong_rows(2, 1);
    b_wrong_rows << 0.7, 0.3;
    CHECK_THROWS_AS(Amc(a, b_wrong_rows, beta), DimensionMismatch);

    Matrix stay(1, 1);
    stay << 1.0;
    Matrix none(1, 1);
    none << 0.0;
    CHECK_THROWS_AS(Amc(stay, none, beta), SingularSystem);
}

TEST_CASE("stationary_distribution basics") {
    Matrix swap(2, 2);
    swap << 0.0, 1.0, 1.0, 0.0;
    const RowVec pi = stationary_distribution(swap);
    CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-14));

    Matrix blocked = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(stationary_distribution(blocked), NotIrreducible);

    Matrix rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(stationary_distribution(rect), DimensionMismatch);

    Matrix off(2, 2);
    off << 0.5, 0.4, 0.5, 0.5;
    CHECK_THROWS_AS(stationary_distribution(off), NotStochastic);
}

TEST_CASE("stationary_distribution is a power-iteration fixed point for the optimized chain") {
    const Preset p = preset_source("q1");
    SmdpModel model(p.source, 0.8, p.penalties);
    const auto outcome = policy_iteration(model, 70.0, 20);
    Matrix big_p(2, 2);
    for (int j = 0; j < 2; ++j) {
        big_p.row(j) = model.params(j, outcome.policy.taus[static_cast<std::size_t>(j)]).transition;
    }
    const RowVec pi = stationary_distribution(big_p);
    RowVec iter = RowVec::Constant(2, 0.5);
    for (int i = 0; i < 20000; ++i) {
        iter = iter * big_p;
    }
    CHECK((pi - iter).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((pi * big_p - pi).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stationary_distribution commutes with state relabeling") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const DtmcSource src = make_random_source(rng, 4);
        const RowVec pi = stationary_distribution(src.q());
        std::vector<int> perm{2, 0, 3, 1};
        Matrix shuffled(4, 4);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                shuffled(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) =
                    src.q(i, j);
            }
        }
        const RowVec pi2 = stationary_distribution(shuffled);
        for (int i = 0; i < 4; ++i) {
            CHECK(pi2(perm[static_cast<std::size_t>(i)]) ==
                  doctest::Approx(pi(i)).epsilon(1e-10));
        }
    }
}

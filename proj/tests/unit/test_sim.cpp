#include "doctest.h"
#include "test_util.hpp"

#include <aoii/presets.hpp>
#include <aoii/sim.hpp>
#include <aoii/smdp.hpp>

using namespace aoii;
using namespace aoii::testutil;

TEST_CASE("simulate is deterministic for a fixed seed") {
    const Preset p = preset_source("q2");
    SimConfig cfg;
    cfg.slots = 50000;
    cfg.replications = 6;
    cfg.warmup = 500;
    cfg.seed = 123456;
    cfg.policy = PolicySpec::multi({1, 2, 3});
    const SimStats a = simulate(p.source, 0.8, p.penalties, 5.0, cfg);
    const SimStats b = simulate(p.source, 0.8, p.penalties, 5.0, cfg);
    CHECK(a.mean_cost == b.mean_cost);
    CHECK(a.tx_rate == b.tx_rate);
    CHECK(a.ci95 == b.ci95);
    for (int j = 0; j < 3; ++j) {
        CHECK(a.cycle_census[static_cast<std::size_t>(j)].t_counts ==
              b.cycle_census[static_cast<std::size_t>(j)].t_counts);
    }
    cfg.seed = 654321;
    const SimStats c = simulate(p.source, 0.8, p.penalties, 5.0, cfg);
    CHECK(c.mean_cost != a.mean_cost);
}

TEST_CASE("cost accounting identity holds exactly") {
    const Preset p = preset_source("q2");
    SimConfig cfg;
    cfg.slots = 100000;
    cfg.replications = 3;
    cfg.warmup = 1000;
    cfg.seed = 77;
    cfg.policy = PolicySpec::multi({0, 1, 2});
    for (double lam : {0.0, 1.0, 12.5}) {
        const SimStats s = simulate(p.source, 0.8, p.penalties, lam, cfg);
        CHECK(std::abs(s.mean_cost - (s.mean_aoii_penalty + lam * s.tx_rate)) < 1e-12);
    }
}

TEST_CASE("perfect channel with zero thresholds caps the age at one") {
    // sigma = 1, tau = (0,0): every out-of-sync slot ends the cycle, either
    // naturally or by delivery, so T = 1 in every cycle
    const Preset p = preset_source("q1");
    SimConfig cfg;
    cfg.slots = 200000;
    cfg.replications = 2;
    cfg.warmup = 1000;
    cfg.seed = 99;
    cfg.policy = PolicySpec::multi({0, 0});
    const SimStats s = simulate(p.source, 1.0, p.penalties, 3.0, cfg);
    for (int j = 0; j < 2; ++j) {
        const CycleCensus& c = s.cycle_census[static_cast<std::size_t>(j)];
        REQUIRE(c.cycles > 0);
        CHECK(c.mean_t == doctest::Approx(1.0));
        CHECK(c.t_counts.size() == 2); // only T = 1 observed
    }
    SmdpModel model(p.source, 1.0, p.penalties);
    const double analytic = model.average_cost({0, 0}, 3.0);
    CHECK(std::abs(s.mean_cost - analytic) / analytic < 0.01);
}

TEST_CASE("no penalties and unreachable thresholds drive the cost to zero") {
    const Preset p = preset_source("q2");
    PenaltySet zero;
    for (int j = 0; j < 3; ++j) {
        zero.emplace_back(std::vector<double>{0.0});
    }
    SimConfig cfg;
    cfg.slots = 100000;
    cfg.replications = 2;
    cfg.warmup = 100;
    cfg.seed = 7;
    cfg.policy = PolicySpec::multi({300, 300, 300});
    const SimStats s = simulate(p.source, 0.8, zero, 1.0, cfg);
    CHECK(s.tx_rate < 1e-4);
    CHECK(s.mean_cost < 1e-4);
}

TEST_CASE("simulate validates its configuration") {
    const Preset p = preset_source("q1");
    SimConfig cfg;
    cfg.slots = 100;
    cfg.warmup = 100;
    cfg.policy = PolicySpec::multi({0, 0});
    CHECK_THROWS_AS(simulate(p.source, 0.8, p.penalties, 1.0, cfg), OutOfRange);
    cfg.warmup = 0;
    cfg.policy = PolicySpec::multi({0});
    CHECK_THROWS_AS(simulate(p.source, 0.8, p.penalties, 1.0, cfg), DimensionMismatch);
}

TEST_CASE("single-threshold and random-sampling policies run") {
    const Preset p = preset_source("q2");
    SimConfig cfg;
    cfg.slots = 50000;
    cfg.replications = 2;
    cfg.warmup = 500;
    cfg.seed = 31;
    cfg.policy = PolicySpec::single(2);
    const SimStats st = simulate(p.source, 0.8, p.penalties, 5.0, cfg);
    CHECK(st.mean_cost > 0.0);

    cfg.policy = PolicySpec::random(0.5);
    const SimStats rs = simulate(p.source, 0.8, p.penalties, 5.0, cfg);
    CHECK(rs.mean_cost > 0.0);
    CHECK(rs.tx_rate > 0.0);
}

TEST_CASE("cycle_census with an unreachable threshold always resyncs naturally") {
    const Preset p = preset_source("q2");
    const CycleCensus census = cycle_census(p.source, 0.8, 2, 4000, 20000, 11, p.penalties[2]);
    CHECK(census.absorb_freq[2] == doctest::Approx(1.0));
    CHECK(census.mean_c == 0.0);
}

TEST_CASE("cycle_census validates its inputs") {
    const Preset p = preset_source("q2");
    CHECK_THROWS_AS(cycle_census(p.source, 0.8, 5, 2, 100, 1, p.penalties[0]), InvalidState);
    CHECK_THROWS_AS(cycle_census(p.source, 0.8, 0, 2, 0, 1, p.penalties[0]), OutOfRange);
}

TEST_CASE("cycle_census in-sync duration matches the geometric mean") {
    const Preset p = preset_source("q2");
    for (int j = 0; j < 3; ++j) {
        const CycleCensus census = cycle_census(p.source, 0.8, j, 2, 200000,
                                                404 + static_cast<std::uint64_t>(j),
                                                p.penalties[static_cast<std::size_t>(j)]);
        const double expect = 1.0 / (1.0 - p.source.q(j, j));
        const double se = std::sqrt(census.var_h / static_cast<double>(census.cycles));
        CHECK(std::abs(census.mean_h - expect) <= 3.0 * se);
        // one-slot in-sync frequency is the exit probability
        const double exit_prob = 1.0 - p.source.q(j, j);
        const double freq = static_cast<double>(census.h_counts[1]) /
                            static_cast<double>(census.cycles);
        const double se1 =
            std::sqrt(exit_prob * (1.0 - exit_prob) / static_cast<double>(census.cycles));
        CHECK(std::abs(freq - exit_prob) <= 3.0 * se1);
        // attempts never exceed the out-of-sync duration
        CHECK(census.c_counts.size() <= census.t_counts.size());
    }
}

TEST_CASE("cycle duration pmf passes chi-square tests across states and thresholds") {
    const Preset p = preset_source("q2");
    std::uint64_t seed = 8080;
    for (int j = 0; j < 3; ++j) {
        for (long tau : {0L, 2L, 5L}) {
            const DrPh law = CycleChain::build(p.source, 0.8, j, tau).conditional_duration();
            const CycleCensus census =
                cycle_census(p.source, 0.8, j, tau, 100000, seed++,
                             p.penalties[static_cast<std::size_t>(j)]);
            const ChiSquareResult res = chi_square_vs_pmf(census.t_counts, census.cycles, law);
            INFO("j=", j, " tau=", tau, " stat=", res.statistic, " dof=", res.dof);
            CHECK(res.pass_at_1pct);
        }
    }
}

TEST_CASE("analytic cost matches simulation on a random source") {
    std::mt19937_64 rng(90091);
    const DtmcSource src = make_random_source(rng, 4);
    PenaltySet pens;
    for (int j = 0; j < 4; ++j) {
        pens.emplace_back(std::vector<double>{0.2, 0.5 / (1 + j), 0.3});
    }
    const std::vector<long> taus{0, 1, 3, 2};
    const double analytic = average_cost(src, 0.7, taus, pens, 6.0);
    SimConfig cfg;
    cfg.slots = 400000;
    cfg.replications = 4;
    cfg.warmup = 4000;
    cfg.seed = 5555;
    cfg.policy = PolicySpec::multi(taus);
    const SimStats stats = simulate(src, 0.7, pens, 6.0, cfg);
    CHECK(std::abs(stats.mean_cost - analytic) / analytic < 0.02);
}

TEST_CASE("trajectory census agrees with isolated cycle census") {
    const Preset p = preset_source("q2");
    SimConfig cfg;
    cfg.slots = 400000;
    cfg.replications = 2;
    cfg.warmup = 1000;
    cfg.seed = 2718;
    cfg.policy = PolicySpec::multi({2, 2, 2});
    const SimStats s = simulate(p.source, 0.8, p.penalties, 5.0, cfg);
    for (int j = 0; j < 3; ++j) {
        const CycleCensus& traj = s.cycle_census[static_cast<std::size_t>(j)];
        REQUIRE(traj.cycles > 1000);
        const SmdpStateParams params = eval_state(p.source, 0.8, j, 2,
                                                  p.penalties[static_cast<std::size_t>(j)]);
        const double n = static_cast<double>(traj.cycles);
        CHECK(std::abs(traj.mean_t + traj.mean_h - params.cycle_length) <=
              4.0 * std::sqrt((traj.var_t + traj.var_h) / n));
        CHECK(std::abs(traj.mean_c - params.tx_count) <= 4.0 * std::sqrt(traj.var_c / n));
    }
}

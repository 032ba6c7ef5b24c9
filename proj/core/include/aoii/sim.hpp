#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aoii/drph.hpp"
#include "aoii/markov.hpp"

namespace aoii {

/// Transmission policy evaluated each out-of-sync slot (AoII = k >= 1,
/// estimate j): multi-threshold transmits iff k > taus[j]; single-threshold
/// iff k > tau; random sampling with probability alpha.
struct PolicySpec {
    enum class Kind { MultiThreshold, SingleThreshold, RandomSampling };

    static PolicySpec multi(std::vector<long> taus);
    static PolicySpec single(long tau);
    static PolicySpec random(double alpha);

    Kind kind = Kind::MultiThreshold;
    std::vector<long> taus;
    long tau = 0;
    double alpha = 1.0;
};

struct SimConfig {
    long slots = 1'000'000;   // horizon per replication
    int replications = 1;
    long warmup = 0;          // slots discarded at the start of each replication
    std::uint64_t seed = 0;
    PolicySpec policy;
};

/// Empirical per-cycle records for one estimation state j.
struct CycleCensus {
    long cycles = 0;
    std::vector<double> t_pmf;        // empirical P(T = t), index t (0 unused)
    std::vector<long> t_counts;       // raw counts behind t_pmf
    std::vector<long> h_counts;       // in-sync duration histogram, index h
    std::vector<long> c_counts;       // attempt-count histogram, index c
    double mean_h = 0.0, var_h = 0.0; // in-sync duration
    double mean_t = 0.0, var_t = 0.0; // out-of-sync duration
    double mean_c = 0.0, var_c = 0.0; // transmission attempts
    double mean_penalty = 0.0, var_penalty = 0.0; // sum of f over the cycle
    std::vector<double> absorb_freq;  // next embedded value frequencies
};

struct SimStats {
    double mean_cost = 0.0;         // per slot
    double ci95 = 0.0;              // halfwidth across replications
    double mean_aoii_penalty = 0.0; // per slot
    double tx_rate = 0.0;           // attempts per slot
    long slots_counted = 0;
    int replications = 0;
    std::vector<CycleCensus> cycle_census; // per estimation state, along the trajectory
    std::string rng_identity;
};

/// Deterministic 64-bit stream: std::mt19937_64 seeded with
/// splitmix64(seed + stream); doubles take the top 53 bits.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return next_double() < p; }

    static constexpr const char* identity = "mt19937_64/splitmix64(seed+stream)";

private:
    std::mt19937_64 engine_;
};

/// Slot-accurate simulation of the remote-estimation loop. Per slot:
/// policy decision, source transition, preemption/delivery resolution,
/// metric update. A preempted transmission counts as one attempt. Penalties
/// accrue only at out-of-sync slots (AoII >= 1).
SimStats simulate(const DtmcSource& src, double sigma, const PenaltySet& penalties, double lambda,
                  const SimConfig& cfg);

/// Simulates isolated cycles of type j (start just synchronized at value j)
/// and records H, T, C, the penalty sum and the next embedded value.
CycleCensus cycle_census(const DtmcSource& src, double sigma, int j, long tau, long cycles,
                         std::uint64_t seed, const PolynomialPenalty& f);

} // namespace aoii

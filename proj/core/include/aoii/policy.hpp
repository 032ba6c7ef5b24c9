#pragma once

#include <span>
#include <utility>
#include <vector>

#include "aoii/sim.hpp"
#include "aoii/smdp.hpp"

namespace aoii {

/// Per-estimation-state thresholds, all in 0..tau_max.
struct ThresholdPolicy {
    ThresholdPolicy(std::vector<long> taus_in, long tau_max_in);

    std::vector<long> taus;
    long tau_max;

    bool operator==(const ThresholdPolicy& other) const { return taus == other.taus; }
};

struct ValueSolution {
    double eta = 0.0;           // long-run average cost per slot
    std::vector<double> values; // relative values, values[N-1] = 0
};

struct PolicyIterOutcome {
    ThresholdPolicy policy;
    double eta = 0.0;
    std::vector<double> values;
    int iterations = 0;
    bool converged = false;
    std::vector<double> eta_history; // eta after each value-determination step
};

/// Solves v_j = r_j - eta d_j + sum_i p_ji v_i with v_{N-1} = 0 for
/// (v_0..v_{N-2}, eta). Residual checked to 1e-9.
ValueSolution value_determination(const std::vector<SmdpStateParams>& params, double lambda);

/// Per-state argmin over tau in 0..tau_max of a + lambda c - eta d + p . v;
/// ties break toward the smallest tau.
ThresholdPolicy policy_improvement(const SmdpModel& model, double lambda, double eta,
                                   const std::vector<double>& values, long tau_max);

/// Average-cost policy iteration starting from the all-zero policy.
/// converged = false when max_iters is exhausted first.
PolicyIterOutcome policy_iteration(const SmdpModel& model, double lambda, long tau_max,
                                   double eps_eta = 1e-9, int max_iters = 100);

/// Global minimum of average_cost over the full (tau_max+1)^N grid.
/// Ties toward the lexicographically smallest policy.
/// Throws GridTooLarge above 1e7 grid points.
std::pair<ThresholdPolicy, double> exhaustive_search(const SmdpModel& model, double lambda,
                                                     long tau_max);

/// Best common threshold: scan of average_cost over the diagonal slice.
std::pair<long, double> optimize_single_threshold(const SmdpModel& model, double lambda,
                                                  long tau_max);

struct RsOutcome {
    double alpha = 1.0;
    double cost = 0.0; // simulated mean cost per slot
    double ci95 = 0.0;
};

/// Simulated grid search over transmission probabilities with common random
/// numbers (each alpha sees the same replication seeds). Among grid points
/// whose confidence interval overlaps the minimum, the largest alpha wins.
RsOutcome optimize_random_sampling(const SmdpModel& model, double lambda,
                                   std::span<const double> alpha_grid, const SimConfig& sim_cfg);

} // namespace aoii

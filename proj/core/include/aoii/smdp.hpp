#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "aoii/drph.hpp"
#include "aoii/markov.hpp"

namespace aoii {

/// Per-state, per-action SMDP parameters for cycle-j under threshold tau:
/// expected cumulative age penalty, expected transmission attempts, expected
/// cycle length (slots) and the embedded transition row.
struct SmdpStateParams {
    double age_cost = 0.0;     // a_j(tau)
    double tx_count = 0.0;     // c_j(tau)
    double cycle_length = 0.0; // d_j(tau) >= 2
    RowVec transition;         // p_j. , sums to 1
};

/// Dual-regime chain of the out-of-sync interval of cycle-j.
/// Transient states are the source states i != j (in increasing label order);
/// absorbing states are E_1..E_N in canonical column order. The stored IPV is
/// the raw beta1[i] = q_ji (sub-stochastic, deficit q_jj); conditional_duration()
/// rescales it by 1/(1 - q_jj) to the law of T_j given the cycle's sync break.
class CycleChain {
public:
    /// Regime 1 (out-of-sync slot k <= tau, no transmission): A1 = Q over
    /// states != j, B1 nonzero only in column E_j. Regime 2 (k > tau,
    /// transmit every slot): self-loop q_ii(1-sigma), success column
    /// B2[i][E_i] = q_ii * sigma.
    /// Throws InvalidState for a bad j, DegenerateSource when q_jj = 1.
    static CycleChain build(const DtmcSource& src, double sigma, int j, long tau);

    const DrAmc& dr() const { return dr_; }
    int state() const { return j_; }
    double sigma() const { return sigma_; }
    double leave_probability() const { return leave_prob_; } // 1 - q_jj

    /// DR-PH of T_j conditioned on the out-of-sync interval starting.
    DrPh conditional_duration() const;

    /// Transient row index of source state i (i != j).
    int transient_index(int i) const { return i < j_ ? i : i - 1; }

private:
    CycleChain(DrAmc dr, int j, double sigma, double leave_prob)
        : dr_(std::move(dr)), j_(j), sigma_(sigma), leave_prob_(leave_prob) {}

    DrAmc dr_;
    int j_;
    double sigma_;
    double leave_prob_;
};

/// a, c, d and the embedded transition row for cycle-j under threshold tau.
/// d = 1/(1 - q_jj) + E[T_j]; c = beta2 (I - A2)^{-1} 1;
/// p_i = beta2 (I - A2)^{-1} B2 e_i for i != j, p_j the complement.
SmdpStateParams eval_state(const DtmcSource& src, double sigma, int j, long tau,
                           const PolynomialPenalty& f);

/// Problem instance (source, sigma, penalties) with a thread-safe (j, tau)
/// parameter cache; entries are immutable once published.
class SmdpModel {
public:
    SmdpModel(DtmcSource src, double sigma, PenaltySet penalties);

    const DtmcSource& source() const { return src_; }
    double sigma() const { return sigma_; }
    const PenaltySet& penalties() const { return penalties_; }
    int num_states() const { return src_.size(); }

    const SmdpStateParams& params(int j, long tau) const;

    /// Long-run average of the per-slot cost under per-state thresholds:
    /// (sum_n pi_n r_n) / (sum_n pi_n d_n) with r_n = a_n + lambda c_n.
    double average_cost(const std::vector<long>& taus, double lambda) const;

private:
    DtmcSource src_;
    double sigma_;
    PenaltySet penalties_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, long>, std::unique_ptr<const SmdpStateParams>> cache_;
};

/// Uncached convenience form of SmdpModel::average_cost.
double average_cost(const DtmcSource& src, double sigma, const std::vector<long>& taus,
                    const PenaltySet& penalties, double lambda);

} // namespace aoii

#include "aoii/smdp.hpp"

#include <cmath>
#include <string>

namespace aoii {

CycleChain CycleChain::build(const DtmcSource& src, double sigma, int j, long tau) {
    const int n = src.size();
    if (j < 0 || j >= n) {
        throw InvalidState("build_cycle_chain: state index " + std::to_string(j) +
                           " outside 0.." + std::to_string(n - 1));
    }
    if (!(sigma > 0.0) || sigma > 1.0) {
        throw OutOfRange("build_cycle_chain: sigma must be in (0, 1]");
    }
    const double q_jj = src.q(j, j);
    if (q_jj >= 1.0 - 1e-15) {
        throw DegenerateSource("build_cycle_chain: q_jj = 1, cycle never leaves sync");
    }
    const int k = n - 1;
    Matrix a1(k, k), a2(k, k);
    Matrix b1 = Matrix::Zero(k, n);
    Matrix b2 = Matrix::Zero(k, n);
    RowVec beta1(k);
    std::vector<int> idx;
    idx.reserve(k);
    for (int i = 0; i < n; ++i) {
        if (i != j) {
            idx.push_back(i);
        }
    }
    for (int r = 0; r < k; ++r) {
        const int i = idx[r];
        beta1(r) = src.q(j, i);
        for (int c = 0; c < k; ++c) {
            const int ip = idx[c];
            a1(r, c) = src.q(i, ip);
            a2(r, c) = (r == c) ? src.q(i, i) * (1.0 - sigma) : src.q(i, ip);
        }
        b1(r, j) = src.q(i, j);
        b2(r, j) = src.q(i, j);
        b2(r, i) = src.q(i, i) * sigma; // stay and deliver
    }
    DrAmc dr(std::move(beta1), std::move(a1), std::move(a2), std::move(b1), std::move(b2), tau);
    return CycleChain(std::move(dr), j, sigma, 1.0 - q_jj);
}

DrPh CycleChain::conditional_duration() const {
    RowVec beta = dr_.beta1() / leave_prob_;
    return DrPh(std::move(beta), dr_.a1(), dr_.a2(), dr_.tau());
}

SmdpStateParams eval_state(const DtmcSource& src, double sigma, int j, long tau,
                           const PolynomialPenalty& f) {
    const CycleChain chain = CycleChain::build(src, sigma, j, tau);
    const DrPh duration = chain.conditional_duration();
    const int n = src.size();

    SmdpStateParams out;
    out.age_cost = expected_penalty_sum(duration, f);
    out.cycle_length = 1.0 / chain.leave_probability() + drph_moment(duration, 1);

    const RowVec beta2 = regime2_ipv(duration);
    TransientSolver solver(duration.a2());
    const RowVec occupancy = solver.solve_left(beta2); // beta2 (I - A2)^{-1}
    out.tx_count = occupancy.sum();

    const RowVec absorb = occupancy * chain.dr().b2();
    out.transition = RowVec::Zero(n);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == j) {
            continue;
        }
        out.transition(i) = absorb(i);
        mass += absorb(i);
    }
    out.transition(j) = 1.0 - mass;
    if (out.transition(j) < -1e-9) {
        throw SingularSystem("eval_state: complement transition probability is negative");
    }
    out.transition(j) = std::max(out.transition(j), 0.0);
    return out;
}

SmdpModel::SmdpModel(DtmcSource src, double sigma, PenaltySet penalties)
    : src_(std::move(src)), sigma_(sigma), penalties_(std::move(penalties)) {
    if (static_cast<int>(penalties_.size()) != src_.size()) {
        throw DimensionMismatch("SmdpModel: need one penalty per source state");
    }
}

const SmdpStateParams& SmdpModel::params(int j, long tau) const {
    const auto key = std::make_pair(j, tau);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return *it->second;
        }
    }
    // compute outside the lock; first writer wins
    auto fresh = std::make_unique<const SmdpStateParams>(
        eval_state(src_, sigma_, j, tau, penalties_.at(j)));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(key, std::move(fresh));
    return *it->second;
}

double SmdpModel::average_cost(const std::vector<long>& taus, double lambda) const {
    const int n = num_states();
    if (static_cast<int>(taus.size()) != n) {
        throw DimensionMismatch("average_cost: need one threshold per state");
    }
    Matrix p(n, n);
    Vec reward(n), length(n);
    for (int j = 0; j < n; ++j) {
        const SmdpStateParams& s = params(j, taus[j]);
        p.row(j) = s.transition;
        reward(j) = s.age_cost + lambda * s.tx_count;
        length(j) = s.cycle_length;
    }
    const RowVec pi = stationary_distribution(p);
    return pi.dot(reward) / pi.dot(length);
}

double average_cost(const DtmcSource& src, double sigma, const std::vector<long>& taus,
                    const PenaltySet& penalties, double lambda) {
    SmdpModel model(src, sigma, penalties);
    return model.average_cost(taus, lambda);
}

} // namespace aoii

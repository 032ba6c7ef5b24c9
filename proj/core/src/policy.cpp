#include "aoii/policy.hpp"

#include <cmath>
#include <string>

namespace aoii {

ThresholdPolicy::ThresholdPolicy(std::vector<long> taus_in, long tau_max_in)
    : taus(std::move(taus_in)), tau_max(tau_max_in) {
    if (tau_max < 0) {
        throw OutOfRange("ThresholdPolicy: tau_max must be nonnegative");
    }
    for (long t : taus) {
        if (t < 0 || t > tau_max) {
            throw OutOfRange("ThresholdPolicy: threshold " + std::to_string(t) +
                             " outside 0.." + std::to_string(tau_max));
        }
    }
}

ValueSolution value_determination(const std::vector<SmdpStateParams>& params, double lambda) {
    const int n = static_cast<int>(params.size());
    if (n < 1) {
        throw DimensionMismatch("value_determination: empty parameter set");
    }
    // unknowns: v_0..v_{n-2}, eta
    Matrix m = Matrix::Zero(n, n);
    Vec rhs(n);
    for (int j = 0; j < n; ++j) {
        rhs(j) = params[j].age_cost + lambda * params[j].tx_count;
        for (int i = 0; i + 1 < n; ++i) {
            m(j, i) = (i == j ? 1.0 : 0.0) - params[j].transition(i);
        }
        m(j, n - 1) = params[j].cycle_length;
    }
    Eigen::PartialPivLU<Matrix> lu(m);
    if (lu.rcond() < 1e-13) {
        throw SingularSystem("value_determination: degenerate embedded chain");
    }
    const Vec sol = lu.solve(rhs);
    const double residual = (m * sol - rhs).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
        throw SingularSystem("value_determination: residual exceeds tolerance");
    }
    ValueSolution out;
    out.values.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        out.values[static_cast<std::size_t>(i)] = sol(i);
    }
    out.eta = sol(n - 1);
    return out;
}

ThresholdPolicy policy_improvement(const SmdpModel& model, double lambda, double eta,
                                   const std::vector<double>& values, long tau_max) {
    const int n = model.num_states();
    if (static_cast<int>(values.size()) != n) {
        throw DimensionMismatch("policy_improvement: need one relative value per state");
    }
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = values[static_cast<std::size_t>(i)];
    }
    std::vector<long> best(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        double best_val = 0.0;
        bool have = false;
        for (long tau = 0; tau <= tau_max; ++tau) {
            const SmdpStateParams& s = model.params(j, tau);
            const double val = s.age_cost + lambda * s.tx_count - eta * s.cycle_length +
                               s.transition.dot(v);
            if (!have || val < best_val) {
                best_val = val;
                best[static_cast<std::size_t>(j)] = tau;
                have = true;
            }
        }
    }
    return ThresholdPolicy(std::move(best), tau_max);
}

PolicyIterOutcome policy_iteration(const SmdpModel& model, double lambda, long tau_max,
                                   double eps_eta, int max_iters) {
    if (eps_eta <= 0.0 || max_iters < 1) {
        throw OutOfRange("policy_iteration: need eps_eta > 0 and max_iters >= 1");
    }
    const int n = model.num_states();
    ThresholdPolicy current(std::vector<long>(static_cast<std::size_t>(n), 0), tau_max);
    PolicyIterOutcome out{current, 0.0, {}, 0, false, {}};

    double eta_prev = 0.0;
    bool have_prev = false;
    for (int iter = 1; iter <= max_iters; ++iter) {
        std::vector<SmdpStateParams> params;
        params.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            params.push_back(model.params(j, current.taus[static_cast<std::size_t>(j)]));
        }
        const ValueSolution vs = value_determination(params, lambda);
        out.eta_history.push_back(vs.eta);
        out.iterations = iter;
        out.eta = vs.eta;
        out.values = vs.values;
        out.policy = current;

        ThresholdPolicy improved = policy_improvement(model, lambda, vs.eta, vs.values, tau_max);
        if (improved == current) {
            out.converged = true;
            break;
        }
        if (have_prev && std::abs(vs.eta - eta_prev) <= eps_eta) {
            out.converged = true;
            break;
        }
        eta_prev = vs.eta;
        have_prev = true;
        current = improved;
    }
    return out;
}

std::pair<ThresholdPolicy, double> exhaustive_search(const SmdpModel& model, double lambda,
                                                     long tau_max) {
    const int n = model.num_states();
    const double grid_points = std::pow(static_cast<double>(tau_max) + 1.0, n);
    if (grid_points > 1e7) {
        throw GridTooLarge("exhaustive_search: grid of " + std::to_string(grid_points) +
                           " points exceeds the 1e7 guard");
    }
    std::vector<long> taus(static_cast<std::size_t>(n), 0);
    std::vector<long> best_taus = taus;
    double best_cost = model.average_cost(taus, lambda);
    for (;;) {
        // lexicographic increment; first visit wins ties
        int pos = n - 1;
        while (pos >= 0 && taus[static_cast<std::size_t>(pos)] == tau_max) {
            taus[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++taus[static_cast<std::size_t>(pos)];
        const double cost = model.average_cost(taus, lambda);
        if (cost < best_cost) {
            best_cost = cost;
            best_taus = taus;
        }
    }
    return {ThresholdPolicy(std::move(best_taus), tau_max), best_cost};
}

std::pair<long, double> optimize_single_threshold(const SmdpModel& model, double lambda,
                                                  long tau_max) {
    const int n = model.num_states();
    long best_tau = 0;
    double best_cost =
        model.average_cost(std::vector<long>(static_cast<std::size_t>(n), 0), lambda);
    for (long tau = 1; tau <= tau_max; ++tau) {
        const double cost =
            model.average_cost(std::vector<long>(static_cast<std::size_t>(n), tau), lambda);
        if (cost < best_cost) {
            best_cost = cost;
            best_tau = tau;
        }
    }
    return {best_tau, best_cost};
}

RsOutcome optimize_random_sampling(const SmdpModel& model, double lambda,
                                   std::span<const double> alpha_grid, const SimConfig& sim_cfg) {
    if (alpha_grid.empty()) {
        throw OutOfRange("optimize_random_sampling: empty alpha grid");
    }
    struct Point {
        double alpha, cost, ci;
    };
    std::vector<Point> points;
    points.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        if (!(alpha > 0.0) || alpha > 1.0) {
            throw OutOfRange("optimize_random_sampling: alpha must be in (0, 1]");
        }
        SimConfig cfg = sim_cfg; // same seed for every grid point: common random numbers
        cfg.policy = PolicySpec::random(alpha);
        const SimStats stats = simulate(model.source(), model.sigma(), model.penalties(), lambda,
                                        cfg);
        points.push_back({alpha, stats.mean_cost, stats.ci95});
    }
    const Point* best = &points.front();
    for (const Point& p : points) {
        if (p.cost < best->cost) {
            best = &p;
        }
    }
    // CI-overlap tie break toward the largest alpha
    const Point* winner = best;
    for (const Point& p : points) {
        if (p.cost <= best->cost + p.ci + best->ci && p.alpha > winner->alpha) {
            winner = &p;
        }
    }
    return {winner->alpha, winner->cost, winner->ci};
}

} // namespace aoii

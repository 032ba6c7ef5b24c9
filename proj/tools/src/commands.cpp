#include "commands.hpp"

#include <ostream>

#include <fmt/format.h>

#include "csv.hpp"

namespace aoii::cli {

namespace {

SimConfig sim_config_from(const ResolvedExperiment& exp) {
    SimConfig cfg;
    cfg.slots = exp.cfg.sim_slots;
    cfg.replications = exp.cfg.sim_replications;
    cfg.warmup = exp.cfg.warmup();
    cfg.seed = exp.cfg.sim_seed;
    return cfg;
}

PolicySpec policy_from_config(const ResolvedExperiment& exp, const SmdpModel& model,
                              double lambda, std::vector<long>* taus_out) {
    const auto& cfg = exp.cfg;
    const int given = (cfg.policy_taus ? 1 : 0) + (cfg.policy_tau ? 1 : 0) +
                      (cfg.policy_alpha ? 1 : 0);
    if (given > 1) {
        throw ConfigError("config: give at most one of policy.taus, policy.tau, policy.alpha");
    }
    if (cfg.policy_taus) {
        if (static_cast<int>(cfg.policy_taus->size()) != exp.source.size()) {
            throw ConfigError("config: policy.taus needs one threshold per state");
        }
        if (taus_out) {
            *taus_out = *cfg.policy_taus;
        }
        return PolicySpec::multi(*cfg.policy_taus);
    }
    if (cfg.policy_tau) {
        if (taus_out) {
            taus_out->assign(static_cast<std::size_t>(exp.source.size()), *cfg.policy_tau);
        }
        return PolicySpec::single(*cfg.policy_tau);
    }
    if (cfg.policy_alpha) {
        return PolicySpec::random(*cfg.policy_alpha);
    }
    // default: simulate the SMDP-optimal policy for this lambda
    const PolicyIterOutcome out =
        policy_iteration(model, lambda, cfg.tau_max, cfg.eps_eta);
    if (!out.converged) {
        throw NonConvergence("policy iteration did not converge");
    }
    if (taus_out) {
        *taus_out = out.policy.taus;
    }
    return PolicySpec::multi(out.policy.taus);
}

} // namespace

int run_optimize(const ResolvedExperiment& exp, std::ostream& out) {
    SmdpModel model(exp.source, exp.cfg.sigma, exp.penalties);
    CsvWriter csv(exp.cfg.output_prefix + "_optimize.csv", config_header_lines(exp),
                  {"lambda", "eta", "iterations", "converged", "taus"});
    for (double lambda : exp.lambdas()) {
        const PolicyIterOutcome res =
            policy_iteration(model, lambda, exp.cfg.tau_max, exp.cfg.eps_eta);
        csv.row(lambda, res.eta, res.iterations, res.converged ? 1 : 0,
                format_taus(res.policy.taus));
        out << fmt::format("optimize: lambda={} taus=[{}] eta={} iterations={} converged={}\n",
                           lambda, format_taus(res.policy.taus), res.eta, res.iterations,
                           res.converged);
        if (!res.converged) {
            out << "optimize: policy iteration did not converge\n";
            return kExitNumerical;
        }
    }
    out << "wrote " << csv.path() << "\n";
    return kExitOk;
}

int run_exhaustive(const ResolvedExperiment& exp, std::ostream& out) {
    SmdpModel model(exp.source, exp.cfg.sigma, exp.penalties);
    CsvWriter csv(exp.cfg.output_prefix + "_exhaustive.csv", config_header_lines(exp),
                  {"lambda", "cost", "taus"});
    for (double lambda : exp.lambdas()) {
        const auto [policy, cost] = exhaustive_search(model, lambda, exp.cfg.tau_max);
        csv.row(lambda, cost, format_taus(policy.taus));
        out << fmt::format("exhaustive: lambda={} taus=[{}] cost={}\n", lambda,
                           format_taus(policy.taus), cost);
    }
    out << "wrote " << csv.path() << "\n";
    return kExitOk;
}

int run_benchmark(const ResolvedExperiment& exp, std::ostream& out) {
    SmdpModel model(exp.source, exp.cfg.sigma, exp.penalties);
    CsvWriter csv(exp.cfg.output_prefix + "_benchmark.csv", config_header_lines(exp),
                  {"lambda", "smdp_cost", "st_cost", "rs_cost", "rs_ci", "smdp_taus", "st_tau",
                   "rs_alpha"});
    const SimConfig sim_cfg = sim_config_from(exp);
    for (double lambda : exp.lambdas()) {
        const PolicyIterOutcome smdp =
            policy_iteration(model, lambda, exp.cfg.tau_max, exp.cfg.eps_eta);
        if (!smdp.converged) {
            out << "benchmark: policy iteration did not converge\n";
            return kExitNumerical;
        }
        const auto [st_tau, st_cost] = optimize_single_threshold(model, lambda, exp.cfg.tau_max);
        const RsOutcome rs =
            optimize_random_sampling(model, lambda, exp.cfg.rs_alphas, sim_cfg);
        csv.row(lambda, smdp.eta, st_cost, rs.cost, rs.ci95, format_taus(smdp.policy.taus),
                st_tau, rs.alpha);
        out << fmt::format(
            "benchmark: lambda={} smdp={} (taus=[{}]) st={} (tau={}) rs={}±{} (alpha={})\n",
            lambda, smdp.eta, format_taus(smdp.policy.taus), st_cost, st_tau, rs.cost, rs.ci95,
            rs.alpha);
    }
    out << "wrote " << csv.path() << "\n";
    return kExitOk;
}

int run_simulate(const ResolvedExperiment& exp, std::ostream& out) {
    SmdpModel model(exp.source, exp.cfg.sigma, exp.penalties);
    const auto lambdas = exp.lambdas();
    if (lambdas.size() != 1) {
        throw ConfigError("simulate: needs a single lambda");
    }
    const double lambda = lambdas.front();
    SimConfig cfg = sim_config_from(exp);
    std::vector<long> taus;
    cfg.policy = policy_from_config(exp, model, lambda, &taus);
    const SimStats stats = simulate(exp.source, exp.cfg.sigma, exp.penalties, lambda, cfg);

    CsvWriter csv(exp.cfg.output_prefix + "_simulate.csv", config_header_lines(exp),
                  {"lambda", "mean_cost", "ci95", "mean_aoii_penalty", "tx_rate",
                   "slots_counted", "replications", "policy"});
    std::string policy_text;
    switch (cfg.policy.kind) {
    case PolicySpec::Kind::MultiThreshold:
        policy_text = "taus=" + format_taus(cfg.policy.taus);
        break;
    case PolicySpec::Kind::SingleThreshold:
        policy_text = fmt::format("tau={}", cfg.policy.tau);
        break;
    case PolicySpec::Kind::RandomSampling:
        policy_text = fmt::format("alpha={}", cfg.policy.alpha);
        break;
    }
    csv.row(lambda, stats.mean_cost, stats.ci95, stats.mean_aoii_penalty, stats.tx_rate,
            stats.slots_counted, stats.replications, policy_text);
    out << fmt::format("simulate: lambda={} policy({}) mean_cost={} ci95={} penalty={} tx={}\n",
                       lambda, policy_text, stats.mean_cost, stats.ci95,
                       stats.mean_aoii_penalty, stats.tx_rate);
    out << "wrote " << csv.path() << "\n";
    return kExitOk;
}

int run_distribution(const ResolvedExperiment& exp, int state_1based, long tau,
                     std::ostream& out) {
    if (state_1based < 1 || state_1based > exp.source.size()) {
        throw ConfigError(fmt::format("distribution: state must be 1..{}", exp.source.size()));
    }
    if (tau < 0) {
        throw ConfigError("distribution: tau must be nonnegative");
    }
    const int j = state_1based - 1;
    const DrPh law =
        CycleChain::build(exp.source, exp.cfg.sigma, j, tau).conditional_duration();
    auto header = config_header_lines(exp);
    header.push_back(fmt::format("# distribution.state = {}", state_1based));
    header.push_back(fmt::format("# distribution.tau = {}", tau));
    CsvWriter csv(exp.cfg.output_prefix + "_distribution.csv", header,
                  {"t", "pmf", "survival"});
    DrPhSeries series(law);
    long rows = 0;
    for (;;) {
        csv.row(series.t(), series.pmf(), series.survival());
        ++rows;
        if (series.survival() < 1e-9) {
            break;
        }
        series.advance();
    }
    out << fmt::format("distribution: state={} tau={} rows={}\n", state_1based, tau, rows);
    out << "wrote " << csv.path() << "\n";
    return kExitOk;
}

int run_heatmap(const ResolvedExperiment& exp, std::ostream& out) {
    if (exp.source.size() != 2) {
        throw DimensionMismatch("heatmap: needs a 2-state source");
    }
    const auto lambdas = exp.lambdas();
    if (lambdas.size() != 1) {
        throw ConfigError("heatmap: needs a single lambda");
    }
    const double lambda = lambdas.front();
    SmdpModel model(exp.source, exp.cfg.sigma, exp.penalties);
    CsvWriter csv(exp.cfg.output_prefix + "_heatmap.csv", config_header_lines(exp),
                  {"tau1", "tau2", "cost"});
    long best_t1 = 0, best_t2 = 0;
    double best = 0.0;
    bool have = false;
    for (long t1 = 0; t1 <= exp.cfg.tau_max; ++t1) {
        for (long t2 = 0; t2 <= exp.cfg.tau_max; ++t2) {
            const double cost = model.average_cost({t1, t2}, lambda);
            csv.row(t1, t2, cost);
            if (!have || cost < best) {
                best = cost;
                best_t1 = t1;
                best_t2 = t2;
                have = true;
            }
        }
    }
    out << fmt::format("heatmap: lambda={} minimum at ({},{}) cost={}\n", lambda, best_t1,
                       best_t2, best);
    out << "wrote " << csv.path() << "\n";
    return kExitOk;
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const GridTooLarge&) {
        return kExitGuard;
    } catch (const ConfigError&) {
        return kExitConfig;
    } catch (const UnknownPreset&) {
        return kExitConfig;
    } catch (const DimensionMismatch&) {
        return kExitConfig;
    } catch (const OutOfRange&) {
        return kExitConfig;
    } catch (const NotStochastic&) {
        return kExitConfig;
    } catch (const NegativeEntry&) {
        return kExitConfig;
    } catch (const Error&) {
        return kExitNumerical; // singular systems, non-convergence, irreducibility
    } catch (...) {
        return kExitNumerical;
    }
}

} // namespace aoii::cli

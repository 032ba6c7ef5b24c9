#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

struct CommonFlags {
    std::optional<std::string> config_path;
    std::optional<std::string> preset;
    std::optional<double> lambda;
    std::optional<double> sigma;
    std::optional<long> tau_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_prefix;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config file");
    cmd->add_option("--preset", flags.preset, "built-in source: q1, q2 or q3");
    cmd->add_option("--lambda", flags.lambda, "transmission cost weight");
    cmd->add_option("--sigma", flags.sigma, "per-slot delivery success probability");
    cmd->add_option("--tau-max", flags.tau_max, "threshold cap");
    cmd->add_option("--seed", flags.seed, "simulation seed");
    cmd->add_option("--out", flags.out_prefix, "output path prefix");
}

aoii::cli::ResolvedExperiment build_experiment(const CommonFlags& flags) {
    aoii::cli::ExperimentConfig cfg;
    if (flags.config_path) {
        cfg = aoii::cli::load_config_file(*flags.config_path);
    }
    if (flags.preset) {
        cfg.preset = flags.preset;
        cfg.matrix.reset();
    }
    if (flags.lambda) {
        cfg.lambda = flags.lambda;
        cfg.sweep.reset();
    }
    if (flags.sigma) {
        cfg.sigma = *flags.sigma;
    }
    if (flags.tau_max) {
        cfg.tau_max = *flags.tau_max;
    }
    if (flags.seed) {
        cfg.sim_seed = *flags.seed;
    }
    if (flags.out_prefix) {
        cfg.output_prefix = *flags.out_prefix;
    }
    auto exp = aoii::cli::resolve(std::move(cfg));
    for (std::size_t j = 0; j < exp.penalties.size(); ++j) {
        if (auto warning = exp.penalties[j].nonnegativity_warning()) {
            std::cerr << "warning: penalty." << (j + 1) << ": " << *warning << "\n";
        }
    }
    return exp;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold status-update policies for remote estimation of Markov sources"};
    app.require_subcommand(1);

    CommonFlags optimize_flags, exhaustive_flags, benchmark_flags, simulate_flags,
        distribution_flags, heatmap_flags;
    int dist_state = 1;
    long dist_tau = 0;

    CLI::App* optimize = app.add_subcommand("optimize", "policy iteration over the λ set");
    add_common_flags(optimize, optimize_flags);
    CLI::App* exhaustive = app.add_subcommand("exhaustive", "full-grid threshold search");
    add_common_flags(exhaustive, exhaustive_flags);
    CLI::App* benchmark =
        app.add_subcommand("benchmark", "SMDP vs single-threshold vs random-sampling sweep");
    add_common_flags(benchmark, benchmark_flags);
    CLI::App* simulate = app.add_subcommand("simulate", "slot-level Monte Carlo run");
    add_common_flags(simulate, simulate_flags);
    CLI::App* distribution =
        app.add_subcommand("distribution", "cycle duration pmf and survival table");
    add_common_flags(distribution, distribution_flags);
    distribution->add_option("--state", dist_state, "estimation state (1-based)");
    distribution->add_option("--tau", dist_tau, "threshold for the cycle");
    CLI::App* heatmap = app.add_subcommand("heatmap", "(tau1, tau2) cost grid for 2-state sources");
    add_common_flags(heatmap, heatmap_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : aoii::cli::kExitConfig;
    }

    try {
        if (optimize->parsed()) {
            return aoii::cli::run_optimize(build_experiment(optimize_flags), std::cout);
        }
        if (exhaustive->parsed()) {
            return aoii::cli::run_exhaustive(build_experiment(exhaustive_flags), std::cout);
        }
        if (benchmark->parsed()) {
            return aoii::cli::run_benchmark(build_experiment(benchmark_flags), std::cout);
        }
        if (simulate->parsed()) {
            return aoii::cli::run_simulate(build_experiment(simulate_flags), std::cout);
        }
        if (distribution->parsed()) {
            return aoii::cli::run_distribution(build_experiment(distribution_flags), dist_state,
                                               dist_tau, std::cout);
        }
        if (heatmap->parsed()) {
            return aoii::cli::run_heatmap(build_experiment(heatmap_flags), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return aoii::cli::exit_code_for_current_exception();
    }
    return aoii::cli::kExitConfig;
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <aoii/aoii.hpp>

namespace aoii::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

/// Line-oriented experiment description: `key = value`, '#' comments.
/// Keys: source.preset, source.matrix (rows separated by ';'), sigma,
/// lambda, lambda.sweep ("start stop step"), penalty.J ("w0 w1 ..."),
/// tau_max, eps_eta, sim.slots, sim.replications, sim.warmup, sim.seed,
/// policy.taus, policy.tau, policy.alpha, rs.alphas, output.prefix.
struct ExperimentConfig {
    std::optional<std::string> preset;
    std::optional<Matrix> matrix;
    std::map<int, std::vector<double>> penalty_coeffs; // 1-based state keys
    double sigma = 0.8;
    std::optional<double> lambda;
    std::optional<SweepSpec> sweep;
    long tau_max = 50;
    double eps_eta = 1e-9;
    long sim_slots = 1'000'000;
    int sim_replications = 20;
    std::optional<long> sim_warmup; // default: slots / 100
    std::uint64_t sim_seed = 1;
    std::optional<std::vector<long>> policy_taus;
    std::optional<long> policy_tau;
    std::optional<double> policy_alpha;
    std::vector<double> rs_alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::string output_prefix = "aoii_out";

    long warmup() const { return sim_warmup.value_or(sim_slots / 100); }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Source and penalties after preset resolution; explicit penalty.J keys
/// override preset penalties state by state.
struct ResolvedExperiment {
    DtmcSource source;
    PenaltySet penalties;
    ExperimentConfig cfg;

    std::vector<double> lambdas() const; // sweep, or the single value
};

ResolvedExperiment resolve(ExperimentConfig cfg);

/// `# key = value` comment lines describing the fully resolved setup.
std::vector<std::string> config_header_lines(const ResolvedExperiment& exp);

} // namespace aoii::cli

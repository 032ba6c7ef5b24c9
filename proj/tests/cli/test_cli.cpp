#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"

using namespace aoii;
using namespace aoii::cli;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CsvFile {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

CsvFile parse_csv(const std::string& path) {
    CsvFile file;
    std::istringstream in(slurp(path));
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            file.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!header_seen) {
            file.columns = cells;
            header_seen = true;
        } else {
            file.rows.push_back(cells);
        }
    }
    return file;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(AOII_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/aoii_cli_test_") + name;
}

} // namespace

TEST_CASE("config parser round-trips the documented keys") {
    const std::string text = R"(
# experiment
source.matrix = 0.65 0.35; 0.25 0.75
sigma = 0.9
lambda.sweep = 0 10 5
penalty.1 = 0.5 1
penalty.2 = 0.25 0 2
tau_max = 12
eps_eta = 1e-8
sim.slots = 5000
sim.replications = 3
sim.warmup = 50
sim.seed = 99
rs.alphas = 0.5 1.0
output.prefix = /tmp/aoii_cfg_test
)";
    const ExperimentConfig cfg = parse_config_text(text);
    CHECK(cfg.matrix.has_value());
    CHECK(cfg.sigma == 0.9);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->stop == 10.0);
    CHECK(cfg.penalty_coeffs.at(2) == std::vector<double>{0.25, 0.0, 2.0});
    CHECK(cfg.tau_max == 12);
    CHECK(cfg.sim_seed == 99);
    CHECK(cfg.rs_alphas == std::vector<double>{0.5, 1.0});

    const ResolvedExperiment exp = resolve(cfg);
    CHECK(exp.source.size() == 2);
    CHECK(exp.penalties[1](1) == doctest::Approx(2.25));
    CHECK(exp.lambdas() == std::vector<double>{0.0, 5.0, 10.0});
}

TEST_CASE("config parser rejects malformed input") {
    CHECK_THROWS_AS(parse_config_text("nonsense line"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("unknown.key = 5"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("lambda.sweep = 1 2"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("penalty.0 = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("source.matrix = 0.5 0.5; 0.5"), ConfigError);
    // inline sources need explicit penalties
    CHECK_THROWS_AS(resolve(parse_config_text("source.matrix = 0.5 0.5; 0.5 0.5\nlambda = 1")),
                    ConfigError);
    // presets and matrices are mutually exclusive
    CHECK_THROWS_AS(
        resolve(parse_config_text("source.preset = q1\nsource.matrix = 0.5 0.5; 0.5 0.5")),
        ConfigError);
    CHECK_THROWS_AS(resolve(parse_config_text("source.preset = q1\nsigma = 0")), ConfigError);
}

TEST_CASE("preset penalties can be overridden state by state") {
    const ExperimentConfig cfg = parse_config_text("source.preset = q1\npenalty.2 = 1 1");
    const ResolvedExperiment exp = resolve(cfg);
    CHECK(exp.penalties[0](1) == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0)); // preset f1
    CHECK(exp.penalties[1](3) == doctest::Approx(4.0));                   // overridden
}

TEST_CASE("cli optimize and exhaustive agree and emit well-formed csv") {
    const std::string prefix = temp_path("opt");
    REQUIRE(run_cli("optimize --preset q1 --lambda 70 --tau-max 20 --out " + prefix) == 0);
    REQUIRE(run_cli("exhaustive --preset q1 --lambda 70 --tau-max 20 --out " + prefix) == 0);
    const CsvFile opt = parse_csv(prefix + "_optimize.csv");
    const CsvFile exh = parse_csv(prefix + "_exhaustive.csv");
    REQUIRE(opt.rows.size() == 1);
    REQUIRE(exh.rows.size() == 1);
    CHECK(opt.columns == std::vector<std::string>{"lambda", "eta", "iterations", "converged",
                                                  "taus"});
    CHECK(exh.columns == std::vector<std::string>{"lambda", "cost", "taus"});
    // the two optimizers return the same thresholds and cost
    CHECK(opt.rows[0][4] == exh.rows[0][2]);
    CHECK(std::stod(opt.rows[0][1]) == doctest::Approx(std::stod(exh.rows[0][1])).epsilon(1e-9));
    // resolved config is embedded as comments
    bool has_sigma = false;
    for (const auto& line : opt.comments) {
        if (line.find("# sigma = 0.8") == 0) {
            has_sigma = true;
        }
    }
    CHECK(has_sigma);
}

TEST_CASE("cli optimize at lambda zero returns all-zero thresholds") {
    const std::string prefix = temp_path("lam0");
    REQUIRE(run_cli("optimize --preset q2 --lambda 0 --tau-max 15 --out " + prefix) == 0);
    const CsvFile opt = parse_csv(prefix + "_optimize.csv");
    CHECK(opt.rows[0][4] == "0;0;0");
}

TEST_CASE("cli distribution pmf column sums to one") {
    const std::string prefix = temp_path("dist");
    REQUIRE(run_cli("distribution --preset q2 --state 2 --tau 2 --out " + prefix) == 0);
    const CsvFile dist = parse_csv(prefix + "_distribution.csv");
    CHECK(dist.columns == std::vector<std::string>{"t", "pmf", "survival"});
    double total = 0.0;
    for (const auto& row : dist.rows) {
        total += std::stod(row[1]);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    // survival drops below the cutoff at the last row
    CHECK(std::stod(dist.rows.back()[2]) < 1e-9);
}

TEST_CASE("cli heatmap rejects non-2-state sources and covers the grid") {
    CHECK(run_cli("heatmap --preset q2 --lambda 5 --out " + temp_path("hm_bad")) == kExitConfig);

    const std::string prefix = temp_path("hm");
    REQUIRE(run_cli("heatmap --preset q1 --lambda 5 --tau-max 6 --out " + prefix) == 0);
    const CsvFile hm = parse_csv(prefix + "_heatmap.csv");
    CHECK(hm.rows.size() == 49);
    CHECK(hm.columns == std::vector<std::string>{"tau1", "tau2", "cost"});
}

TEST_CASE("cli simulate cross-checks the optimizer report") {
    const std::string prefix = temp_path("sim");
    std::ofstream cfg(prefix + ".cfg");
    cfg << "source.preset = q2\nlambda = 10\nsim.slots = 400000\nsim.replications = 4\n"
        << "sim.seed = 31\noutput.prefix = " << prefix << "\n";
    cfg.close();
    REQUIRE(run_cli("optimize --config " + prefix + ".cfg") == 0);
    REQUIRE(run_cli("simulate --config " + prefix + ".cfg") == 0);
    const CsvFile opt = parse_csv(prefix + "_optimize.csv");
    const CsvFile sim = parse_csv(prefix + "_simulate.csv");
    const double eta = std::stod(opt.rows[0][1]);
    const double simulated = std::stod(sim.rows[0][1]);
    CHECK(std::abs(simulated - eta) / eta < 0.01);
}

TEST_CASE("cli exit codes for config and guard failures") {
    CHECK(run_cli("optimize --preset nosuch --lambda 1") == kExitConfig);
    CHECK(run_cli("optimize --lambda 1") == kExitConfig); // no source
    CHECK(run_cli("optimize --config /nonexistent.cfg") == kExitConfig);
    CHECK(run_cli("exhaustive --preset q3 --lambda 1 --tau-max 20") == kExitGuard);
    CHECK(run_cli("bogus-subcommand") == kExitConfig);
}

TEST_CASE("cli benchmark emits the documented columns") {
    const std::string prefix = temp_path("bench");
    std::ofstream cfg(prefix + ".cfg");
    cfg << "source.preset = q1\nlambda.sweep = 0 4 2\nsim.slots = 60000\n"
        << "sim.replications = 3\nsim.seed = 5\nrs.alphas = 0.5 1.0\n"
        << "tau_max = 15\noutput.prefix = " << prefix << "\n";
    cfg.close();
    REQUIRE(run_cli("benchmark --config " + prefix + ".cfg") == 0);
    const CsvFile bench = parse_csv(prefix + "_benchmark.csv");
    CHECK(bench.columns ==
          std::vector<std::string>{"lambda", "smdp_cost", "st_cost", "rs_cost", "rs_ci",
                                   "smdp_taus", "st_tau", "rs_alpha"});
    REQUIRE(bench.rows.size() == 3);
    for (const auto& row : bench.rows) {
        CHECK(std::stod(row[1]) <= std::stod(row[2]) + 1e-9); // smdp <= st
    }
}

TEST_CASE("cli runs are deterministic given config and seed") {
    const std::string p1 = temp_path("det1");
    const std::string p2 = temp_path("det2");
    const std::string args = "simulate --preset q1 --lambda 3 --seed 12345 --out ";
    REQUIRE(run_cli(args + p1) == 0);
    REQUIRE(run_cli(args + p2) == 0);
    auto strip_prefix_lines = [](const std::string& text) {
        std::istringstream in(text);
        std::string line, out;
        while (std::getline(in, line)) {
            if (line.rfind("# output", 0) == 0) {
                continue;
            }
            out += line + "\n";
        }
        return out;
    };
    CHECK(strip_prefix_lines(slurp(p1 + "_simulate.csv")) ==
          strip_prefix_lines(slurp(p2 + "_simulate.csv")));
}

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace aoii::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_doubles(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::vector<double> out;
    double v;
    while (in >> v) {
        out.push_back(v);
    }
    if (!in.eof()) {
        throw ConfigError("config: cannot parse numbers in '" + key + "'");
    }
    if (out.empty()) {
        throw ConfigError("config: '" + key + "' needs at least one number");
    }
    return out;
}

double parse_one_double(const std::string& text, const std::string& key) {
    const auto vals = parse_doubles(text, key);
    if (vals.size() != 1) {
        throw ConfigError("config: '" + key + "' expects a single number");
    }
    return vals[0];
}

long parse_long(const std::string& text, const std::string& key) {
    const double v = parse_one_double(text, key);
    if (v != std::floor(v)) {
        throw ConfigError("config: '" + key + "' expects an integer");
    }
    return static_cast<long>(v);
}

Matrix parse_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::string row_text;
    std::istringstream in(text);
    while (std::getline(in, row_text, ';')) {
        rows.push_back(parse_doubles(row_text, "source.matrix"));
    }
    if (rows.empty()) {
        throw ConfigError("config: empty source.matrix");
    }
    const std::size_t n = rows.size();
    Matrix q(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw ConfigError("config: source.matrix is not square");
        }
        for (std::size_t j = 0; j < n; ++j) {
            q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return q;
}

} // namespace

std::vector<double> SweepSpec::values() const {
    if (step <= 0.0 || stop < start) {
        throw ConfigError("config: lambda.sweep needs start <= stop and step > 0");
    }
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-12; v += step) {
        out.push_back(v);
    }
    return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool seen_source = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError(fmt::format("config line {}: empty value for '{}'", line_no, key));
        }
        if (key == "source.preset") {
            cfg.preset = value;
            seen_source = true;
        } else if (key == "source.matrix") {
            cfg.matrix = parse_matrix(value);
            seen_source = true;
        } else if (key == "sigma") {
            cfg.sigma = parse_one_double(value, key);
        } else if (key == "lambda") {
            cfg.lambda = parse_one_double(value, key);
        } else if (key == "lambda.sweep") {
            const auto vals = parse_doubles(value, key);
            if (vals.size() != 3) {
                throw ConfigError("config: lambda.sweep expects 'start stop step'");
            }
            cfg.sweep = SweepSpec{vals[0], vals[1], vals[2]};
        } else if (key.rfind("penalty.", 0) == 0) {
            int state = 0;
            const std::string suffix = key.substr(8);
            const auto res =
                std::from_chars(suffix.data(), suffix.data() + suffix.size(), state);
            if (res.ec != std::errc() || res.ptr != suffix.data() + suffix.size() || state < 1) {
                throw ConfigError("config: bad penalty key '" + key + "' (states are 1-based)");
            }
            cfg.penalty_coeffs[state] = parse_doubles(value, key);
        } else if (key == "tau_max") {
            cfg.tau_max = parse_long(value, key);
        } else if (key == "eps_eta") {
            cfg.eps_eta = parse_one_double(value, key);
        } else if (key == "sim.slots") {
            cfg.sim_slots = parse_long(value, key);
        } else if (key == "sim.replications") {
            cfg.sim_replications = static_cast<int>(parse_long(value, key));
        } else if (key == "sim.warmup") {
            cfg.sim_warmup = parse_long(value, key);
        } else if (key == "sim.seed") {
            cfg.sim_seed = static_cast<std::uint64_t>(parse_long(value, key));
        } else if (key == "policy.taus") {
            const auto vals = parse_doubles(value, key);
            std::vector<long> taus;
            taus.reserve(vals.size());
            for (double v : vals) {
                taus.push_back(static_cast<long>(v));
            }
            cfg.policy_taus = std::move(taus);
        } else if (key == "policy.tau") {
            cfg.policy_tau = parse_long(value, key);
        } else if (key == "policy.alpha") {
            cfg.policy_alpha = parse_one_double(value, key);
        } else if (key == "rs.alphas") {
            cfg.rs_alphas = parse_doubles(value, key);
        } else if (key == "output.prefix") {
            cfg.output_prefix = value;
        } else {
            throw ConfigError(fmt::format("config line {}: unknown key '{}'", line_no, key));
        }
    }
    (void)seen_source;
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ResolvedExperiment resolve(ExperimentConfig cfg) {
    std::optional<DtmcSource> source;
    PenaltySet penalties;
    if (cfg.preset && cfg.matrix) {
        throw ConfigError("config: give either source.preset or source.matrix, not both");
    }
    if (cfg.preset) {
        Preset p = preset_source(*cfg.preset);
        source = std::move(p.source);
        penalties = std::move(p.penalties);
    } else if (cfg.matrix) {
        source = DtmcSource::validate(*cfg.matrix);
    } else {
        throw ConfigError("config: need source.preset or source.matrix");
    }
    const int n = source->size();
    if (penalties.empty()) {
        if (static_cast<int>(cfg.penalty_coeffs.size()) != n) {
            throw ConfigError(fmt::format(
                "config: need penalty.1 .. penalty.{} for an inline source", n));
        }
    }
    for (const auto& [state, coeffs] : cfg.penalty_coeffs) {
        if (state > n) {
            throw ConfigError(fmt::format("config: penalty.{} exceeds the {} states", state, n));
        }
    }
    if (!cfg.penalty_coeffs.empty()) {
        if (penalties.empty()) {
            penalties.assign(static_cast<std::size_t>(n), PolynomialPenalty({0.0}));
        }
        for (const auto& [state, coeffs] : cfg.penalty_coeffs) {
            penalties[static_cast<std::size_t>(state - 1)] = PolynomialPenalty(coeffs);
        }
    }
    if (!(cfg.sigma > 0.0) || cfg.sigma > 1.0) {
        throw ConfigError("config: sigma must be in (0, 1]");
    }
    if (cfg.tau_max < 0) {
        throw ConfigError("config: tau_max must be nonnegative");
    }
    return ResolvedExperiment{std::move(*source), std::move(penalties), std::move(cfg)};
}

std::vector<double> ResolvedExperiment::lambdas() const {
    if (cfg.sweep) {
        return cfg.sweep->values();
    }
    if (cfg.lambda) {
        return {*cfg.lambda};
    }
    throw ConfigError("config: need lambda or lambda.sweep for this command");
}

std::vector<std::string> config_header_lines(const ResolvedExperiment& exp) {
    std::vector<std::string> lines;
    const auto& cfg = exp.cfg;
    if (cfg.preset) {
        lines.push_back(fmt::format("# source.preset = {}", *cfg.preset));
    }
    std::string matrix_text;
    for (int i = 0; i < exp.source.size(); ++i) {
        if (i > 0) {
            matrix_text += "; ";
        }
        for (int j = 0; j < exp.source.size(); ++j) {
            if (j > 0) {
                matrix_text += ' ';
            }
            matrix_text += fmt::format("{}", exp.source.q(i, j));
        }
    }
    lines.push_back(fmt::format("# source.matrix = {}", matrix_text));
    for (std::size_t j = 0; j < exp.penalties.size(); ++j) {
        std::string coeffs;
        for (std::size_t k = 0; k < exp.penalties[j].coeffs().size(); ++k) {
            if (k > 0) {
                coeffs += ' ';
            }
            coeffs += fmt::format("{}", exp.penalties[j].coeffs()[k]);
        }
        lines.push_back(fmt::format("# penalty.{} = {}", j + 1, coeffs));
    }
    lines.push_back(fmt::format("# sigma = {}", cfg.sigma));
    if (cfg.sweep) {
        lines.push_back(fmt::format("# lambda.sweep = {} {} {}", cfg.sweep->start,
                                    cfg.sweep->stop, cfg.sweep->step));
    } else if (cfg.lambda) {
        lines.push_back(fmt::format("# lambda = {}", *cfg.lambda));
    }
    lines.push_back(fmt::format("# tau_max = {}", cfg.tau_max));
    lines.push_back(fmt::format("# eps_eta = {}", cfg.eps_eta));
    lines.push_back(fmt::format("# sim.slots = {}", cfg.sim_slots));
    lines.push_back(fmt::format("# sim.replications = {}", cfg.sim_replications));
    lines.push_back(fmt::format("# sim.warmup = {}", cfg.warmup()));
    lines.push_back(fmt::format("# sim.seed = {}", cfg.sim_seed));
    lines.push_back(fmt::format("# rng = {}", Rng::identity));
    return lines;
}

} // namespace aoii::cli

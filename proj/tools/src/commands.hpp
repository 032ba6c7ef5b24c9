#pragma once

#include <iosfwd>

#include "config.hpp"

namespace aoii::cli {

// exit codes shared by main and the end-to-end tests
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitGuard = 4;

int run_optimize(const ResolvedExperiment& exp, std::ostream& out);
int run_exhaustive(const ResolvedExperiment& exp, std::ostream& out);
int run_benchmark(const ResolvedExperiment& exp, std::ostream& out);
int run_simulate(const ResolvedExperiment& exp, std::ostream& out);
int run_distribution(const ResolvedExperiment& exp, int state_1based, long tau,
                     std::ostream& out);
int run_heatmap(const ResolvedExperiment& exp, std::ostream& out);

/// Maps library errors to the documented exit codes.
int exit_code_for_current_exception();

} // namespace aoii::cli

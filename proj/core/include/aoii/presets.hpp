#pragma once

#include <string_view>

#include "aoii/drph.hpp"
#include "aoii/markov.hpp"

namespace aoii {

struct Preset {
    DtmcSource source;
    PenaltySet penalties;
};

/// Built-in experiment setups:
///   q1: 2-state chain [[0.65, 0.35], [0.25, 0.75]] with quadratic penalties
///   q2: 3-state chain with per-state quadratic penalties
///   q3: 10-state chain; diagonal linearly spread over [0.4, 0.6], each row's
///       off-diagonals linearly spread over [0.5, 1.5] * (1 - q_nn)/(N - 1)
///       in increasing column order, f_n(x) = x^2/n + x/(N+1-n) (1-based n).
/// Throws UnknownPreset for any other name.
Preset preset_source(std::string_view name);

} // namespace aoii

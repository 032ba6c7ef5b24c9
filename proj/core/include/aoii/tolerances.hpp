#pragma once

namespace aoii {

/// Central numeric tolerances. Validation bounds are looser than internal
/// algebra checks; tail controls series truncation.
struct Tolerances {
    double validation = 1e-9;
    double algebra = 1e-10;
    double tail = 1e-12;
};

} // namespace aoii

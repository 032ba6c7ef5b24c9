#include "aoii/presets.hpp"

#include <string>

namespace aoii {

Preset preset_source(std::string_view name) {
    if (name == "q1") {
        Matrix q(2, 2);
        q << 0.65, 0.35, //
            0.25, 0.75;
        PenaltySet pens;
        pens.emplace_back(std::vector<double>{1.0 / 3.0, 0.5, 1.0});
        pens.emplace_back(std::vector<double>{0.5, 0.6, 0.7});
        return {DtmcSource::validate(std::move(q)), std::move(pens)};
    }
    if (name == "q2") {
        Matrix q(3, 3);
        q << 0.7, 0.2, 0.1, //
            0.3, 0.6, 0.1,  //
            0.2, 0.3, 0.5;
        PenaltySet pens;
        pens.emplace_back(std::vector<double>{0.5, 0.0, 1.0});
        pens.emplace_back(std::vector<double>{0.0, 0.5, 0.5});
        pens.emplace_back(std::vector<double>{0.25, 0.0, 1.0 / 3.0});
        return {DtmcSource::validate(std::move(q)), std::move(pens)};
    }
    if (name == "q3") {
        const int n = 10;
        Matrix q = Matrix::Zero(n, n);
        PenaltySet pens;
        for (int row = 0; row < n; ++row) {
            const double q_nn = 0.4 + 0.2 * static_cast<double>(row) / (n - 1);
            q(row, row) = q_nn;
            const double lo = 0.5 * (1.0 - q_nn) / (n - 1);
            const double hi = 1.5 * (1.0 - q_nn) / (n - 1);
            int k = 0;
            for (int col = 0; col < n; ++col) {
                if (col == row) {
                    continue;
                }
                q(row, col) = lo + (hi - lo) * static_cast<double>(k) / (n - 2);
                ++k;
            }
            // f_n(x) = x^2/n + x/(N+1-n) with n 1-based
            pens.emplace_back(std::vector<double>{
                0.0, 1.0 / static_cast<double>(n - row), 1.0 / static_cast<double>(row + 1)});
        }
        return {DtmcSource::validate(std::move(q)), std::move(pens)};
    }
    throw UnknownPreset("preset_source: unknown preset '" + std::string(name) + "'");
}

} // namespace aoii

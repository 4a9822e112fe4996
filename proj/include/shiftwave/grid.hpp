/*
 * Uniform 1D grid truncating the real line to [center-L, center+L].
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "shiftwave/errors.hpp"

namespace shiftwave {

struct Grid {
    double L = 50.0;
    int n = 8001;
    double center = 0.0;

    static Grid make(double L, int n, double center = 0.0) {
        if (!(L > 0.0)) throw ConfigError("grid: L must be positive");
        if (n < 401) throw ConfigError("grid: need at least 401 points");
        return Grid{L, n, center};
    }

    /*
     * Half-width giving >= 25 e-folds of the slowest decay rate and
     * clearing the (translated) transition zone of the shift.
     */
    static Grid auto_for(double lambda_min, double K, double offset = 0.0, int n = 8001) {
        if (!(lambda_min > 0.0)) throw ConfigError("grid: lambda_min must be positive");
        const double L =
            std::max({25.0 / lambda_min, 10.0 * K + 10.0, offset + K + 10.0});
        return make(L, n);
    }

    double spacing() const { return 2.0 * L / (n - 1); }
    double z(int i) const { return center - L + spacing() * i; }
    double left() const { return center - L; }
    double right() const { return center + L; }

    std::vector<double> positions() const {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = z(i);
        return p;
    }
};

} // namespace shiftwave

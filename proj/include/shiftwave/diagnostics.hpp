/*
 * Limit and decay diagnostics for computed waves.
 */
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "shiftwave/errors.hpp"
#include "shiftwave/model.hpp"
#include "shiftwave/system_solver.hpp"

namespace shiftwave {

/*
 * Log-slope fit of an exponential tail.  Points are selected by value window
 * (keeps the fit off the solver's noise floor and away from the transition
 * zone); `left_tail` fits the growth e^(lambda z) toward -inf, otherwise the
 * decay e^(-lambda z) toward +inf.  Returns nullopt when fewer than 8 points
 * qualify.
 */
inline std::optional<double> fit_decay_rate(const Grid& grid, const std::vector<double>& vals,
                                            bool left_tail, double vlo = 1e-8,
                                            double vhi = 1e-5) {
    std::vector<double> zs, ls;
    for (int i = 0; i < grid.n; ++i) {
        const double v = vals[static_cast<std::size_t>(i)];
        const double z = grid.z(i);
        if (v <= vlo || v >= vhi) continue;
        if (left_tail && z >= grid.center) continue;
        if (!left_tail && z <= grid.center) continue;
        zs.push_back(z);
        ls.push_back(std::log(v));
    }
    if (zs.size() < 8) return std::nullopt;
    double sz = 0.0, sl = 0.0, szz = 0.0, szl = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        sz += zs[i];
        sl += ls[i];
        szz += zs[i] * zs[i];
        szl += zs[i] * ls[i];
    }
    const double nn = static_cast<double>(zs.size());
    const double slope = (nn * szl - sz * sl) / (nn * szz - sz * sz);
    return left_tail ? slope : -slope;
}

struct LimitReport {
    std::array<double, 4> left_distance{};  // to E_u, E_v, E*, E_*
    std::string nearest_left;
    double right_origin_distance = 0.0;
    std::array<std::optional<double>, 3> decay_rate_left;  // for components vanishing at -inf
    std::array<std::optional<double>, 3> decay_rate_right;
    std::array<double, 3> positivity_min{};
};

inline LimitReport wave_diagnostics(const WaveSolution& wave, const SteadyStates& states) {
    if (!wave.converged) throw PrerequisiteViolation("diagnostics need a converged wave");
    LimitReport rep;
    const Triple left = wave.left_end();
    const auto named = states.named();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < named.size(); ++i) {
        rep.left_distance[i] = left.dist(named[i].second);
        if (rep.left_distance[i] < best) {
            best = rep.left_distance[i];
            rep.nearest_left = named[i].first;
        }
    }
    rep.right_origin_distance = wave.right_end().norm();
    for (std::size_t c = 0; c < 3; ++c) {
        rep.decay_rate_left[c] = fit_decay_rate(wave.grid, wave.phi[c], true);
        rep.decay_rate_right[c] = fit_decay_rate(wave.grid, wave.phi[c], false);
        rep.positivity_min[c] = wave.positivity_min[c];
    }
    return rep;
}

} // namespace shiftwave

/*
 * Forced-wave pipeline for the kinetically stable invaded state
 * (0, v_p, w_p), valid at every positive speed when the predator is
 * efficient and predation weak:
 *
 *   gamma2 = 1 - h - b(2a-1) > 0,   gamma3 = a gamma2 - 1 > 0.
 *
 * Two scalar waves are chained: the strong prey's lower profile solves the
 * scalar problem with carrying capacity gamma2 under alpha, and the
 * predator's solves it with gamma3 under the composite heterogeneity
 * alpha + a (lower_v - gamma2), whose envelope rate drops to the first
 * stage's lambda0.  Together with the constant upper triple (1, 1, 2a-1)
 * and lower_u = 0 they form a generalized pair; the full system is then
 * solved from its midpoint and the stable-state limit is verified
 * numerically near the left end (the left boundary itself is pinned, so the
 * check reads the adjacent interior).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "shiftwave/bounds.hpp"
#include "shiftwave/errors.hpp"
#include "shiftwave/grid.hpp"
#include "shiftwave/model.hpp"
#include "shiftwave/scalar_wave.hpp"
#include "shiftwave/shift.hpp"
#include "shiftwave/system_solver.hpp"

namespace shiftwave {

struct ChainConfig {
    int n = 8001;            // solve grid
    int n_verify = 32001;    // sampling grid for the pair's numeric profiles: the
                             // spline-derivative residual error is O(h^2), so the
                             // relaxed 1e-6 verification needs the denser grid
    double grid_L = 0.0;     // 0: automatic
    ScalarWaveConfig scalar;
    SolveConfig newton;
    double left_check_offset = 5.0; // limit check position relative to -L
};

struct EstarChain {
    BoundPair pair;
    ScalarWave lower_v, lower_w;
    WaveSolution wave;
    double gamma2 = 0.0, gamma3 = 0.0;
    Triple invaded;
    double left_state_error = 0.0; // near-left distance of the wave to (0, v_p, w_p)
    bool reaches_invaded = false;
    double sup_u = 0.0;
};

// worst value of 1 + alpha - k lower_v - b lower_w over the grid; strictly
// negative everywhere forces the weak prey's component to vanish
struct SignConditionReport {
    double worst = 0.0;
    double worst_z = 0.0;
    bool holds = false;
};

inline SignConditionReport weak_prey_exclusion_condition(const ModelParams& p,
                                                         const BoundPair& pair,
                                                         const Grid& grid) {
    SignConditionReport rep;
    rep.worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.n; ++i) {
        const double z = grid.z(i);
        const double v =
            1.0 + pair.shift(z) - p.k * pair.lower[1](z) - p.b * pair.lower[2](z);
        if (v > rep.worst) {
            rep.worst = v;
            rep.worst_z = z;
        }
    }
    rep.holds = rep.worst < 0.0;
    return rep;
}

inline EstarChain build_estar_chain(const ModelParams& p, double s,
                                    const ShiftProfile& shift_in,
                                    const ChainConfig& cfg = {}) {
    p.validate();
    if (!(s > 0.0)) throw ConfigError("build_estar_chain: speed must be positive");
    const HypothesisReport rep = check_hypotheses(p, s, Scenario::Estable, shift_in.rho);
    if (!rep.all_pass()) {
        const ConditionCheck* fail = rep.first_failure();
        throw HypothesisViolation(fail->name, fail->detail);
    }

    EstarChain out;
    const SteadyStates ss = steady_states(p);
    out.invaded = ss.E_star_lo;
    const double P3 = 2.0 * p.a - 1.0;
    out.gamma2 = 1.0 - p.h - p.b * P3;
    out.gamma3 = -1.0 + p.a * out.gamma2;

    const ShiftProfile alpha =
        normalize_translation(shift_in, cfg.scalar.epsilon, shift_in.rho);

    // pre-compute the two sub-solution rates to size the grid
    const auto [lam0_v, eps_v] =
        detail::choose_lambda0(p.d, s, p.r2, alpha.rho, cfg.scalar.epsilon);
    const auto [lam0_w, eps_w] = detail::choose_lambda0(p.d, s, p.r3, lam0_v, eps_v);
    (void)eps_w;
    Grid grid = cfg.grid_L > 0.0
                    ? Grid::make(cfg.grid_L, cfg.n)
                    : Grid::auto_for(std::min(lam0_v, lam0_w), shift_in.K, alpha.offset, cfg.n);

    const auto alpha_fn = [&](double z) { return alpha(z); };
    out.lower_v = solve_scalar_wave(p.d, s, p.r2, out.gamma2, alpha_fn, alpha.rho, grid,
                                    cfg.scalar);

    const ScalarWave& lv = out.lower_v;
    auto alpha_hat = [&](double z) {
        return alpha(z) + p.a * (lv.value(z) - out.gamma2);
    };
    ScalarWaveConfig cfg2 = cfg.scalar;
    cfg2.epsilon = lv.epsilon;
    out.lower_w = solve_scalar_wave(p.d, s, p.r3, out.gamma3, alpha_hat, lv.lambda0, grid,
                                    cfg2);

    // numeric profiles for the pair are sampled on the denser verify grid
    const Grid fine = Grid::make(grid.L, std::max(cfg.n, cfg.n_verify));
    const ScalarWave fine_v =
        solve_scalar_wave(p.d, s, p.r2, out.gamma2, alpha_fn, alpha.rho, fine, cfg.scalar);
    auto fine_alpha_hat = [&](double z) {
        return alpha(z) + p.a * (fine_v.value(z) - out.gamma2);
    };
    const ScalarWave fine_w = solve_scalar_wave(p.d, s, p.r3, out.gamma3, fine_alpha_hat,
                                                fine_v.lambda0, fine, cfg2);

    BoundPair pair;
    pair.scenario = BoundScenario::EstarChain;
    pair.upper = {PiecewiseProfile::constant(1.0), PiecewiseProfile::constant(1.0),
                  PiecewiseProfile::constant(P3)};
    pair.lower = {PiecewiseProfile::constant(0.0),
                  PiecewiseProfile::sampled(fine.positions(), fine_v.phi),
                  PiecewiseProfile::sampled(fine.positions(), fine_w.phi)};
    pair.invaded_state = out.invaded;
    pair.shift = alpha;
    BoundConstants c;
    c.s = s;
    c.epsilon = out.lower_v.epsilon;
    c.rho_env = alpha.rho;
    c.M = alpha.offset;
    c.gamma2 = out.gamma2;
    c.gamma3 = out.gamma3;
    c.lambda0_v = out.lower_v.lambda0;
    c.lambda0_w = out.lower_w.lambda0;
    pair.constants = c;
    out.pair = std::move(pair);

    out.wave = solve_system(p, s, out.pair, grid, cfg.newton);

    const double z_eval = grid.left() + cfg.left_check_offset;
    const int i_eval =
        std::max(1, static_cast<int>(std::round((z_eval - grid.left()) / grid.spacing())));
    out.left_state_error = out.wave.at(i_eval).dist(out.invaded);
    out.reaches_invaded = out.left_state_error < 1e-4;
    double su = 0.0;
    for (double v : out.wave.phi[0]) su = std::max(su, std::abs(v));
    out.sup_u = su;
    return out;
}

} // namespace shiftwave

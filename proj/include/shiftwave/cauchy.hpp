/*
 * Co-moving-frame simulation of the parabolic system by first-order IMEX
 * splitting: transport-diffusion (d dzz - s dz) implicit through one
 * tridiagonal solve per species per step, reaction explicit.  The time step
 * is capped by the reaction's Lipschitz bound over the invariant box, which
 * keeps the explicit substep monotone, so the box
 * [0, u_hi] x [0, v_hi] x [0, w_hi] is preserved to rounding; the caps
 * adapt to the initial state when it exceeds the theoretical
 * [0,1] x [0,1] x [0, 2a-1].
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "shiftwave/errors.hpp"
#include "shiftwave/grid.hpp"
#include "shiftwave/model.hpp"
#include "shiftwave/shift.hpp"
#include "shiftwave/system_solver.hpp"
#include "shiftwave/tridiag.hpp"

namespace shiftwave {

enum class LeftBoundary {
    Pinned, // hold the initial state's left values (invaded state by construction)
    Free,   // homogeneous one-sided flux
    Zero,
};

struct SimConfig {
    double dt = 0.0; // 0: 0.25 / (reaction Lipschitz bound over the box)
    double t_end = 50.0;
    double snapshot_every = 1.0;
    LeftBoundary left = LeftBoundary::Pinned;
    double box_tol = 1e-10;
    double extinction_threshold = 1e-4;
    double extinction_dwell = 10.0;
};

struct Trajectory {
    Grid grid;
    std::vector<double> times;
    std::vector<std::array<std::vector<double>, 3>> snapshots;
    std::vector<std::array<double, 3>> sup_norms; // per snapshot, per species
    std::array<double, 3> box_hi{};
    double box_breach = 0.0; // worst excursion beyond [0, box_hi]
    double dt = 0.0;
    int steps = 0;

    const std::array<std::vector<double>, 3>& final_state() const { return snapshots.back(); }

    // first time the species' sup-norm stays below `threshold` for `dwell`
    std::optional<double> extinction_time(int species, double threshold,
                                          double dwell) const {
        const auto c = static_cast<std::size_t>(species);
        std::optional<double> onset;
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (sup_norms[k][c] < threshold) {
                if (!onset) onset = times[k];
                if (times[k] - *onset >= dwell) return onset;
            } else {
                onset.reset();
            }
        }
        if (onset && times.back() - *onset >= dwell) return onset;
        return std::nullopt;
    }
};

// Lipschitz bound of the kinetics over [0,u_hi] x [0,v_hi] x [0,w_hi]
inline double reaction_lipschitz(const ModelParams& p, double sup_alpha,
                                 const std::array<double, 3>& hi) {
    const double A = sup_alpha;
    const double row1 =
        p.r1 * ((1.0 + A + 2.0 * hi[0] + p.k * hi[1] + p.b * hi[2]) + p.k * hi[0] + p.b * hi[0]);
    const double row2 =
        p.r2 * ((1.0 + A + p.h * hi[0] + 2.0 * hi[1] + p.b * hi[2]) + p.h * hi[1] + p.b * hi[1]);
    const double row3 = p.r3 * ((1.0 + A + p.a * hi[0] + p.a * hi[1] + 2.0 * hi[2]) +
                                2.0 * p.a * hi[2]);
    return std::max({row1, row2, row3});
}

inline Trajectory simulate(const ModelParams& p, double s, const ShiftProfile& shift,
                           const std::array<std::vector<double>, 3>& ic, const Grid& grid,
                           const SimConfig& cfg = {}) {
    p.validate();
    const auto n = static_cast<std::size_t>(grid.n);
    for (const auto& v : ic)
        if (v.size() != n) throw GridMismatch("initial state does not match the grid");
    if (grid.spacing() >= 2.0 * p.d / s)
        throw ConfigError("simulate: grid too coarse for the drift (need h < 2d/s)");

    Trajectory traj;
    traj.grid = grid;
    traj.box_hi = {1.0, 1.0, 2.0 * p.a - 1.0};
    for (std::size_t c = 0; c < 3; ++c) {
        for (double v : ic[c]) {
            if (!std::isfinite(v)) throw NonfiniteValue("initial state nonfinite");
            if (v < -cfg.box_tol)
                throw BoxViolation("initial state negative at " + std::to_string(v));
            traj.box_hi[c] = std::max(traj.box_hi[c], v);
        }
    }

    std::vector<double> al(n);
    double sup_alpha = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        al[static_cast<std::size_t>(i)] = shift(grid.z(i));
        sup_alpha = std::max(sup_alpha, std::abs(al[static_cast<std::size_t>(i)]));
    }

    const double lip = reaction_lipschitz(p, sup_alpha, traj.box_hi);
    double dt = cfg.dt > 0.0 ? cfg.dt : 0.25 / lip;
    if (dt > 0.25 / lip)
        throw ConfigError("simulate: dt exceeds 0.25 / reaction Lipschitz bound (" +
                          std::to_string(0.25 / lip) + ")");
    // land exactly on t_end
    const int steps_total = static_cast<int>(std::ceil(cfg.t_end / dt - 1e-12));
    dt = cfg.t_end / steps_total;
    traj.dt = dt;

    // implicit operator, factor-ready coefficients
    const double h = grid.spacing();
    const double w2 = p.d / (h * h);
    const double w1 = s / (2.0 * h);
    std::vector<double> lo(n, -dt * (w2 + w1)), di(n, 1.0 + dt * 2.0 * w2),
        up(n, -dt * (w2 - w1)), scratch;
    lo.front() = lo.back() = up.front() = up.back() = 0.0;
    di.front() = di.back() = 1.0;
    if (cfg.left == LeftBoundary::Free) up.front() = -1.0; // phi_0 = phi_1

    std::array<std::vector<double>, 3> phi = ic;
    const std::array<double, 3> left_pin{ic[0].front(), ic[1].front(), ic[2].front()};

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(phi);
        std::array<double, 3> sup{};
        for (std::size_t c = 0; c < 3; ++c) {
            double m = 0.0;
            for (double v : phi[c]) {
                m = std::max(m, std::abs(v));
                const double breach = std::max(-v, v - traj.box_hi[c]);
                traj.box_breach = std::max(traj.box_breach, breach);
            }
            sup[c] = m;
        }
        traj.sup_norms.push_back(sup);
        if (traj.box_breach > cfg.box_tol)
            throw BoxViolation("trajectory left the invariant box by " +
                               std::to_string(traj.box_breach) +
                               "; reduce the time step");
        for (std::size_t c = 0; c < 3; ++c)
            for (double v : phi[c])
                if (!std::isfinite(v)) throw NonfiniteValue("simulation became nonfinite");
    };

    record(0.0);
    const int steps = steps_total;
    double next_snap = cfg.snapshot_every;
    std::array<std::vector<double>, 3> rhs;
    for (std::size_t c = 0; c < 3; ++c) rhs[c].assign(n, 0.0);
    for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        for (std::size_t c = 0; c < 3; ++c) {
            switch (cfg.left) {
                case LeftBoundary::Pinned: rhs[c][0] = left_pin[c]; break;
                case LeftBoundary::Zero: rhs[c][0] = 0.0; break;
                case LeftBoundary::Free: rhs[c][0] = 0.0; break; // phi_0 - phi_1 = 0
            }
            rhs[c][n - 1] = 0.0;
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const auto f = detail::reaction(p, al[i], phi[0][i], phi[1][i], phi[2][i]);
            for (std::size_t c = 0; c < 3; ++c) rhs[c][i] = phi[c][i] + dt * f[c];
        }
        for (std::size_t c = 0; c < 3; ++c) {
            solve_tridiag(lo, di, up, rhs[c], scratch);
            phi[c].swap(rhs[c]);
        }
        traj.steps = k;
        if (t >= next_snap - 1e-12 || k == steps) {
            record(t);
            next_snap += cfg.snapshot_every;
        }
    }
    return traj;
}

/* ------------------------------------------------------------------------ */

enum class Verdict { Converging, Stalled, Diverging };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Converging: return "converging";
        case Verdict::Stalled: return "stalled";
        case Verdict::Diverging: return "diverging";
    }
    return "?";
}

struct ConvergenceMetrics {
    std::vector<double> times;
    std::vector<double> distances; // sup over species and grid
    double fitted_rate = 0.0;      // exponential decay rate of the distance
    double final_distance = 0.0;
    Verdict verdict = Verdict::Stalled;
};

/*
 * Sup-distance history against a reference wave with a rough verdict.
 * Distances under `floor` count as converged regardless of trend, so
 * stationarity runs hovering at the solver noise level do not read as
 * divergence.
 */
inline ConvergenceMetrics convergence_metrics(const Trajectory& traj,
                                              const WaveSolution& wave,
                                              double floor = 1e-6) {
    if (traj.grid.n != wave.grid.n || traj.grid.L != wave.grid.L ||
        traj.grid.center != wave.grid.center)
        throw GridMismatch("trajectory and reference wave use different grids");
    ConvergenceMetrics m;
    m.times = traj.times;
    m.distances.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots) {
        double d = 0.0;
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < snap[c].size(); ++i)
                d = std::max(d, std::abs(snap[c][i] - wave.phi[c][i]));
        m.distances.push_back(d);
    }
    m.final_distance = m.distances.back();

    // exponential fit on the positive tail of the distance series
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    int cnt = 0;
    for (std::size_t k = 0; k < m.distances.size(); ++k) {
        if (m.distances[k] <= 0.0) continue;
        const double l = std::log(m.distances[k]);
        st += m.times[k];
        sl += l;
        stt += m.times[k] * m.times[k];
        stl += m.times[k] * l;
        ++cnt;
    }
    if (cnt >= 3) m.fitted_rate = -(cnt * stl - st * sl) / (cnt * stt - st * st);

    const std::size_t third = std::max<std::size_t>(1, m.distances.size() / 3);
    double first = 0.0, last = 0.0;
    for (std::size_t k = 0; k < third; ++k) first += m.distances[k];
    for (std::size_t k = m.distances.size() - third; k < m.distances.size(); ++k)
        last += m.distances[k];
    first /= static_cast<double>(third);
    last /= static_cast<double>(third);
    if (last < floor || last < 0.5 * first)
        m.verdict = Verdict::Converging;
    else if (last > 2.0 * first)
        m.verdict = Verdict::Diverging;
    else
        m.verdict = Verdict::Stalled;
    return m;
}

} // namespace shiftwave

#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "psets.hpp"
#include "shiftwave/cauchy.hpp"
#include "shiftwave/chain.hpp"

using namespace shiftwave;
using swtest::default_shift;
using swtest::pset_a;
using swtest::pset_c;

TEST_CASE("forced wave is stationary in the co-moving frame", "[cauchy][slow]") {
    const ModelParams p = pset_a();
    const BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const Grid grid = Grid::auto_for(pair.constants.lambda1, pair.shift.K, pair.shift.offset);
    const WaveSolution wave = solve_system(p, 2.5, pair, grid);
    SimConfig cfg;
    cfg.t_end = 50.0;
    cfg.snapshot_every = 5.0;
    const Trajectory traj = simulate(p, 2.5, pair.shift, wave.phi, grid, cfg);
    const ConvergenceMetrics m = convergence_metrics(traj, wave);
    double drift = 0.0;
    for (double d : m.distances) drift = std::max(drift, d);
    CHECK(drift <= 1e-6);
    CHECK(m.verdict == Verdict::Converging);
}

TEST_CASE("zero state with zero boundary stays zero", "[cauchy]") {
    const ModelParams p = pset_a();
    const ShiftProfile alpha = normalize_translation(default_shift(0.5), 0.01);
    const Grid grid = Grid::make(30.0, 1201);
    std::array<std::vector<double>, 3> ic;
    for (auto& v : ic) v.assign(1201, 0.0);
    SimConfig cfg;
    cfg.t_end = 5.0;
    cfg.left = LeftBoundary::Zero;
    const Trajectory traj = simulate(p, 2.5, alpha, ic, grid, cfg);
    for (const auto& snap : traj.snapshots)
        for (const auto& comp : snap)
            for (double v : comp) CHECK(v == 0.0);
}

TEST_CASE("box invariance from random admissible states", "[cauchy][property]") {
    const ModelParams p = pset_a();
    const ShiftProfile alpha = normalize_translation(default_shift(0.5), 0.01);
    const Grid grid = Grid::make(30.0, 1201);
    std::mt19937_64 rng(314159u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        std::array<std::vector<double>, 3> ic;
        const double wcap = 2.0 * p.a - 1.0;
        for (std::size_t c = 0; c < 3; ++c) {
            ic[c].resize(1201);
            for (auto& v : ic[c]) v = (c == 2 ? wcap : 1.0) * u01(rng);
            ic[c].back() = 0.0;
        }
        SimConfig cfg;
        cfg.t_end = 8.0;
        cfg.snapshot_every = 0.5;
        const Trajectory traj = simulate(p, 2.5, alpha, ic, grid, cfg);
        CHECK(traj.box_breach <= 1e-10);
        CHECK(traj.box_hi[0] == 1.0);
        CHECK(traj.box_hi[2] == wcap);
    }
}

TEST_CASE("time stepping is first-order accurate", "[cauchy][slow]") {
    const ModelParams p = pset_a();
    const BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const Grid grid = Grid::make(40.0, 2001);
    std::array<std::vector<double>, 3> ic;
    for (std::size_t c = 0; c < 3; ++c) {
        ic[c].resize(2001);
        for (int i = 0; i < 2001; ++i)
            ic[c][static_cast<std::size_t>(i)] =
                0.5 * (pair.lower[c](grid.z(i)) + pair.upper[c](grid.z(i)));
        ic[c].back() = 0.0;
    }
    auto run = [&](double dt) {
        SimConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 10.0;
        cfg.snapshot_every = 10.0;
        return simulate(p, 2.5, pair.shift, ic, grid, cfg).final_state();
    };
    const auto f1 = run(0.008), f2 = run(0.004), f3 = run(0.002);
    auto diff = [](const std::array<std::vector<double>, 3>& a,
                   const std::array<std::vector<double>, 3>& b) {
        double d = 0.0;
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < a[c].size(); ++i)
                d = std::max(d, std::abs(a[c][i] - b[c][i]));
        return d;
    };
    const double e1 = diff(f1, f2), e2 = diff(f2, f3);
    const double order = std::log2(e1 / e2);
    INFO("e1 = " << e1 << ", e2 = " << e2);
    CHECK(order >= 0.9);
}

TEST_CASE("free left boundary holds a flat wave", "[cauchy]") {
    const ModelParams p = pset_a();
    const BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const Grid grid = Grid::make(40.0, 2001);
    const WaveSolution wave = solve_system(p, 2.5, pair, grid);
    SimConfig cfg;
    cfg.t_end = 5.0;
    cfg.left = LeftBoundary::Free; // one-sided zero flux instead of the pin
    const Trajectory traj = simulate(p, 2.5, pair.shift, wave.phi, grid, cfg);
    // releasing the pin lets the exponential tail creep, but over a short
    // window the wave barely moves
    const ConvergenceMetrics m = convergence_metrics(traj, wave);
    CHECK(m.final_distance < 1e-4);
}

TEST_CASE("oversized steps and escaping states are rejected", "[cauchy]") {
    const ModelParams p = pset_a();
    const ShiftProfile alpha = normalize_translation(default_shift(0.5), 0.01);
    const Grid grid = Grid::make(30.0, 1201);
    std::array<std::vector<double>, 3> ic;
    for (auto& v : ic) v.assign(1201, 0.1);
    for (auto& v : ic) v.back() = 0.0;
    SimConfig cfg;
    cfg.dt = 1.0; // far beyond the Lipschitz cap
    CHECK_THROWS_AS(simulate(p, 2.5, alpha, ic, grid, cfg), ConfigError);
    ic[0][600] = -1.0;
    CHECK_THROWS_AS(simulate(p, 2.5, alpha, ic, grid, {}), BoxViolation);
}

TEST_CASE("metrics on the wave itself report convergence", "[cauchy]") {
    const ModelParams p = pset_a();
    const BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const Grid grid = Grid::make(40.0, 2001);
    const WaveSolution wave = solve_system(p, 2.5, pair, grid);
    SimConfig cfg;
    cfg.t_end = 3.0;
    const Trajectory traj = simulate(p, 2.5, pair.shift, wave.phi, grid, cfg);
    const ConvergenceMetrics m = convergence_metrics(traj, wave);
    CHECK(m.final_distance < 1e-8);
    CHECK(m.verdict == Verdict::Converging);

    WaveSolution other = wave;
    other.grid = Grid::make(40.0, 1001);
    CHECK_THROWS_AS(convergence_metrics(traj, other), GridMismatch);
}

TEST_CASE("long simulation lands on the Newton wave", "[cauchy][slow]") {
    const ModelParams p = pset_c();
    const EstarChain ch = build_estar_chain(p, 1.0, default_shift(0.5));
    const Grid& grid = ch.wave.grid;
    std::array<std::vector<double>, 3> ic;
    for (std::size_t c = 0; c < 3; ++c) {
        ic[c].resize(static_cast<std::size_t>(grid.n));
        for (int i = 0; i < grid.n; ++i)
            ic[c][static_cast<std::size_t>(i)] =
                0.5 * (ch.pair.lower[c](grid.z(i)) + ch.pair.upper[c](grid.z(i)));
        ic[c].front() = ch.wave.phi[c].front();
        ic[c].back() = 0.0;
    }
    SimConfig cfg;
    cfg.t_end = 500.0;
    cfg.snapshot_every = 25.0;
    const Trajectory traj = simulate(p, 1.0, ch.pair.shift, ic, grid, cfg);
    const ConvergenceMetrics m = convergence_metrics(traj, ch.wave);
    CHECK(m.final_distance < 1e-4);
    CHECK(m.verdict == Verdict::Converging);
}

TEST_CASE("perturbed stable-state wave relaxes back", "[cauchy][slow]") {
    const ModelParams p = pset_c();
    const EstarChain ch = build_estar_chain(p, 1.0, default_shift(0.5));
    const WaveSolution& wave = ch.wave;
    std::mt19937_64 rng(2718u);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    std::array<std::vector<double>, 3> ic = wave.phi;
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 1; i + 1 < ic[c].size(); ++i)
            ic[c][i] = std::max(0.0, ic[c][i] * (1.0 + noise(rng)));
    SimConfig cfg;
    cfg.t_end = 200.0;
    cfg.snapshot_every = 10.0;
    const Trajectory traj = simulate(p, 1.0, ch.pair.shift, ic, wave.grid, cfg);
    const ConvergenceMetrics m = convergence_metrics(traj, wave);
    CHECK(m.verdict == Verdict::Converging);
    CHECK(m.final_distance < 1e-3);
}

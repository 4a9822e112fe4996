#include <catch2/catch.hpp>

#include <cmath>

#include "psets.hpp"
#include "shiftwave/chain.hpp"

using namespace shiftwave;
using swtest::default_shift;
using swtest::pset_c;

TEST_CASE("stable-state chain at unit speed", "[chain]") {
    const ModelParams p = pset_c();
    const EstarChain ch = build_estar_chain(p, 1.0, default_shift(0.5));
    CHECK(ch.gamma2 == Approx(0.4).margin(1e-14));
    CHECK(ch.gamma3 == Approx(0.2).margin(1e-13));
    CHECK(ch.lower_v.residual_sup <= 1e-10);
    CHECK(ch.lower_w.residual_sup <= 1e-10);
    CHECK(ch.lower_v.subsolution_margin >= -1e-10);
    CHECK(ch.lower_w.subsolution_margin >= -1e-10);
    REQUIRE(ch.wave.converged);
    CHECK(ch.reaches_invaded);
    CHECK(ch.left_state_error < 1e-4);
    CHECK(ch.wave.left_end().dist({0.0, 1.02 / 1.06, 2.0 / 1.06}) < 1e-4);
    CHECK(ch.wave.right_end().norm() < 1e-6);
    CHECK(ch.wave.fully_sandwiched());
}

TEST_CASE("chain pair passes the relaxed residual verification", "[chain]") {
    const ModelParams p = pset_c();
    const EstarChain ch = build_estar_chain(p, 1.0, default_shift(0.5));
    // sampled lower profiles: interpolated derivatives, relaxed tolerance
    const std::vector<double> grid = Grid::make(ch.wave.grid.L, 32001).positions();
    const VerificationReport rep = verify_pair(ch.pair, ch.pair.shift, p, grid, 1e-6);
    INFO(rep.first_failure);
    CHECK(rep.pass);
}

TEST_CASE("chain runs at any positive speed", "[chain][slow]") {
    const ModelParams p = pset_c();
    for (double s : {0.5, 2.0}) {
        const EstarChain ch = build_estar_chain(p, s, default_shift(0.5));
        INFO("s = " << s);
        CHECK(ch.gamma2 == Approx(0.4).margin(1e-14));
        CHECK(ch.left_state_error < 1e-4);
        CHECK(ch.wave.fully_sandwiched());
    }
}

TEST_CASE("excessive predation rejects the chain before any solve", "[chain]") {
    ModelParams p = pset_c();
    p.b = 0.05; // above 1/30
    try {
        build_estar_chain(p, 1.0, default_shift(0.5));
        FAIL("expected a hypothesis violation");
    } catch (const HypothesisViolation& e) {
        CHECK(e.condition() == "predation-weakness");
    }
}

TEST_CASE("strong competition wipes out the weak prey", "[chain]") {
    ModelParams p = pset_c();
    p.k = 20.0;
    const EstarChain ch = build_estar_chain(p, 1.0, default_shift(0.5));
    const SignConditionReport sign =
        weak_prey_exclusion_condition(p, ch.pair, ch.wave.grid);
    CHECK(sign.holds);
    CHECK(sign.worst < 0.0);
    CHECK(ch.sup_u <= 1e-8);
}

TEST_CASE("baseline competition leaves a favorable window", "[chain]") {
    const ModelParams p = pset_c(); // k = 1.5
    const EstarChain ch = build_estar_chain(p, 1.0, default_shift(0.5));
    const SignConditionReport sign =
        weak_prey_exclusion_condition(p, ch.pair, ch.wave.grid);
    CHECK_FALSE(sign.holds);
    CHECK(sign.worst > 0.0);
    // the violating window sits left of the habitat edge
    CHECK(sign.worst_z < ch.pair.shift.offset + ch.pair.shift.K);
}

#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "psets.hpp"
#include "shiftwave/bounds.hpp"

using namespace shiftwave;
using swtest::default_shift;
using swtest::pset_a;
using swtest::pset_b;

namespace {

const double kE = std::exp(1.0);

// independent evaluation of the critical-case amplitude bound
double critical_amp_oracle(double r, double d, double B, double eps, double coupling) {
    return 4.0 * r * (B / d) *
           (eps * std::pow(5.0 / (2.0 * B), 2.5) + coupling * B * std::pow(7.0 / (2.0 * B), 3.5));
}

} // namespace

TEST_CASE("supercritical eu constants", "[bounds]") {
    const ModelParams p = pset_a();
    const BoundPair pair =
        build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const BoundConstants& c = pair.constants;
    CHECK(c.lambda1 == Approx(0.5).epsilon(1e-12));
    CHECK(c.lambda2 == Approx(2.0).epsilon(1e-12));
    CHECK(c.mu1 == Approx(0.75).epsilon(1e-12)); // midpoint of (0.5, min(2, 1))
    CHECK(char_poly(p, 2.5, CharPoly::A1, c.mu1) == Approx(-0.3125).epsilon(1e-12));
    CHECK(c.epsilon == Approx(0.01));
    CHECK(c.q1_lb == Approx(2.0 * 1.31 / 0.3125).epsilon(1e-12)); // = 8.384
    CHECK(c.q1 == Approx(8.8032).epsilon(1e-12));
    CHECK(c.z1 == Approx(-std::log(c.q1) / 0.25).epsilon(1e-12));
    CHECK(c.z1 == Approx(-8.70).margin(0.01));
    // z1 solves e^(lambda1 z) = q1 e^(mu1 z)
    CHECK(std::exp(c.lambda1 * c.z1) ==
          Approx(c.q1 * std::exp(c.mu1 * c.z1)).epsilon(1e-12));
    CHECK(c.M == Approx(std::log(2.0 / 0.01) / 0.5).epsilon(1e-12));
    CHECK(pair.invaded_state.u == 1.0);
}

TEST_CASE("critical eu constants", "[bounds]") {
    const ModelParams p = pset_a();
    BoundOptions opt;
    opt.epsilon = 0.05;
    const BoundPair pair =
        build_bounds(p, 2.0, default_shift(1.0), BoundScenario::EuCritical, opt);
    const BoundConstants& c = pair.constants;
    CHECK(c.lambda_u == Approx(1.0).epsilon(1e-12));
    CHECK(c.B0 == Approx(kE).epsilon(1e-12));
    CHECK(c.z_u == Approx(-1.0).epsilon(1e-12));
    const double lb = critical_amp_oracle(p.r2, p.d, kE, 0.05, 1.0 + p.b * 3.0);
    CHECK(c.q3_lb == Approx(lb).epsilon(1e-12));
    CHECK(c.q3_lb == Approx(187.0).epsilon(5e-3)); // ~1.87e2
    CHECK(c.q3_lb > kE * std::sqrt(c.lambda_u));
    CHECK(c.z3 == Approx(-(c.q3 / c.B0) * (c.q3 / c.B0)).epsilon(1e-12));
    CHECK(c.z3 < c.z_u);
    CHECK(c.z4 < c.z_u);
}

TEST_CASE("supercritical estar constants", "[bounds]") {
    const ModelParams p = pset_b();
    const BoundPair pair =
        build_bounds(p, 2.5, default_shift(1.5), BoundScenario::EstarSuper);
    const BoundConstants& c = pair.constants;
    CHECK(c.lambda3 == Approx(0.816987).epsilon(1e-6));
    CHECK(c.lambda4 == Approx(1.683013).epsilon(1e-6));
    CHECK(c.nu1 == Approx(0.5 * (c.lambda3 + std::min(c.lambda4, 2.0 * c.lambda3)))
                       .epsilon(1e-12));
    CHECK(c.nu1 == Approx(1.225).margin(5e-4));
    const double nA = -char_poly(p, 2.5, CharPoly::A2, c.nu1);
    REQUIRE(nA > 0.0);
    CHECK(c.eta1 == Approx(1.05 * std::max(1.0, 3.0 * 1.31 / nA)).epsilon(1e-12));
    const SteadyStates ss = steady_states(p);
    CHECK(c.B1 == Approx(2.0 * p.a - 1.0 - ss.w_p).epsilon(1e-12));
    CHECK(pair.invaded_state.u == Approx(ss.u_p));
    CHECK(pair.invaded_state.w == Approx(ss.w_p));
}

TEST_CASE("profiles are continuous across their kinks", "[bounds]") {
    struct Run {
        ModelParams p;
        double s;
        double rho;
        BoundScenario sc;
    };
    const CriticalSpeeds cb = critical_speeds(pset_b());
    const std::vector<Run> runs{{pset_a(), 2.5, 0.5, BoundScenario::EuSuper},
                                {pset_a(), 2.0, 1.0, BoundScenario::EuCritical},
                                {pset_b(), 2.5, 1.5, BoundScenario::EstarSuper},
                                {pset_b(), cb.s2_dstar, 1.5, BoundScenario::EstarCritical}};
    for (const Run& r : runs) {
        const BoundPair pair = build_bounds(r.p, r.s, default_shift(r.rho), r.sc);
        for (const auto& profs : {pair.upper, pair.lower}) {
            for (const auto& prof : profs) {
                for (double bp : prof.breakpoints()) {
                    const double l = prof.eval_side(bp, 0, Side::Left);
                    const double rv = prof.eval_side(bp, 0, Side::Right);
                    CHECK(std::abs(l - rv) < 1e-12);
                    CHECK(prof(bp) == Approx(rv).margin(1e-12));
                }
            }
        }
    }
}

TEST_CASE("one-sided derivatives at the upper prey kink", "[bounds]") {
    const BoundPair pair =
        build_bounds(pset_a(), 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const PiecewiseProfile& up2 = pair.upper[1];
    CHECK(up2(0.0) == Approx(1.0));
    CHECK(up2.eval_side(0.0, 1, Side::Left) == Approx(0.5).epsilon(1e-12));
    CHECK(up2.eval_side(0.0, 1, Side::Right) == 0.0);
}

TEST_CASE("critical lower predator profile vanishes at its kink", "[bounds]") {
    const BoundPair pair =
        build_bounds(pset_a(), 2.0, default_shift(1.0), BoundScenario::EuCritical);
    const double z4 = pair.constants.z4;
    CHECK(pair.lower[2].eval_side(z4, 0, Side::Left) == Approx(0.0).margin(1e-12));
    CHECK(pair.lower[2].eval_side(z4, 0, Side::Right) == 0.0);
}

TEST_CASE("upper resident residual has the closed-form sign", "[bounds]") {
    const ModelParams p = pset_a();
    const BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const std::vector<double> grid{-25.0, -9.3, -3.0, 0.7, 4.0, 20.0};
    const ResidualReport rep = bound_residuals(pair, pair.shift, p, grid);
    // U1 = r1 (alpha - k lo2 - b lo3) <= r1 alpha < 0 wherever the uppers are flat
    const auto& u1 = rep.entries[0];
    CHECK(u1.pass);
    CHECK(u1.worst < 0.0);
    for (double z : grid) {
        const double direct = p.r1 * (pair.shift(z) - p.k * pair.lower[1](z) -
                                      p.b * pair.lower[2](z));
        CHECK(direct <= p.r1 * pair.shift(z));
        CHECK(direct < 0.0);
    }
}

TEST_CASE("lower residuals vanish where the lower profiles are zero", "[bounds]") {
    const ModelParams p = pset_a();
    const BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    // right of every kink all three lower profiles are identically zero
    const std::vector<double> grid{1.0, 5.0, 17.0, 42.0};
    const ResidualReport rep = bound_residuals(pair, pair.shift, p, grid);
    for (int i = 3; i < 6; ++i) {
        CHECK(rep.entries[static_cast<std::size_t>(i)].worst == 0.0);
        CHECK(rep.entries[static_cast<std::size_t>(i)].pass);
    }
}

TEST_CASE("full verification passes on the default grids", "[bounds][acceptance-mirror]") {
    struct Run {
        ModelParams p;
        double s;
        double rho;
        BoundScenario sc;
    };
    const CriticalSpeeds cb = critical_speeds(pset_b());
    const std::vector<Run> runs{{pset_a(), 2.5, 0.5, BoundScenario::EuSuper},
                                {pset_a(), 2.0, 1.0, BoundScenario::EuCritical},
                                {pset_b(), 2.5, 1.5, BoundScenario::EstarSuper},
                                {pset_b(), cb.s2_dstar, 1.5, BoundScenario::EstarCritical}};
    for (const Run& r : runs) {
        const BoundPair pair = build_bounds(r.p, r.s, default_shift(r.rho), r.sc);
        const VerificationReport rep = verify_pair(pair, r.p);
        INFO(bound_scenario_name(r.sc) << ": " << rep.first_failure);
        CHECK(rep.pass);
        CHECK(rep.residuals.pass);
        CHECK(rep.order_pass);
        CHECK(rep.kinks_pass);
        CHECK(rep.limits_pass);
        CHECK(rep.envelope_pass);
    }
}

TEST_CASE("forcing the strong-prey amplitude below its bound breaks L2", "[bounds]") {
    const ModelParams p = pset_a();
    BoundOptions opt;
    opt.q1 = 1.01;
    const BoundPair pair =
        build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper, opt);
    const VerificationReport rep = verify_pair(pair, p);
    CHECK_FALSE(rep.pass);
    const ResidualEntry& l2 = rep.residuals.entries[4];
    CHECK_FALSE(l2.pass);
    CHECK(l2.worst < -1e-6);
    CHECK(l2.worst_z < pair.constants.z1);
}

TEST_CASE("swapping the triples breaks the ordering check", "[bounds]") {
    const ModelParams p = pset_a();
    BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    std::swap(pair.upper, pair.lower);
    const VerificationReport rep = verify_pair(pair, p);
    CHECK_FALSE(rep.order_pass);
}

TEST_CASE("limits approach the invaded state", "[bounds]") {
    const ModelParams pb = pset_b();
    const SteadyStates ss = steady_states(pb);
    const BoundPair pair = build_bounds(pb, 2.5, default_shift(1.5), BoundScenario::EstarSuper);
    for (int i = 0; i < 3; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const double target = i == 0 ? ss.u_p : (i == 1 ? 0.0 : ss.w_p);
        CHECK(pair.upper[iu].limit_left() == Approx(target).margin(1e-14));
        CHECK(pair.lower[iu].limit_left() == Approx(target).margin(1e-14));
        CHECK(std::abs(pair.upper[iu](-60.0) - target) < 1e-10 + 60.0 * std::exp(-0.8 * 60.0));
    }
}

TEST_CASE("speed regime and hypothesis errors", "[bounds]") {
    const ModelParams p = pset_a();
    CHECK_THROWS_AS(build_bounds(p, 2.0, default_shift(1.0), BoundScenario::EuSuper),
                    SpeedRegimeMismatch);
    CHECK_THROWS_AS(build_bounds(p, 2.5, default_shift(1.0), BoundScenario::EuCritical),
                    SpeedRegimeMismatch);
    ModelParams bad = p;
    bad.r1 = 2.0;
    try {
        build_bounds(bad, 2.5, default_shift(0.5), BoundScenario::EuSuper);
        FAIL("expected a hypothesis violation");
    } catch (const HypothesisViolation& e) {
        CHECK(e.condition() == "prey1-margin");
    }
    // speed below threshold
    CHECK_THROWS_AS(build_bounds(p, 1.9, default_shift(0.5), BoundScenario::EuSuper),
                    HypothesisViolation);
    // epsilon outside its window
    BoundOptions opt;
    opt.epsilon = 0.25;
    CHECK_THROWS_AS(build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper, opt),
                    HypothesisViolation);
}

TEST_CASE("amplitude lower bounds grow with epsilon", "[bounds][property]") {
    const ModelParams p = pset_a();
    double prev_q1 = 0.0, prev_q3 = 0.0;
    for (double eps : {0.002, 0.01, 0.05, 0.1}) {
        BoundOptions opt;
        opt.epsilon = eps;
        const BoundPair sup =
            build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper, opt);
        const BoundPair crit =
            build_bounds(p, 2.0, default_shift(1.0), BoundScenario::EuCritical, opt);
        CHECK(sup.constants.q1_lb >= prev_q1);
        CHECK(crit.constants.q3_lb >= prev_q3);
        prev_q1 = sup.constants.q1_lb;
        prev_q3 = crit.constants.q3_lb;
    }
}

TEST_CASE("randomized hypothesis-region sweep verifies everywhere", "[bounds][property]") {
    std::mt19937_64 rng(20250101u);
    std::uniform_real_distribution<double> hd(0.25, 0.75);
    std::uniform_real_distribution<double> ad(1.3, 2.6);
    std::uniform_real_distribution<double> rd(0.5, 1.6);
    std::uniform_real_distribution<double> speedup(1.05, 1.8);
    int eu_done = 0, estar_done = 0, eu_crit_done = 0;
    for (int it = 0; it < 200 && (eu_done < 6 || estar_done < 6 || eu_crit_done < 3); ++it) {
        ModelParams p;
        p.d = 1.0;
        p.h = hd(rng);
        p.a = ad(rng);
        p.r3 = rd(rng);
        p.r2 = p.r3 * (p.a - 1.0) / (1.0 - p.h); // equal invasion speeds
        p.k = 1.0 + 0.4 * hd(rng);
        p.b = 0.05 * hd(rng);
        p.r1 = 0.5 * p.r3 * (p.a - 1.0) / (p.k + p.b * (2.0 * p.a - 1.0) - 1.0);
        const CriticalSpeeds cs = critical_speeds(p);

        if (eu_done < 6 && check_hypotheses(p, cs.s3_star * 1.3, Scenario::Eu).all_pass()) {
            const double s = cs.s3_star * speedup(rng);
            const ShiftProfile sh = make_sigmoid(2.0, cs.lambda_u * 1.2);
            const BoundPair pair = build_bounds(p, s, sh, BoundScenario::EuSuper);
            const VerificationReport rep = verify_pair(pair, p);
            INFO("eu-super draw " << it << ": " << rep.first_failure);
            CHECK(rep.pass);
            ++eu_done;
        }
        if (eu_crit_done < 3 && check_hypotheses(p, cs.s3_star, Scenario::Eu).all_pass()) {
            const ShiftProfile sh = make_sigmoid(2.0, cs.lambda_u * 1.5);
            const BoundPair pair = build_bounds(p, cs.s3_star, sh, BoundScenario::EuCritical);
            const VerificationReport rep = verify_pair(pair, p);
            INFO("eu-critical draw " << it << ": " << rep.first_failure);
            CHECK(rep.pass);
            ++eu_crit_done;
        }
        // independent family for the coexistence-invasion scenario
        ModelParams q;
        q.d = 1.0;
        q.h = hd(rng);
        q.a = ad(rng);
        q.b = 0.05 * hd(rng);
        q.k = 1.0 + 0.4 * hd(rng);
        q.r1 = rd(rng);
        q.r3 = rd(rng);
        const double beta = (1.0 - q.h) * (1.0 + q.b) / (1.0 + q.a * q.b);
        const double need =
            std::max(q.r1 * ((q.k - 1.0) + q.b * (2.0 * q.a - 1.0)), q.r3);
        q.r2 = 1.4 * need / beta;
        if (estar_done < 6 && check_hypotheses(q, 100.0, Scenario::Estar).all_pass()) {
            const CriticalSpeeds cq = critical_speeds(q);
            const double s = cq.s2_dstar * speedup(rng);
            const ShiftProfile sh = make_sigmoid(2.0, cq.lambda_star * 1.2);
            const BoundPair pair = build_bounds(q, s, sh, BoundScenario::EstarSuper);
            const VerificationReport rep = verify_pair(pair, q);
            INFO("estar-super draw " << it << ": " << rep.first_failure);
            CHECK(rep.pass);
            const BoundPair crit =
                build_bounds(q, cq.s2_dstar, sh, BoundScenario::EstarCritical);
            const VerificationReport crep = verify_pair(crit, q);
            INFO("estar-critical draw " << it << ": " << crep.first_failure);
            CHECK(crep.pass);
            ++estar_done;
        }
    }
    CHECK(eu_done >= 6);
    CHECK(estar_done >= 6);
    CHECK(eu_crit_done >= 3);
}

TEST_CASE("default constants respect their structural invariants", "[bounds]") {
    const CriticalSpeeds cb = critical_speeds(pset_b());
    struct Run {
        ModelParams p;
        double s;
        double rho;
        BoundScenario sc;
    };
    const std::vector<Run> runs{{pset_a(), 2.5, 0.5, BoundScenario::EuSuper},
                                {pset_a(), 2.0, 1.0, BoundScenario::EuCritical},
                                {pset_b(), 2.5, 1.5, BoundScenario::EstarSuper},
                                {pset_b(), cb.s2_dstar, 1.5, BoundScenario::EstarCritical}};
    for (const Run& r : runs) {
        const BoundPair pair = build_bounds(r.p, r.s, default_shift(r.rho), r.sc);
        const BoundConstants& c = pair.constants;
        // amplitudes strictly above their analytic lower bounds
        for (auto [v, lb] : {std::pair{c.q1, c.q1_lb}, {c.q2, c.q2_lb}, {c.q3, c.q3_lb},
                             {c.q4, c.q4_lb}, {c.eta1, c.eta1_lb}, {c.eta2, c.eta2_lb}}) {
            if (lb > 0.0) CHECK(v > lb);
        }
        // auxiliary rates strictly inside their admissible intervals
        if (c.mu1 > 0.0) {
            CHECK(c.mu1 > c.lambda1);
            CHECK(c.mu1 < std::min(c.lambda2, 2.0 * c.lambda1));
        }
        if (c.nu1 > 0.0) {
            CHECK(c.nu1 > c.lambda3);
            CHECK(c.nu1 < std::min(c.lambda4, 2.0 * c.lambda3));
        }
        // critical-case kinks sit left of the double-root kink
        if (r.sc == BoundScenario::EuCritical) {
            CHECK(c.z3 < c.z_u);
            CHECK(c.z4 < c.z_u);
        }
        if (r.sc == BoundScenario::EstarCritical) CHECK(c.z6 < c.z_star);
        // profiles are nonnegative over the verification grid
        for (double z : build_verification_grid(pair)) {
            for (const auto& prof : pair.upper) CHECK(prof(z) >= 0.0);
            for (const auto& prof : pair.lower) CHECK(prof(z) >= -0.0);
        }
    }
}

TEST_CASE("grid points must avoid the kink set", "[bounds]") {
    const ModelParams p = pset_a();
    const BoundPair pair = build_bounds(p, 2.5, default_shift(0.5), BoundScenario::EuSuper);
    const std::vector<double> bad{-3.0, pair.constants.z1 + 1e-9, 4.0};
    CHECK_THROWS_AS(bound_residuals(pair, pair.shift, p, bad), GridTouchesBreakpoint);
}

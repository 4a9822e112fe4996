/*
 * Generalized upper/lower-solution pairs for the wave system
 *
 *   d phi_i'' - s phi_i' + F_i(z, phi) = 0,
 *
 * built in closed form for the four scenarios below and verified on a grid:
 * six cross-coupled differential inequalities (each upper residual uses the
 * lower profiles of the other species and vice versa, except the predator
 * residuals which use the preys' own side), the pointwise ordering, and the
 * one-sided derivative (kink) conditions at the finitely many breakpoints.
 *
 * Scenarios: invaded state (1,0,0) ("eu") or (u_p,0,w_p) ("estar"), each at
 * supercritical speed (two distinct decay roots) or exactly at the critical
 * speed (double root, profiles pick up z e^(lz) and sqrt(|z|) e^(lz) terms).
 * The stable-state pair, whose lower profiles are numeric scalar waves, is
 * assembled in chain.hpp and verified through the same machinery.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "shiftwave/errors.hpp"
#include "shiftwave/model.hpp"
#include "shiftwave/profile.hpp"
#include "shiftwave/shift.hpp"

namespace shiftwave {

enum class BoundScenario { EuSuper, EuCritical, EstarSuper, EstarCritical, EstarChain };

inline std::string bound_scenario_name(BoundScenario sc) {
    switch (sc) {
        case BoundScenario::EuSuper: return "eu-super";
        case BoundScenario::EuCritical: return "eu-critical";
        case BoundScenario::EstarSuper: return "estar-super";
        case BoundScenario::EstarCritical: return "estar-critical";
        case BoundScenario::EstarChain: return "estar-chain";
    }
    return "?";
}

inline BoundScenario parse_bound_scenario(const std::string& tag) {
    for (BoundScenario sc : {BoundScenario::EuSuper, BoundScenario::EuCritical,
                             BoundScenario::EstarSuper, BoundScenario::EstarCritical,
                             BoundScenario::EstarChain})
        if (tag == bound_scenario_name(sc)) return sc;
    throw ConfigError("unknown bound scenario '" + tag + "'");
}

// pick the speed regime for an invaded state from s itself
inline BoundScenario bound_scenario_for(const ModelParams& p, double s, Scenario invaded,
                                        double eq_rtol = 1e-9) {
    const CriticalSpeeds cs = critical_speeds(p);
    switch (invaded) {
        case Scenario::Eu:
            return std::abs(s - cs.s3_star) <= eq_rtol * cs.s3_star ? BoundScenario::EuCritical
                                                                    : BoundScenario::EuSuper;
        case Scenario::Estar:
            return std::abs(s - cs.s2_dstar) <= eq_rtol * cs.s2_dstar
                       ? BoundScenario::EstarCritical
                       : BoundScenario::EstarSuper;
        case Scenario::Estable:
            return BoundScenario::EstarChain;
        default:
            throw ConfigError("no bound construction for this scenario");
    }
}

struct BoundConstants {
    double s = 0.0;       // construction speed
    double epsilon = 0.0; // working epsilon fed to the translation and amplitudes
    double epsilon_max = 0.0;
    double rho_env = 0.0; // envelope rate the translation was normalized for
    double M = 0.0;       // translation applied to the shift
    double slack = 1.05;  // amplitude = slack * analytic lower bound

    // decay roots
    double lambda1 = 0.0, lambda2 = 0.0; // roots of A1 (supercritical eu)
    double lambda3 = 0.0, lambda4 = 0.0; // roots of A2 (supercritical estar)
    double lambda_u = 0.0, lambda_star = 0.0;

    // auxiliary rates and amplitudes with their lower bounds
    double mu1 = 0.0, mu2 = 0.0, nu1 = 0.0;
    double q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0, eta1 = 0.0, eta2 = 0.0;
    double q1_lb = 0.0, q2_lb = 0.0, q3_lb = 0.0, q4_lb = 0.0, eta1_lb = 0.0, eta2_lb = 0.0;

    double B0 = 0.0, B1 = 0.0, B2 = 0.0;
    double z1 = 0.0, z2 = 0.0, z3 = 0.0, z4 = 0.0, z5 = 0.0, z6 = 0.0;
    double z_u = 0.0, z_star = 0.0;

    // stable-state chain extras
    double gamma2 = 0.0, gamma3 = 0.0, lambda0_v = 0.0, lambda0_w = 0.0;
};

struct BoundPair {
    BoundScenario scenario = BoundScenario::EuSuper;
    std::array<PiecewiseProfile, 3> upper;
    std::array<PiecewiseProfile, 3> lower;
    BoundConstants constants;
    Triple invaded_state;
    ShiftProfile shift; // normalized copy used for construction

    std::vector<double> all_breakpoints() const {
        std::vector<double> b;
        for (const auto& p : upper) b.insert(b.end(), p.breakpoints().begin(), p.breakpoints().end());
        for (const auto& p : lower) b.insert(b.end(), p.breakpoints().begin(), p.breakpoints().end());
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }
};

struct BoundOptions {
    double slack = 1.05;
    double epsilon = 0.0; // 0: use min(0.01, epsilon_max/2)
    double eq_rtol = 1e-9;
    // overrides, 0 means "use the default"; amplitudes may be forced below
    // their bounds deliberately (sharpness probes)
    double mu1 = 0.0, mu2 = 0.0, nu1 = 0.0;
    double q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0, eta1 = 0.0, eta2 = 0.0;
};

namespace detail {

inline double midpoint_rate(double lo, double hi_a, double hi_b) {
    return 0.5 * (lo + std::min(hi_a, hi_b));
}

inline void check_aux_rate(const char* name, double value, double lo, double hi) {
    if (!(value > lo) || !(value < hi))
        throw ConfigError(std::string(name) + " must lie strictly inside (" +
                          std::to_string(lo) + ", " + std::to_string(hi) + ")");
}

// critical-case amplitude bound shared by q3, q4 and eta2
inline double critical_amp_bound(double r, double d, double B, double eps, double coupling) {
    const double t5 = std::pow(5.0 / (2.0 * B), 2.5);
    const double t7 = std::pow(7.0 / (2.0 * B), 3.5);
    return 4.0 * r * (B / d) * (eps * t5 + coupling * B * t7);
}

inline PiecewiseProfile one_kink(double bp, ProfilePiece left, ProfilePiece right) {
    return PiecewiseProfile::closed_form({bp}, {std::move(left), std::move(right)});
}

} // namespace detail

/*
 * Build the scenario's bound pair.  The shift is normalized internally for
 * the scenario's envelope rate and chosen epsilon; the translated copy is
 * stored in the result.  Amplitude constants default to slack * their lower
 * bounds, auxiliary rates to interval midpoints.
 */
inline BoundPair build_bounds(const ModelParams& p, double s, const ShiftProfile& shift_in,
                              BoundScenario scenario, const BoundOptions& opt = {}) {
    p.validate();
    const SteadyStates ss = steady_states(p);
    const CriticalSpeeds cs = critical_speeds(p);
    const bool eu =
        scenario == BoundScenario::EuSuper || scenario == BoundScenario::EuCritical;
    const bool critical =
        scenario == BoundScenario::EuCritical || scenario == BoundScenario::EstarCritical;
    if (scenario == BoundScenario::EstarChain)
        throw ConfigError("the stable-state pair is assembled by build_estar_chain");

    const HypothesisReport rep =
        check_hypotheses(p, s, eu ? Scenario::Eu : Scenario::Estar, shift_in.rho, opt.eq_rtol);
    if (!rep.all_pass()) {
        const ConditionCheck* fail = rep.first_failure();
        throw HypothesisViolation(fail->name, fail->detail);
    }
    if (critical != rep.critical)
        throw SpeedRegimeMismatch(
            critical ? "critical construction requested away from the minimal speed"
                     : "supercritical construction requested at the minimal speed");

    BoundConstants c;
    c.s = s;
    c.slack = opt.slack;
    c.epsilon_max = *rep.epsilon_max;
    c.epsilon = opt.epsilon > 0.0 ? opt.epsilon : default_epsilon(c.epsilon_max);
    if (!(c.epsilon < c.epsilon_max))
        throw HypothesisViolation("epsilon-window",
                                  "epsilon must stay below " + std::to_string(c.epsilon_max));
    c.lambda_u = cs.lambda_u;
    c.lambda_star = cs.lambda_star;
    c.z_u = -1.0 / cs.lambda_u;
    c.z_star = -1.0 / cs.lambda_star;

    const double a = p.a, b = p.b;
    const double P3 = 2.0 * a - 1.0; // predator cap
    c.B1 = P3 - ss.w_p;

    auto amp = [&](double override_v, double lb) {
        return override_v > 0.0 ? override_v : opt.slack * lb;
    };

    BoundPair pair;
    pair.scenario = scenario;

    switch (scenario) {
        case BoundScenario::EuSuper: {
            const RootInfo roots = characteristic_roots(p, s, CharPoly::A1, opt.eq_rtol);
            c.lambda1 = roots.lambda_small;
            c.lambda2 = roots.lambda_large;
            c.rho_env = c.lambda1;
            const double hi = std::min(c.lambda2, 2.0 * c.lambda1);
            c.mu1 = opt.mu1 > 0.0 ? opt.mu1 : detail::midpoint_rate(c.lambda1, c.lambda2, 2.0 * c.lambda1);
            c.mu2 = opt.mu2 > 0.0 ? opt.mu2 : c.mu1;
            detail::check_aux_rate("mu1", c.mu1, c.lambda1, hi);
            detail::check_aux_rate("mu2", c.mu2, c.lambda1, hi);
            const double nA1 = -char_poly(p, s, CharPoly::A1, c.mu1);
            const double nA2 = -char_poly(p, s, CharPoly::A1, c.mu2);
            c.q1_lb = std::max(1.0, p.r2 * (c.epsilon + 1.0 + b * P3) / nA1);
            c.q2_lb = std::max(P3, p.r3 * P3 * (c.epsilon + 3.0 * a - 1.0) / nA2);
            c.q1 = amp(opt.q1, c.q1_lb);
            c.q2 = amp(opt.q2, c.q2_lb);
            c.z1 = -std::log(c.q1) / (c.mu1 - c.lambda1);
            c.z2 = -std::log(c.q2 / P3) / (c.mu2 - c.lambda1);

            pair.upper[0] = PiecewiseProfile::constant(1.0);
            pair.lower[0] = detail::one_kink(0.0, {{{1.0, 0, 0}, {-1.0, 0, c.lambda1}}}, {});
            pair.upper[1] = detail::one_kink(0.0, {{{1.0, 0, c.lambda1}}}, {{{1.0, 0, 0}}});
            pair.lower[1] =
                detail::one_kink(c.z1, {{{1.0, 0, c.lambda1}, {-c.q1, 0, c.mu1}}}, {});
            pair.upper[2] = detail::one_kink(0.0, {{{P3, 0, c.lambda1}}}, {{{P3, 0, 0}}});
            pair.lower[2] =
                detail::one_kink(c.z2, {{{P3, 0, c.lambda1}, {-c.q2, 0, c.mu2}}}, {});
            pair.invaded_state = ss.E_u;
            break;
        }
        case BoundScenario::EuCritical: {
            const double lam = cs.lambda_u;
            c.rho_env = lam;
            c.B0 = lam * std::exp(1.0);
            c.q3_lb = std::max(std::exp(1.0) * std::sqrt(lam),
                               detail::critical_amp_bound(p.r2, p.d, c.B0, c.epsilon,
                                                          1.0 + b * P3));
            c.q4_lb = std::max(P3 * std::exp(1.0) * std::sqrt(lam),
                               detail::critical_amp_bound(p.r3, p.d, c.B0, c.epsilon, a + 1.0));
            c.q3 = amp(opt.q3, c.q3_lb);
            c.q4 = amp(opt.q4, c.q4_lb);
            c.z3 = -(c.q3 / c.B0) * (c.q3 / c.B0);
            c.z4 = -(c.q4 / c.B0) * (c.q4 / c.B0);

            pair.upper[0] = PiecewiseProfile::constant(1.0);
            pair.lower[0] = detail::one_kink(c.z_u, {{{1.0, 0, 0}, {-c.B0, 1, lam}}}, {});
            pair.upper[1] = detail::one_kink(c.z_u, {{{c.B0, 1, lam}}}, {{{1.0, 0, 0}}});
            pair.lower[1] =
                detail::one_kink(c.z3, {{{c.B0, 1, lam}, {-c.q3, 0.5, lam}}}, {});
            pair.upper[2] = detail::one_kink(c.z_u, {{{P3 * c.B0, 1, lam}}}, {{{P3, 0, 0}}});
            pair.lower[2] = detail::one_kink(
                c.z4, {{{P3 * c.B0, 1, lam}, {-P3 * c.q4, 0.5, lam}}}, {});
            pair.invaded_state = ss.E_u;
            break;
        }
        case BoundScenario::EstarSuper: {
            const RootInfo roots = characteristic_roots(p, s, CharPoly::A2, opt.eq_rtol);
            c.lambda3 = roots.lambda_small;
            c.lambda4 = roots.lambda_large;
            c.rho_env = c.lambda3;
            const double hi = std::min(c.lambda4, 2.0 * c.lambda3);
            c.nu1 = opt.nu1 > 0.0 ? opt.nu1 : detail::midpoint_rate(c.lambda3, c.lambda4, 2.0 * c.lambda3);
            detail::check_aux_rate("nu1", c.nu1, c.lambda3, hi);
            const double nA = -char_poly(p, s, CharPoly::A2, c.nu1);
            c.eta1_lb = std::max(1.0, p.r2 * (c.epsilon + 1.0 + b * P3) / nA);
            c.eta1 = amp(opt.eta1, c.eta1_lb);
            c.z5 = -std::log(c.eta1) / (c.nu1 - c.lambda3);

            const double l3 = c.lambda3;
            pair.upper[0] = detail::one_kink(0.0, {{{ss.u_p, 0, 0}, {b * ss.w_p, 0, l3}}},
                                             {{{1.0, 0, 0}}});
            pair.lower[0] =
                detail::one_kink(0.0, {{{ss.u_p, 0, 0}, {-ss.u_p, 0, l3}}}, {});
            pair.upper[1] = detail::one_kink(0.0, {{{1.0, 0, l3}}}, {{{1.0, 0, 0}}});
            pair.lower[1] =
                detail::one_kink(c.z5, {{{1.0, 0, l3}, {-c.eta1, 0, c.nu1}}}, {});
            pair.upper[2] = detail::one_kink(0.0, {{{ss.w_p, 0, 0}, {c.B1, 0, l3}}},
                                             {{{P3, 0, 0}}});
            pair.lower[2] =
                detail::one_kink(0.0, {{{ss.w_p, 0, 0}, {-ss.w_p, 0, l3}}}, {});
            pair.invaded_state = ss.E_star_up;
            break;
        }
        case BoundScenario::EstarCritical: {
            const double lam = cs.lambda_star;
            c.rho_env = lam;
            c.B2 = lam * std::exp(1.0);
            c.eta2_lb = std::max(std::exp(1.0) * std::sqrt(lam),
                                 detail::critical_amp_bound(p.r2, p.d, c.B2, c.epsilon,
                                                            1.0 + b * P3));
            c.eta2 = amp(opt.eta2, c.eta2_lb);
            c.z6 = -(c.eta2 / c.B2) * (c.eta2 / c.B2);

            pair.upper[0] = detail::one_kink(
                c.z_star, {{{ss.u_p, 0, 0}, {b * ss.w_p * c.B2, 1, lam}}}, {{{1.0, 0, 0}}});
            pair.lower[0] = detail::one_kink(
                c.z_star, {{{ss.u_p, 0, 0}, {-ss.u_p * c.B2, 1, lam}}}, {});
            pair.upper[1] =
                detail::one_kink(c.z_star, {{{c.B2, 1, lam}}}, {{{1.0, 0, 0}}});
            pair.lower[1] =
                detail::one_kink(c.z6, {{{c.B2, 1, lam}, {-c.eta2, 0.5, lam}}}, {});
            pair.upper[2] = detail::one_kink(
                c.z_star, {{{ss.w_p, 0, 0}, {c.B1 * c.B2, 1, lam}}}, {{{P3, 0, 0}}});
            pair.lower[2] = detail::one_kink(
                c.z_star, {{{ss.w_p, 0, 0}, {-ss.w_p * c.B2, 1, lam}}}, {});
            pair.invaded_state = ss.E_star_up;
            break;
        }
        case BoundScenario::EstarChain:
            break; // unreachable
    }

    pair.shift = normalize_translation(shift_in, c.epsilon, c.rho_env);
    c.M = pair.shift.offset;
    pair.constants = c;
    return pair;
}

/* ------------------------------------------------------------------------ */

struct VerifyGridOptions {
    double half_width = 60.0;
    int n = 12001;
    double refine_radius = 1.0;
    int refine_factor = 10;
    double exclusion_radius = 1e-6;
};

/*
 * Uniform grid plus a refine_factor-times denser patch within refine_radius
 * of every breakpoint, excluding the exclusion neighborhood of the kinks
 * themselves (the inequalities are only required off the kink set).
 */
inline std::vector<double> build_verification_grid(const BoundPair& pair,
                                                   const VerifyGridOptions& o = {}) {
    std::vector<double> g;
    const double h = 2.0 * o.half_width / (o.n - 1);
    g.reserve(static_cast<std::size_t>(o.n));
    for (int i = 0; i < o.n; ++i) g.push_back(-o.half_width + i * h);
    const double hr = h / o.refine_factor;
    for (double bp : pair.all_breakpoints()) {
        const int m = static_cast<int>(std::ceil(o.refine_radius / hr));
        for (int j = -m; j <= m; ++j) g.push_back(bp + j * hr);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    std::vector<double> out;
    out.reserve(g.size());
    const auto& bps = pair.all_breakpoints();
    for (double z : g) {
        bool keep = true;
        for (double bp : bps)
            if (std::abs(z - bp) < o.exclusion_radius) keep = false;
        if (keep) out.push_back(z);
    }
    return out;
}

struct ResidualEntry {
    std::string name;
    double worst = 0.0; // most violating signed value (max for U, min for L)
    double worst_z = 0.0;
    bool pass = false;
};

struct ResidualReport {
    std::array<ResidualEntry, 6> entries; // U1 U2 U3 L1 L2 L3
    std::size_t points = 0;
    double tol = 0.0;
    double exclusion_radius = 0.0;
    bool pass = false;

    const ResidualEntry* first_failure() const {
        for (const auto& e : entries)
            if (!e.pass) return &e;
        return nullptr;
    }
};

namespace detail {

// residual of Definition-style inequality i (0..2 upper, 3..5 lower)
inline double pair_residual(const BoundPair& pair, const ModelParams& p,
                            const ShiftProfile& alpha, int which, double z) {
    const auto& up = pair.upper;
    const auto& lo = pair.lower;
    const double s = pair.constants.s;
    const double al = alpha(z);
    auto lin = [&](const PiecewiseProfile& f) {
        return p.d * f.eval(z, 2) - s * f.eval(z, 1);
    };
    switch (which) {
        case 0: {
            const double u = up[0](z);
            return lin(up[0]) + p.r1 * u * (1.0 + al - u - p.k * lo[1](z) - p.b * lo[2](z));
        }
        case 1: {
            const double v = up[1](z);
            return lin(up[1]) + p.r2 * v * (1.0 + al - p.h * lo[0](z) - v - p.b * lo[2](z));
        }
        case 2: {
            const double w = up[2](z);
            return lin(up[2]) + p.r3 * w * (-1.0 + al + p.a * up[0](z) + p.a * up[1](z) - w);
        }
        case 3: {
            const double u = lo[0](z);
            return lin(lo[0]) + p.r1 * u * (1.0 + al - u - p.k * up[1](z) - p.b * up[2](z));
        }
        case 4: {
            const double v = lo[1](z);
            return lin(lo[1]) + p.r2 * v * (1.0 + al - p.h * up[0](z) - v - p.b * up[2](z));
        }
        default: {
            const double w = lo[2](z);
            return lin(lo[2]) + p.r3 * w * (-1.0 + al + p.a * lo[0](z) + p.a * lo[1](z) - w);
        }
    }
}

} // namespace detail

/*
 * Signed worst-case margins of the six inequalities over the grid, using
 * exact closed-form derivatives (spline derivatives for sampled profiles).
 * Grid points must keep their distance from every breakpoint.
 */
inline ResidualReport bound_residuals(const BoundPair& pair, const ShiftProfile& alpha,
                                      const ModelParams& p, const std::vector<double>& grid,
                                      double tol = 1e-10, double exclusion_radius = 1e-6) {
    p.validate();
    if (grid.empty()) throw ConfigError("bound_residuals: empty grid");
    const auto bps = pair.all_breakpoints();
    for (double z : grid)
        for (double bp : bps)
            if (std::abs(z - bp) < exclusion_radius)
                throw GridTouchesBreakpoint("grid point " + std::to_string(z) +
                                            " is within the exclusion radius of a kink");

    static const char* names[6] = {"U1", "U2", "U3", "L1", "L2", "L3"};
    ResidualReport rep;
    rep.points = grid.size();
    rep.tol = tol;
    rep.exclusion_radius = exclusion_radius;
    for (int i = 0; i < 6; ++i) {
        ResidualEntry e;
        e.name = names[i];
        const bool upper = i < 3;
        double worst = upper ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
        double worst_z = grid.front();
        for (double z : grid) {
            const double r = detail::pair_residual(pair, p, alpha, i, z);
            if (!std::isfinite(r))
                throw NonfiniteValue("residual " + std::string(names[i]) +
                                     " nonfinite at z = " + std::to_string(z));
            if (upper ? (r > worst) : (r < worst)) {
                worst = r;
                worst_z = z;
            }
        }
        e.worst = worst;
        e.worst_z = worst_z;
        e.pass = upper ? (worst <= tol) : (worst >= -tol);
        rep.entries[static_cast<std::size_t>(i)] = e;
    }
    rep.pass = std::all_of(rep.entries.begin(), rep.entries.end(),
                           [](const ResidualEntry& e) { return e.pass; });
    return rep;
}

struct KinkCheck {
    double z = 0.0;
    int component = 0;
    bool upper = false;
    double left = 0.0, right = 0.0;
    bool pass = false;
};

struct VerificationReport {
    ResidualReport residuals;
    double order_margin = 0.0; // min over grid and components of (upper - lower)
    double order_z = 0.0;
    int order_component = 0;
    bool order_pass = false;
    std::vector<KinkCheck> kinks;
    bool kinks_pass = false;
    std::array<double, 3> limit_err_upper{}, limit_err_lower{};
    bool limits_pass = false;
    double envelope_margin = 0.0;
    bool envelope_pass = false;
    bool pass = false;
    std::string first_failure;
};

/*
 * Full machine check of a pair: envelope normalization, residual signs,
 * ordering, kink conditions, invaded-state limits.  For the chain pair the
 * limit check is containment of the stable state between the two triples;
 * for the closed-form pairs both triples share the invaded state.
 */
inline VerificationReport verify_pair(const BoundPair& pair, const ShiftProfile& alpha,
                                      const ModelParams& p, const std::vector<double>& grid,
                                      double tol = 1e-10, double exclusion_radius = 1e-6) {
    VerificationReport rep;
    rep.envelope_margin =
        normalized_margin(alpha, pair.constants.epsilon, pair.constants.rho_env, grid);
    rep.envelope_pass = rep.envelope_margin >= -1e-12;

    rep.residuals = bound_residuals(pair, alpha, p, grid, tol, exclusion_radius);

    rep.order_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        for (double z : grid) {
            const double m = pair.upper[iu](z) - pair.lower[iu](z);
            if (m < rep.order_margin) {
                rep.order_margin = m;
                rep.order_z = z;
                rep.order_component = i + 1;
            }
        }
    }
    rep.order_pass = rep.order_margin >= -tol;

    rep.kinks_pass = true;
    for (int i = 0; i < 3; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        for (bool upper : {true, false}) {
            const PiecewiseProfile& prof = upper ? pair.upper[iu] : pair.lower[iu];
            for (double bp : prof.breakpoints()) {
                KinkCheck kc;
                kc.z = bp;
                kc.component = i + 1;
                kc.upper = upper;
                kc.left = prof.eval_side(bp, 1, Side::Left);
                kc.right = prof.eval_side(bp, 1, Side::Right);
                // upper: slope may only drop across the kink; lower: only rise
                kc.pass = upper ? (kc.right <= kc.left + tol) : (kc.left <= kc.right + tol);
                rep.kinks_pass = rep.kinks_pass && kc.pass;
                rep.kinks.push_back(kc);
            }
        }
    }

    const double zL = grid.front();
    rep.limits_pass = true;
    const std::array<double, 3> target{pair.invaded_state.u, pair.invaded_state.v,
                                       pair.invaded_state.w};
    for (int i = 0; i < 3; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        if (pair.scenario == BoundScenario::EstarChain) {
            // the chain pair only brackets the stable state
            rep.limit_err_upper[iu] = pair.upper[iu].limit_left() - target[iu];
            rep.limit_err_lower[iu] = target[iu] - pair.lower[iu].limit_left();
            rep.limits_pass = rep.limits_pass && rep.limit_err_upper[iu] >= -1e-10 &&
                              rep.limit_err_lower[iu] >= -1e-10;
        } else {
            rep.limit_err_upper[iu] = std::abs(pair.upper[iu](zL) - target[iu]);
            rep.limit_err_lower[iu] = std::abs(pair.lower[iu](zL) - target[iu]);
            // theoretical tail at the evaluation point
            const double tail = std::abs(pair.upper[iu](zL) - pair.upper[iu].limit_left()) +
                                std::abs(pair.lower[iu](zL) - pair.lower[iu].limit_left()) +
                                std::abs(pair.upper[iu].limit_left() - target[iu]) +
                                std::abs(pair.lower[iu].limit_left() - target[iu]);
            rep.limits_pass = rep.limits_pass &&
                              rep.limit_err_upper[iu] <= 1e-10 + tail &&
                              rep.limit_err_lower[iu] <= 1e-10 + tail &&
                              std::abs(pair.upper[iu].limit_left() - target[iu]) <= 1e-12 &&
                              std::abs(pair.lower[iu].limit_left() - target[iu]) <= 1e-12;
        }
    }

    rep.pass = rep.envelope_pass && rep.residuals.pass && rep.order_pass && rep.kinks_pass &&
               rep.limits_pass;
    if (!rep.pass) {
        if (!rep.envelope_pass)
            rep.first_failure = "envelope";
        else if (!rep.residuals.pass)
            rep.first_failure = rep.residuals.first_failure()->name + " at z = " +
                                std::to_string(rep.residuals.first_failure()->worst_z);
        else if (!rep.order_pass)
            rep.first_failure = "ordering at z = " + std::to_string(rep.order_z);
        else if (!rep.kinks_pass)
            rep.first_failure = "kink condition";
        else
            rep.first_failure = "limits";
    }
    return rep;
}

inline VerificationReport verify_pair(const BoundPair& pair, const ModelParams& p,
                                      const VerifyGridOptions& go = {}, double tol = 1e-10) {
    return verify_pair(pair, pair.shift, p, build_verification_grid(pair, go), tol,
                       go.exclusion_radius);
}

} // namespace shiftwave

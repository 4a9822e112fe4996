/*
 * Reduced three-species predator-prey model: parameters, steady states,
 * characteristic roots, critical speeds and hypothesis checking.
 *
 * The kinetics (densities u, v: competing preys; w: predator) are
 *
 *   f1 = r1 u [1 + alpha - u - k v - b w]
 *   f2 = r2 v [1 + alpha - h u - v - b w]
 *   f3 = r3 w [-1 + alpha + a u + a v - w]
 *
 * with one diffusion coefficient d shared by all species and the
 * heterogeneity alpha supplied by shift.hpp.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "shiftwave/errors.hpp"

namespace shiftwave {

struct Triple {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;

    double dist(const Triple& o) const {
        return std::max({std::abs(u - o.u), std::abs(v - o.v), std::abs(w - o.w)});
    }
    double norm() const { return std::max({std::abs(u), std::abs(v), std::abs(w)}); }
};

/*
 * All coefficients are strictly positive.  The standing assumption
 * a > 1, 0 < h < 1 < k (predator viable, u weak / v strong competitor)
 * is enforced by validate() unless relax_standing is set, which keeps
 * the simulator usable outside the constructions' hypothesis range.
 */
struct ModelParams {
    double d = 1.0;
    double r1 = 1.0;
    double r2 = 1.0;
    double r3 = 1.0;
    double a = 2.0;
    double b = 0.1;
    double h = 0.5;
    double k = 1.5;
    bool relax_standing = false;

    bool standing_ok() const { return a > 1.0 && h > 0.0 && h < 1.0 && k > 1.0; }

    void validate() const {
        const std::array<std::pair<const char*, double>, 8> fields{{{"d", d},
                                                                    {"r1", r1},
                                                                    {"r2", r2},
                                                                    {"r3", r3},
                                                                    {"a", a},
                                                                    {"b", b},
                                                                    {"h", h},
                                                                    {"k", k}}};
        for (const auto& [name, value] : fields) {
            if (!(value > 0.0) || !std::isfinite(value))
                throw ConfigError(std::string("model parameter ") + name +
                                  " must be strictly positive and finite");
        }
        if (!relax_standing && !standing_ok())
            throw HypothesisViolation(
                "standing-assumptions",
                "requires a > 1 and 0 < h < 1 < k (set relax_standing to override)");
    }
};

struct SteadyStates {
    Triple E_u;       // (1, 0, 0)
    Triple E_v;       // (0, 1, 0)
    Triple E_star_up; // (u_p, 0, w_p), unstable to the strong prey
    Triple E_star_lo; // (0, v_p, w_p), kinetically stable
    double u_p = 0.0;
    double v_p = 0.0;
    double w_p = 0.0;
    double beta_up = 0.0; // growth rate of v around E_star_up, positive under standing assumptions
    double beta_lo = 0.0; // growth rate of u around E_star_lo, negative under standing assumptions

    std::array<std::pair<const char*, Triple>, 4> named() const {
        return {{{"E_u", E_u}, {"E_v", E_v}, {"E*", E_star_up}, {"E_*", E_star_lo}}};
    }
};

inline SteadyStates steady_states(const ModelParams& p) {
    p.validate();
    SteadyStates s;
    const double denom = 1.0 + p.a * p.b;
    s.u_p = (1.0 + p.b) / denom;
    s.v_p = s.u_p; // exact, both preys share the coexistence density
    s.w_p = (p.a - 1.0) / denom;
    s.E_u = {1.0, 0.0, 0.0};
    s.E_v = {0.0, 1.0, 0.0};
    s.E_star_up = {s.u_p, 0.0, s.w_p};
    s.E_star_lo = {0.0, s.v_p, s.w_p};
    s.beta_up = (1.0 - p.h) * (1.0 + p.b) / denom;
    s.beta_lo = (1.0 - p.k) * (1.0 + p.b) / denom;
    return s;
}

struct CriticalSpeeds {
    double s2_star = 0.0;  // strong prey invading the weak-prey-only state
    double s2_dstar = 0.0; // strong prey invading the weak-prey + predator state
    double s3_star = 0.0;  // predator invading a single-prey state
    double lambda_u = 0.0; // double root of A1 at s = s3_star
    double lambda_star = 0.0; // double root of A2 at s = s2_dstar
};

inline CriticalSpeeds critical_speeds(const ModelParams& p) {
    p.validate();
    const SteadyStates ss = steady_states(p);
    CriticalSpeeds c;
    c.s2_star = 2.0 * std::sqrt(p.d * p.r2 * (1.0 - p.h));
    c.s2_dstar = 2.0 * std::sqrt(p.d * p.r2 * ss.beta_up);
    c.s3_star = 2.0 * std::sqrt(p.d * p.r3 * (p.a - 1.0));
    c.lambda_u = std::sqrt(p.r3 * (p.a - 1.0) / p.d);
    c.lambda_star = std::sqrt(p.r2 * ss.beta_up / p.d);
    return c;
}

enum class CharPoly { A1, A2 };

// A1(l) = d l^2 - s l + r3 (a - 1);  A2(l) = d l^2 - s l + r2 beta_up
inline double char_poly(const ModelParams& p, double s, CharPoly which, double lambda) {
    const double c0 = (which == CharPoly::A1) ? p.r3 * (p.a - 1.0)
                                              : p.r2 * steady_states(p).beta_up;
    return p.d * lambda * lambda - s * lambda + c0;
}

struct RootInfo {
    double lambda_small = 0.0;
    double lambda_large = 0.0;
    bool double_root = false;
    double discriminant = 0.0;
    double minimal_speed = 0.0; // speed at which the discriminant vanishes
};

/*
 * Real roots of A1 or A2.  Speeds within relative tolerance eq_rtol of the
 * minimal speed are routed to the double-root (critical) branch; strictly
 * smaller speeds have no real roots.
 */
inline RootInfo characteristic_roots(const ModelParams& p, double s, CharPoly which,
                                     double eq_rtol = 1e-9) {
    p.validate();
    if (!(s > 0.0)) throw ConfigError("characteristic_roots: speed must be positive");
    const double c0 = (which == CharPoly::A1) ? p.r3 * (p.a - 1.0)
                                              : p.r2 * steady_states(p).beta_up;
    RootInfo info;
    info.minimal_speed = 2.0 * std::sqrt(p.d * c0);
    info.discriminant = s * s - 4.0 * p.d * c0;
    if (std::abs(s - info.minimal_speed) <= eq_rtol * info.minimal_speed) {
        info.double_root = true;
        info.lambda_small = info.lambda_large = s / (2.0 * p.d);
        return info;
    }
    if (s < info.minimal_speed)
        throw NoRealRoots("speed " + std::to_string(s) + " is below the minimal speed " +
                          std::to_string(info.minimal_speed));
    const double sq = std::sqrt(info.discriminant);
    // stable quadratic formula: avoid cancellation in the small root
    const double big = 0.5 * (s + sq);
    info.lambda_large = big / p.d;
    info.lambda_small = c0 / big;
    return info;
}

enum class QWhich { Q1, Q2 };

/*
 * Speed threshold as a function of the envelope decay rate rho.
 * Decreasing on (0, lambda_u) resp. (0, lambda_star), then constant at the
 * minimal speed; continuous at the knee by construction.
 */
inline double q_threshold(const ModelParams& p, double rho, QWhich which) {
    p.validate();
    if (!(rho > 0.0)) throw ConfigError("q_threshold: rho must be positive");
    const CriticalSpeeds c = critical_speeds(p);
    if (which == QWhich::Q1) {
        if (rho >= c.lambda_u) return c.s3_star;
        return p.d * rho + p.r3 * (p.a - 1.0) / rho;
    }
    const double r2beta = p.r2 * steady_states(p).beta_up;
    if (rho >= c.lambda_star) return c.s2_dstar;
    return p.d * rho + r2beta / rho;
}

enum class Scenario { Eu, Estar, Estable, NecessaryOnly };

inline Scenario parse_scenario(const std::string& tag) {
    if (tag == "eu" || tag == "Eu") return Scenario::Eu;
    if (tag == "estar" || tag == "Estar") return Scenario::Estar;
    if (tag == "estable" || tag == "Estable") return Scenario::Estable;
    if (tag == "necessary-only" || tag == "necessary") return Scenario::NecessaryOnly;
    throw ConfigError("unknown scenario tag '" + tag + "'");
}

inline std::string scenario_name(Scenario sc) {
    switch (sc) {
        case Scenario::Eu: return "eu";
        case Scenario::Estar: return "estar";
        case Scenario::Estable: return "estable";
        case Scenario::NecessaryOnly: return "necessary-only";
    }
    return "?";
}

struct ConditionCheck {
    std::string name;
    bool pass = false;
    double lhs = 0.0; // checked as lhs < rhs (or <= for speed thresholds)
    double rhs = 0.0;
    std::string detail;
};

struct HypothesisReport {
    Scenario scenario = Scenario::NecessaryOnly;
    bool critical = false; // s equals the scenario's minimal speed (to tolerance)
    std::vector<ConditionCheck> conditions;
    std::optional<double> epsilon_max;     // open-interval supremum of the working epsilon
    std::optional<double> necessary_speed; // threshold for the scenario's invaded state

    bool all_pass() const {
        return std::all_of(conditions.begin(), conditions.end(),
                           [](const ConditionCheck& c) { return c.pass; });
    }
    const ConditionCheck* first_failure() const {
        for (const auto& c : conditions)
            if (!c.pass) return &c;
        return nullptr;
    }
};

// working epsilon used by the bound constructions: small but well inside the window
inline double default_epsilon(double epsilon_max) {
    return std::min(0.01, 0.5 * epsilon_max);
}

/*
 * Check the scenario's existence hypotheses at shift speed s.
 * rho is the envelope decay rate of the heterogeneity; when absent the speed
 * thresholds are evaluated on their flat branch (equivalently rho large).
 */
inline HypothesisReport check_hypotheses(const ModelParams& p, double s, Scenario scenario,
                                         std::optional<double> rho = std::nullopt,
                                         double eq_rtol = 1e-9) {
    p.validate();
    if (!(s > 0.0)) throw ConfigError("check_hypotheses: speed must be positive");
    const SteadyStates ss = steady_states(p);
    const CriticalSpeeds cs = critical_speeds(p);
    HypothesisReport rep;
    rep.scenario = scenario;

    auto add = [&rep](const std::string& name, bool pass, double lhs, double rhs,
                      const std::string& detail) {
        rep.conditions.push_back({name, pass, lhs, rhs, detail});
    };

    add("standing-assumptions", p.standing_ok(), 0, 0, "a > 1 and 0 < h < 1 < k");

    const double r2beta = p.r2 * ss.beta_up;
    switch (scenario) {
        case Scenario::Eu: {
            const double lhs = p.r2 * (1.0 - p.h);
            const double rhs = p.r3 * (p.a - 1.0);
            const bool equal = std::abs(lhs - rhs) <= eq_rtol * std::max(lhs, rhs);
            add("speed-equality", equal, lhs, rhs,
                "r2(1-h) = r3(a-1), forcing the two invasion speeds to coincide");
            const double margin = rhs - p.r1 * (p.k + p.b * (2.0 * p.a - 1.0) - 1.0);
            add("prey1-margin", margin > 0.0, p.r1 * (p.k + p.b * (2.0 * p.a - 1.0) - 1.0),
                rhs, "weak-prey suppression dominated by the predator growth scale");
            const double q1v = rho ? q_threshold(p, *rho, QWhich::Q1) : cs.s3_star;
            add("speed-threshold", s >= q1v * (1.0 - eq_rtol), q1v, s,
                "s at or above the envelope-adjusted threshold");
            rep.critical = std::abs(s - cs.s3_star) <= eq_rtol * cs.s3_star;
            double window = margin / p.r1;
            if (rep.critical) window *= std::exp(1.0);
            rep.epsilon_max = std::max(0.0, window);
            rep.necessary_speed = std::max(cs.s2_star, cs.s3_star);
            break;
        }
        case Scenario::Estar: {
            const double lhs = std::max(p.r1 * ((p.k - 1.0) + p.b * (2.0 * p.a - 1.0)), p.r3);
            add("invader-margin", lhs < r2beta, lhs, r2beta,
                "strong-prey growth into the coexistence state dominates both reactions");
            const double q2v = rho ? q_threshold(p, *rho, QWhich::Q2) : cs.s2_dstar;
            add("speed-threshold", s >= q2v * (1.0 - eq_rtol), q2v, s,
                "s at or above the envelope-adjusted threshold");
            rep.critical = std::abs(s - cs.s2_dstar) <= eq_rtol * cs.s2_dstar;
            double window = std::min(r2beta / p.r1 - ((p.k - 1.0) + p.b * (2.0 * p.a - 1.0)),
                                     r2beta / p.r3 - 1.0);
            if (rep.critical) window *= std::exp(1.0);
            rep.epsilon_max = std::max(0.0, window);
            rep.necessary_speed = cs.s2_dstar;
            break;
        }
        case Scenario::Estable: {
            const bool pass_a = p.a * (1.0 - p.h) > 1.0;
            add("predator-efficiency", pass_a, 1.0 / (1.0 - p.h), p.a,
                "a > 1/(1-h)");
            const double b_cap = (1.0 - p.h - 1.0 / p.a) / (2.0 * p.a - 1.0);
            const bool pass_b = pass_a && p.b < b_cap;
            add("predation-weakness", pass_b, p.b, b_cap,
                "b < (1-h-1/a)/(2a-1), keeping both chain carrying capacities positive");
            if (pass_a && pass_b) {
                // cap on the working epsilon of the scalar-wave stages
                const double lam0 = rho ? std::min(*rho, s / (2.0 * p.d)) : s / (2.0 * p.d);
                const double cap = lam0 * (s - p.d * lam0) / std::max(p.r2, p.r3);
                rep.epsilon_max = std::max(0.0, cap);
            } else {
                rep.epsilon_max = 0.0;
            }
            break; // any s > 0 admissible, no necessary speed
        }
        case Scenario::NecessaryOnly: {
            const double eu = std::max(cs.s2_star, cs.s3_star);
            add("necessary-speed-eu", s >= eu * (1.0 - eq_rtol), eu, s,
                "required for a wave invading the weak-prey-only state");
            add("necessary-speed-ev", s >= cs.s3_star * (1.0 - eq_rtol), cs.s3_star, s,
                "required for a wave invading the strong-prey-only state");
            add("necessary-speed-estar", s >= cs.s2_dstar * (1.0 - eq_rtol), cs.s2_dstar, s,
                "required for a wave invading the weak-prey + predator state");
            break;
        }
    }
    return rep;
}

} // namespace shiftwave

/*
 * CSV and JSON report output.  Floats carry 17 significant digits so files
 * round-trip exactly and reruns are byte-identical.
 */
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftwave/bounds.hpp"
#include "shiftwave/cauchy.hpp"
#include "shiftwave/config.hpp"
#include "shiftwave/diagnostics.hpp"
#include "shiftwave/errors.hpp"
#include "shiftwave/system_solver.hpp"

namespace shiftwave {

using Json = nlohmann::ordered_json;

inline std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

inline void write_wave_csv(const std::filesystem::path& path, const WaveSolution& w) {
    std::string s = "z,phi1,phi2,phi3\n";
    for (int i = 0; i < w.grid.n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        s += g17(w.grid.z(i)) + "," + g17(w.phi[0][iu]) + "," + g17(w.phi[1][iu]) + "," +
             g17(w.phi[2][iu]) + "\n";
    }
    write_file(path, s);
}

inline void write_profile_csv(const std::filesystem::path& path, const PiecewiseProfile& prof,
                              const std::vector<double>& grid) {
    std::string s = "z,value,d1,d2\n";
    for (double z : grid)
        s += g17(z) + "," + g17(prof(z)) + "," + g17(prof.eval(z, 1)) + "," +
             g17(prof.eval(z, 2)) + "\n";
    write_file(path, s);
}

inline void write_snapshots(const std::filesystem::path& dir, const Trajectory& traj) {
    std::string index = "index,time,file\n";
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%06zu.csv", k);
        std::string s = "z,u,v,w\n";
        const auto& snap = traj.snapshots[k];
        for (int i = 0; i < traj.grid.n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            s += g17(traj.grid.z(i)) + "," + g17(snap[0][iu]) + "," + g17(snap[1][iu]) + "," +
                 g17(snap[2][iu]) + "\n";
        }
        write_file(dir / name, s);
        index += std::to_string(k) + "," + g17(traj.times[k]) + "," + name + "\n";
    }
    write_file(dir / "index.csv", index);
}

/* -------- JSON pieces -------- */

inline Json json_config(const RunConfig& cfg) {
    Json j;
    for (const auto& [key, value] : cfg.raw()) j[key] = value;
    return j;
}

inline Json json_triple(const Triple& t) { return Json{{"u", t.u}, {"v", t.v}, {"w", t.w}}; }

inline Json json_hypothesis(const HypothesisReport& rep) {
    Json j;
    j["scenario"] = scenario_name(rep.scenario);
    j["critical"] = rep.critical;
    j["pass"] = rep.all_pass();
    Json conds = Json::array();
    for (const auto& c : rep.conditions) {
        conds.push_back(Json{{"name", c.name},
                             {"pass", c.pass},
                             {"lhs", c.lhs},
                             {"rhs", c.rhs},
                             {"detail", c.detail}});
    }
    j["conditions"] = conds;
    if (rep.epsilon_max) j["epsilon_max"] = *rep.epsilon_max;
    if (rep.necessary_speed) j["necessary_speed"] = *rep.necessary_speed;
    return j;
}

inline Json json_constants(const BoundConstants& c) {
    Json j;
    j["s"] = c.s;
    j["epsilon"] = c.epsilon;
    j["epsilon_max"] = c.epsilon_max;
    j["rho_env"] = c.rho_env;
    j["M"] = c.M;
    j["slack"] = c.slack;
    auto put = [&j](const char* name, double v) {
        if (v != 0.0) j[name] = v;
    };
    put("lambda1", c.lambda1);
    put("lambda2", c.lambda2);
    put("lambda3", c.lambda3);
    put("lambda4", c.lambda4);
    put("lambda_u", c.lambda_u);
    put("lambda_star", c.lambda_star);
    put("mu1", c.mu1);
    put("mu2", c.mu2);
    put("nu1", c.nu1);
    put("q1", c.q1);
    put("q2", c.q2);
    put("q3", c.q3);
    put("q4", c.q4);
    put("eta1", c.eta1);
    put("eta2", c.eta2);
    put("q1_lb", c.q1_lb);
    put("q2_lb", c.q2_lb);
    put("q3_lb", c.q3_lb);
    put("q4_lb", c.q4_lb);
    put("eta1_lb", c.eta1_lb);
    put("eta2_lb", c.eta2_lb);
    put("B0", c.B0);
    put("B1", c.B1);
    put("B2", c.B2);
    put("z1", c.z1);
    put("z2", c.z2);
    put("z3", c.z3);
    put("z4", c.z4);
    put("z5", c.z5);
    put("z6", c.z6);
    put("z_u", c.z_u);
    put("z_star", c.z_star);
    put("gamma2", c.gamma2);
    put("gamma3", c.gamma3);
    put("lambda0_v", c.lambda0_v);
    put("lambda0_w", c.lambda0_w);
    return j;
}

inline Json json_verification(const VerificationReport& rep) {
    Json j;
    j["pass"] = rep.pass;
    if (!rep.pass) j["first_failure"] = rep.first_failure;
    Json residuals = Json::array();
    for (const auto& e : rep.residuals.entries)
        residuals.push_back(Json{{"name", e.name},
                                 {"worst", e.worst},
                                 {"worst_z", e.worst_z},
                                 {"pass", e.pass}});
    j["residuals"] = residuals;
    j["residual_points"] = rep.residuals.points;
    j["residual_tol"] = rep.residuals.tol;
    j["exclusion_radius"] = rep.residuals.exclusion_radius;
    j["order_margin"] = rep.order_margin;
    j["order_z"] = rep.order_z;
    j["order_component"] = rep.order_component;
    j["order_pass"] = rep.order_pass;
    Json kinks = Json::array();
    for (const auto& kc : rep.kinks)
        kinks.push_back(Json{{"z", kc.z},
                             {"component", kc.component},
                             {"upper", kc.upper},
                             {"left", kc.left},
                             {"right", kc.right},
                             {"pass", kc.pass}});
    j["kinks"] = kinks;
    j["kinks_pass"] = rep.kinks_pass;
    j["limits_pass"] = rep.limits_pass;
    j["envelope_margin"] = rep.envelope_margin;
    j["envelope_pass"] = rep.envelope_pass;
    return j;
}

inline Json json_wave(const WaveSolution& w) {
    Json j;
    j["converged"] = w.converged;
    j["newton_iterations"] = w.newton_iterations;
    j["residual_sup"] = Json::array({w.residual_sup[0], w.residual_sup[1], w.residual_sup[2]});
    j["left_state"] = json_triple(w.left_state);
    j["left_end"] = json_triple(w.left_end());
    j["right_end"] = json_triple(w.right_end());
    j["negative_overshoot"] = w.negative_overshoot;
    j["positivity_min"] =
        Json::array({w.positivity_min[0], w.positivity_min[1], w.positivity_min[2]});
    if (w.bounds_checked) {
        j["sandwiched"] = Json::array({w.sandwiched[0], w.sandwiched[1], w.sandwiched[2]});
        j["sandwich_margin"] = Json::array(
            {w.sandwich_margin[0], w.sandwich_margin[1], w.sandwich_margin[2]});
    }
    j["grid"] = Json{{"L", w.grid.L}, {"n", w.grid.n}, {"center", w.grid.center}};
    return j;
}

inline Json json_diagnostics(const LimitReport& rep) {
    Json j;
    j["left_distance"] = Json{{"E_u", rep.left_distance[0]},
                              {"E_v", rep.left_distance[1]},
                              {"E*", rep.left_distance[2]},
                              {"E_*", rep.left_distance[3]}};
    j["nearest_left"] = rep.nearest_left;
    j["right_origin_distance"] = rep.right_origin_distance;
    auto rates = [](const std::array<std::optional<double>, 3>& r) {
        Json a = Json::array();
        for (const auto& v : r) {
            if (v)
                a.push_back(*v);
            else
                a.push_back(nullptr);
        }
        return a;
    };
    j["decay_rate_left"] = rates(rep.decay_rate_left);
    j["decay_rate_right"] = rates(rep.decay_rate_right);
    return j;
}

inline Json json_metrics(const ConvergenceMetrics& m) {
    Json j;
    j["verdict"] = verdict_name(m.verdict);
    j["final_distance"] = m.final_distance;
    j["fitted_rate"] = m.fitted_rate;
    j["times"] = m.times;
    j["distances"] = m.distances;
    return j;
}

inline Json json_extinction(const ExtinctionReport& rep) {
    Json j;
    j["variant"] = rep.variant == ExtinctionVariant::LargeK ? "large-k" : "subcritical-speed";
    j["s"] = rep.s;
    if (rep.variant == ExtinctionVariant::LargeK) {
        j["sign_condition"] = Json{{"holds", rep.sign.holds},
                                   {"worst", rep.sign.worst},
                                   {"worst_z", rep.sign.worst_z}};
        j["wave_sup_u"] = rep.wave_sup_u;
    }
    j["final_sup"] = Json::array({rep.final_sup[0], rep.final_sup[1], rep.final_sup[2]});
    Json times = Json::array();
    for (const auto& t : rep.extinction_time) {
        if (t)
            times.push_back(*t);
        else
            times.push_back(nullptr);
    }
    j["extinction_time"] = times;
    j["extinct"] = Json::array({rep.extinct[0], rep.extinct[1], rep.extinct[2]});
    j["threshold"] = rep.threshold;
    j["recovery_min_u_left"] = rep.recovery_min_u_left;
    j["note"] = "empirical: existence theory constrains forced waves, not the Cauchy flow";
    return j;
}

} // namespace shiftwave

/*
 * Command driver shared by the tool binary and the CLI tests.
 *
 * Subcommands: speeds, check, bounds, verify, solve, chain, simulate,
 * extinction.  Exit codes: 0 success, 1 usage/config error, 2 verification
 * failure, 3 hypothesis violation, 4 solver failure.
 */
#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "shiftwave/csvio.hpp"
#include "shiftwave/diagnostics.hpp"

namespace shiftwave::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode {
    kOk = 0,
    kUsage = 1,
    kVerificationFailed = 2,
    kHypothesisViolated = 3,
    kSolverFailed = 4,
};

struct Invocation {
    std::string subcommand;
    std::vector<std::string> configs;
    std::string out_dir;
    int jobs = 1;
    double tol = 0.0; // 0: keep config value
    std::string seed_scenario;
    bool print_schema = false;
    bool quiet = false;
};

inline const char* usage_text() {
    return "usage: shiftwave <subcommand> [--config PATH]... [--out DIR] [--jobs N]\n"
           "                 [--tol X] [--seed-scenario NAME] [--print-schema] [--quiet]\n"
           "\n"
           "subcommands:\n"
           "  speeds      critical speeds and steady states\n"
           "  check       hypothesis report for the configured scenario\n"
           "  bounds      build and export an upper/lower solution pair\n"
           "  verify      bounds plus the full residual/order/kink verification\n"
           "  solve       forced-wave solve with diagnostics\n"
           "  chain       stable-state pipeline (scalar waves + system solve)\n"
           "  simulate    co-moving Cauchy simulation with metrics\n"
           "  extinction  large-k or subcritical-speed experiment\n"
           "\n"
           "exit codes: 0 ok, 1 usage/config, 2 verification failure,\n"
           "            3 hypothesis violation, 4 solver failure\n";
}

namespace detail {

struct Outputs {
    std::filesystem::path dir;
    bool enabled = false;
    bool quiet = false; // concurrent sub-runs write files only

    void ensure() const {
        if (enabled) std::filesystem::create_directories(dir);
    }
    std::filesystem::path path(const std::string& name) const { return dir / name; }
};

inline void emit_report(const Outputs& out, const Json& report) {
    const std::string text = report.dump(2) + "\n";
    if (out.enabled) {
        write_file(out.path("report.json"), text);
    }
    if (!out.quiet) std::cout << text;
}

inline Json report_header(const std::string& subcommand, const RunConfig& cfg) {
    Json j;
    j["tool"] = "shiftwave";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["config"] = json_config(cfg);
    return j;
}

inline Grid make_grid(const RunConfig& cfg, double lambda_min, const ShiftProfile& shift) {
    const double L = cfg.num("grid", "L");
    const int n = cfg.integer("grid", "n");
    if (L > 0.0) return Grid::make(L, n);
    return Grid::auto_for(lambda_min, shift.K, shift.offset, n);
}

inline double scenario_lambda_min(const BoundPair& pair) {
    const BoundConstants& c = pair.constants;
    switch (pair.scenario) {
        case BoundScenario::EuSuper: return c.lambda1;
        case BoundScenario::EuCritical: return c.lambda_u;
        case BoundScenario::EstarSuper: return c.lambda3;
        case BoundScenario::EstarCritical: return c.lambda_star;
        case BoundScenario::EstarChain: return std::min(c.lambda0_v, c.lambda0_w);
    }
    return 1.0;
}

inline BoundPair build_pair_from_config(const RunConfig& cfg, Scenario scenario) {
    const ModelParams p = cfg.model();
    if (scenario == Scenario::Estable || scenario == Scenario::NecessaryOnly)
        throw ConfigError("bound pairs exist for the eu and estar scenarios; "
                          "use the chain subcommand for the stable state");
    const BoundScenario bs = bound_scenario_for(p, cfg.speed(), scenario);
    return build_bounds(p, cfg.speed(), cfg.shift(), bs, cfg.bound_options());
}

/* -------- subcommand bodies (return exit codes) -------- */

inline int run_speeds(const RunConfig& cfg, const Outputs& out) {
    const ModelParams p = cfg.model();
    const SteadyStates ss = steady_states(p);
    const CriticalSpeeds cs = critical_speeds(p);
    Json j = report_header("speeds", cfg);
    j["results"]["speeds"] = Json{{"s2_star", cs.s2_star},
                                  {"s2_dstar", cs.s2_dstar},
                                  {"s3_star", cs.s3_star},
                                  {"lambda_u", cs.lambda_u},
                                  {"lambda_star", cs.lambda_star}};
    j["results"]["steady_states"] = Json{{"E_u", json_triple(ss.E_u)},
                                         {"E_v", json_triple(ss.E_v)},
                                         {"E*", json_triple(ss.E_star_up)},
                                         {"E_*", json_triple(ss.E_star_lo)},
                                         {"u_p", ss.u_p},
                                         {"v_p", ss.v_p},
                                         {"w_p", ss.w_p},
                                         {"beta_up", ss.beta_up},
                                         {"beta_lo", ss.beta_lo}};
    emit_report(out, j);
    return kOk;
}

inline int run_check(const RunConfig& cfg, const Outputs& out) {
    const ModelParams p = cfg.model();
    const ShiftProfile shift = cfg.shift();
    const HypothesisReport rep =
        check_hypotheses(p, cfg.speed(), cfg.scenario(), shift.rho);
    Json j = report_header("check", cfg);
    j["results"]["hypotheses"] = json_hypothesis(rep);
    emit_report(out, j);
    if (!rep.all_pass()) {
        std::cerr << "hypothesis violated: " << rep.first_failure()->name << "\n";
        return kHypothesisViolated;
    }
    return kOk;
}

inline int run_bounds(const RunConfig& cfg, const Outputs& out, bool verify_too) {
    const ModelParams p = cfg.model();
    const BoundPair pair = build_pair_from_config(cfg, cfg.scenario());
    Json j = report_header(verify_too ? "verify" : "bounds", cfg);
    j["results"]["scenario"] = bound_scenario_name(pair.scenario);
    j["results"]["constants"] = json_constants(pair.constants);
    j["results"]["invaded_state"] = json_triple(pair.invaded_state);

    const VerifyGridOptions go = cfg.verify_options();
    if (out.enabled) {
        const std::vector<double> grid = build_verification_grid(pair, go);
        static const char* names[6] = {"upper1", "upper2", "upper3",
                                       "lower1", "lower2", "lower3"};
        for (int c = 0; c < 3; ++c) {
            const auto cu = static_cast<std::size_t>(c);
            write_profile_csv(out.path(std::string(names[c]) + ".csv"), pair.upper[cu], grid);
            write_profile_csv(out.path(std::string(names[c + 3]) + ".csv"), pair.lower[cu],
                              grid);
        }
    }
    if (!verify_too) {
        emit_report(out, j);
        return kOk;
    }
    const VerificationReport rep = verify_pair(pair, p, go, cfg.num("verify", "tol"));
    j["results"]["verification"] = json_verification(rep);
    emit_report(out, j);
    if (!rep.pass) {
        std::cerr << "verification failed: " << rep.first_failure << "\n";
        return kVerificationFailed;
    }
    return kOk;
}

inline int run_solve(const RunConfig& cfg, const Outputs& out) {
    const ModelParams p = cfg.model();
    const BoundPair pair = build_pair_from_config(cfg, cfg.scenario());
    const Grid grid = make_grid(cfg, scenario_lambda_min(pair), pair.shift);
    const WaveSolution wave = solve_system(p, cfg.speed(), pair, grid, cfg.solve_config());
    const LimitReport diag = wave_diagnostics(wave, steady_states(p));
    Json j = report_header("solve", cfg);
    j["results"]["scenario"] = bound_scenario_name(pair.scenario);
    j["results"]["wave"] = json_wave(wave);
    j["results"]["diagnostics"] = json_diagnostics(diag);
    if (out.enabled) write_wave_csv(out.path("wave.csv"), wave);
    emit_report(out, j);
    return kOk;
}

inline int run_chain(const RunConfig& cfg, const Outputs& out) {
    const ModelParams p = cfg.model();
    const EstarChain ch = build_estar_chain(p, cfg.speed(), cfg.shift(), cfg.chain_config());
    const SignConditionReport sign = weak_prey_exclusion_condition(p, ch.pair, ch.wave.grid);
    Json j = report_header("chain", cfg);
    j["results"]["gamma2"] = ch.gamma2;
    j["results"]["gamma3"] = ch.gamma3;
    j["results"]["constants"] = json_constants(ch.pair.constants);
    j["results"]["invaded_state"] = json_triple(ch.invaded);
    j["results"]["left_state_error"] = ch.left_state_error;
    j["results"]["reaches_invaded"] = ch.reaches_invaded;
    j["results"]["sup_u"] = ch.sup_u;
    j["results"]["sign_condition"] = Json{{"holds", sign.holds},
                                          {"worst", sign.worst},
                                          {"worst_z", sign.worst_z}};
    j["results"]["scalar_v"] = Json{{"residual_sup", ch.lower_v.residual_sup},
                                    {"lambda0", ch.lower_v.lambda0},
                                    {"epsilon", ch.lower_v.epsilon},
                                    {"anchor", ch.lower_v.anchor},
                                    {"subsolution_margin", ch.lower_v.subsolution_margin},
                                    {"iterations", ch.lower_v.iterations}};
    j["results"]["scalar_w"] = Json{{"residual_sup", ch.lower_w.residual_sup},
                                    {"lambda0", ch.lower_w.lambda0},
                                    {"epsilon", ch.lower_w.epsilon},
                                    {"anchor", ch.lower_w.anchor},
                                    {"subsolution_margin", ch.lower_w.subsolution_margin},
                                    {"iterations", ch.lower_w.iterations}};
    j["results"]["wave"] = json_wave(ch.wave);
    if (out.enabled) write_wave_csv(out.path("wave.csv"), ch.wave);
    emit_report(out, j);
    return kOk;
}

inline int run_simulate(const RunConfig& cfg, const Outputs& out) {
    const ModelParams p = cfg.model();
    const Scenario scenario = cfg.scenario();
    const SimConfig sim = cfg.sim_config();
    const std::string ic_kind = cfg.str("sim", "ic");

    // reference wave and grid
    std::array<std::vector<double>, 3> ic;
    Grid grid{};
    ShiftProfile alpha;
    const WaveSolution* ref = nullptr;
    WaveSolution wave;
    if (scenario == Scenario::Estable) {
        EstarChain ch = build_estar_chain(p, cfg.speed(), cfg.shift(), cfg.chain_config());
        wave = std::move(ch.wave);
        grid = wave.grid;
        alpha = ch.pair.shift;
        ref = &wave;
        if (ic_kind == "wave") {
            ic = wave.phi;
        } else if (ic_kind == "bounds-midpoint") {
            for (std::size_t c = 0; c < 3; ++c) {
                ic[c].resize(static_cast<std::size_t>(grid.n));
                for (int i = 0; i < grid.n; ++i)
                    ic[c][static_cast<std::size_t>(i)] =
                        0.5 * (ch.pair.lower[c](grid.z(i)) + ch.pair.upper[c](grid.z(i)));
                ic[c].front() = wave.phi[c].front();
                ic[c].back() = 0.0;
            }
        } else {
            throw ConfigError("sim.ic '" + ic_kind + "' is not available for estable");
        }
    } else if (scenario == Scenario::Eu || scenario == Scenario::Estar) {
        if (ic_kind == "wave" || ic_kind == "bounds-midpoint") {
            const BoundPair pair = build_pair_from_config(cfg, scenario);
            alpha = pair.shift;
            grid = make_grid(cfg, scenario_lambda_min(pair), pair.shift);
            wave = solve_system(p, cfg.speed(), pair, grid, cfg.solve_config());
            ref = &wave;
            if (ic_kind == "wave") {
                ic = wave.phi;
            } else {
                for (std::size_t c = 0; c < 3; ++c) {
                    ic[c].resize(static_cast<std::size_t>(grid.n));
                    for (int i = 0; i < grid.n; ++i)
                        ic[c][static_cast<std::size_t>(i)] =
                            0.5 * (pair.lower[c](grid.z(i)) + pair.upper[c](grid.z(i)));
                    ic[c].front() = wave.phi[c].front();
                    ic[c].back() = 0.0;
                }
            }
        } else if (ic_kind == "pulses" || ic_kind == "zero") {
            // exploratory runs: no wave construction, so no speed hypotheses
            alpha = normalize_translation(cfg.shift(), 0.01);
            grid = make_grid(cfg, std::min(alpha.rho, cfg.speed() / (2.0 * p.d)), alpha);
            const SteadyStates ss = steady_states(p);
            const Triple inv = scenario == Scenario::Eu ? ss.E_u : ss.E_star_up;
            for (std::size_t c = 0; c < 3; ++c) ic[c].assign(static_cast<std::size_t>(grid.n), 0.0);
            if (ic_kind == "pulses") {
                for (int i = 0; i < grid.n; ++i) {
                    const double z = grid.z(i);
                    const double t = (z - alpha.offset) / 5.0;
                    const double bump =
                        std::abs(t) < 1.0 ? (1.0 - t * t) * (1.0 - t * t) : 0.0;
                    ic[0][static_cast<std::size_t>(i)] =
                        inv.u + (inv.u > 0.0 ? 0.0 : 0.5 * bump);
                    ic[1][static_cast<std::size_t>(i)] =
                        inv.v + (inv.v > 0.0 ? 0.0 : 0.5 * bump);
                    ic[2][static_cast<std::size_t>(i)] =
                        inv.w + (inv.w > 0.0 ? 0.0 : 0.5 * bump);
                }
                for (std::size_t c = 0; c < 3; ++c) ic[c].back() = 0.0;
            }
        } else {
            throw ConfigError("unknown sim.ic '" + ic_kind + "'");
        }
    } else {
        throw ConfigError("simulate supports the eu, estar and estable scenarios");
    }

    const double perturb = cfg.num("sim", "perturb");
    if (perturb > 0.0) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.integer("sim", "rng_seed")));
        std::uniform_real_distribution<double> noise(-perturb, perturb);
        for (auto& comp : ic)
            for (std::size_t i = 1; i + 1 < comp.size(); ++i)
                comp[i] = std::max(0.0, comp[i] * (1.0 + noise(rng)));
    }

    const Trajectory traj = simulate(p, cfg.speed(), alpha, ic, grid, sim);
    Json j = report_header("simulate", cfg);
    j["results"]["dt"] = traj.dt;
    j["results"]["steps"] = traj.steps;
    j["results"]["box_hi"] = Json::array({traj.box_hi[0], traj.box_hi[1], traj.box_hi[2]});
    j["results"]["box_breach"] = traj.box_breach;
    j["results"]["final_sup"] = Json::array({traj.sup_norms.back()[0],
                                             traj.sup_norms.back()[1],
                                             traj.sup_norms.back()[2]});
    if (ref != nullptr)
        j["results"]["metrics"] = json_metrics(convergence_metrics(traj, *ref));
    if (out.enabled) {
        write_snapshots(out.dir, traj);
        if (ref != nullptr) write_wave_csv(out.path("reference_wave.csv"), *ref);
    }
    emit_report(out, j);
    return kOk;
}

inline int run_extinction(const RunConfig& cfg, const Outputs& out) {
    const ModelParams p = cfg.model();
    const ExtinctionVariant variant =
        parse_extinction_variant(cfg.str("extinction", "variant"));
    const ExtinctionReport rep =
        extinction_experiment(p, cfg.speed(), cfg.shift(), variant, cfg.extinction_config());
    Json j = report_header("extinction", cfg);
    j["results"]["extinction"] = json_extinction(rep);
    emit_report(out, j);
    return kOk;
}

inline int dispatch(const std::string& sub, const RunConfig& cfg, const Outputs& out) {
    if (sub == "speeds") return run_speeds(cfg, out);
    if (sub == "check") return run_check(cfg, out);
    if (sub == "bounds") return run_bounds(cfg, out, false);
    if (sub == "verify") return run_bounds(cfg, out, true);
    if (sub == "solve") return run_solve(cfg, out);
    if (sub == "chain") return run_chain(cfg, out);
    if (sub == "simulate") return run_simulate(cfg, out);
    if (sub == "extinction") return run_extinction(cfg, out);
    std::cerr << "unknown subcommand '" << sub << "'\n" << usage_text();
    return kUsage;
}

inline int guarded_dispatch(const std::string& sub, const RunConfig& cfg, const Outputs& out) {
    try {
        return dispatch(sub, cfg, out);
    } catch (const HypothesisViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHypothesisViolated;
    } catch (const PrerequisiteViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHypothesisViolated;
    } catch (const SpeedRegimeMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHypothesisViolated;
    } catch (const NoRealRoots& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHypothesisViolated;
    } catch (const GammaOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHypothesisViolated;
    } catch (const NewtonDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailed;
    } catch (const MaxIterations& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailed;
    } catch (const IterationStall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailed;
    } catch (const BoxViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailed;
    } catch (const EnvelopeUnverified& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailed;
    } catch (const NonfiniteValue& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

} // namespace detail

inline int run(const std::vector<std::string>& args) {
    Invocation inv;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        auto value = [&](const char* flag) -> std::string {
            if (i + 1 >= args.size())
                throw ConfigError(std::string(flag) + " needs a value");
            return args[++i];
        };
        try {
            if (a == "--config")
                inv.configs.push_back(value("--config"));
            else if (a == "--out")
                inv.out_dir = value("--out");
            else if (a == "--jobs")
                inv.jobs = std::stoi(value("--jobs"));
            else if (a == "--tol")
                inv.tol = std::stod(value("--tol"));
            else if (a == "--seed-scenario")
                inv.seed_scenario = value("--seed-scenario");
            else if (a == "--print-schema")
                inv.print_schema = true;
            else if (a == "--quiet")
                inv.quiet = true;
            else if (a == "--help" || a == "-h") {
                std::cout << usage_text();
                return kOk;
            } else if (a == "--version") {
                std::cout << "shiftwave " << kVersion << "\n";
                return kOk;
            } else if (!a.empty() && a[0] == '-') {
                std::cerr << "unknown flag '" << a << "'\n" << usage_text();
                return kUsage;
            } else if (inv.subcommand.empty()) {
                inv.subcommand = a;
            } else {
                std::cerr << "unexpected argument '" << a << "'\n" << usage_text();
                return kUsage;
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n" << usage_text();
            return kUsage;
        }
    }

    if (inv.print_schema) {
        std::cout << RunConfig::print_schema();
        return kOk;
    }
    if (inv.subcommand.empty()) {
        std::cerr << usage_text();
        return kUsage;
    }

    std::vector<RunConfig> configs;
    try {
        if (inv.configs.empty()) {
            configs.emplace_back(); // all defaults
        } else {
            for (const auto& path : inv.configs) configs.push_back(RunConfig::from_file(path));
        }
        for (auto& cfg : configs) {
            if (inv.tol > 0.0) cfg.set("solver", "tol", g17(inv.tol));
            if (!inv.seed_scenario.empty()) cfg.set("run", "scenario", inv.seed_scenario);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    if (configs.size() == 1) {
        detail::Outputs out;
        out.quiet = inv.quiet;
        if (!inv.out_dir.empty()) {
            out.dir = inv.out_dir;
            out.enabled = true;
            out.ensure();
        }
        return detail::guarded_dispatch(inv.subcommand, configs[0], out);
    }

    // independent sub-runs, one output directory per config, files only
    if (inv.out_dir.empty()) {
        std::cerr << "error: multiple configs need --out DIR\n";
        return kUsage;
    }
    std::vector<int> codes(configs.size(), 0);
    std::size_t next = 0;
    std::mutex mx;
    auto worker = [&]() {
        for (;;) {
            std::size_t mine;
            {
                std::lock_guard<std::mutex> lock(mx);
                if (next >= configs.size()) return;
                mine = next++;
            }
            detail::Outputs out;
            out.dir = std::filesystem::path(inv.out_dir) /
                      std::filesystem::path(inv.configs[mine]).stem();
            out.enabled = true;
            out.quiet = true;
            out.ensure();
            codes[mine] = detail::guarded_dispatch(inv.subcommand, configs[mine], out);
            std::lock_guard<std::mutex> lock(mx);
            std::cout << inv.configs[mine] << ": exit " << codes[mine] << "\n";
        }
    };
    std::vector<std::thread> pool;
    const int jobs = std::max(1, inv.jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    int worst = 0;
    for (int c : codes) worst = std::max(worst, c);
    return worst;
}

} // namespace shiftwave::cli

/*
 * Run configuration: a sectioned key = value text file.  Every key has a
 * documented default; unknown sections or keys are rejected so a typo
 * cannot silently fall back to a default.
 */
#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "shiftwave/bounds.hpp"
#include "shiftwave/cauchy.hpp"
#include "shiftwave/chain.hpp"
#include "shiftwave/errors.hpp"
#include "shiftwave/extinction.hpp"
#include "shiftwave/model.hpp"
#include "shiftwave/shift.hpp"
#include "shiftwave/system_solver.hpp"

namespace shiftwave {

struct SchemaEntry {
    const char* section;
    const char* key;
    const char* def;
    const char* description;
};

inline const std::vector<SchemaEntry>& config_schema() {
    static const std::vector<SchemaEntry> schema{
        {"model", "d", "1.0", "diffusion coefficient (> 0)"},
        {"model", "r1", "1.0", "weak prey intrinsic rate scale"},
        {"model", "r2", "1.0", "strong prey intrinsic rate scale"},
        {"model", "r3", "1.0", "predator rate scale"},
        {"model", "a", "2.0", "conversion rate (> 1 under the standing assumptions)"},
        {"model", "b", "0.1", "predation rate"},
        {"model", "h", "0.5", "competition on the weak prey (0 < h < 1)"},
        {"model", "k", "1.5", "competition on the strong prey (k > 1)"},
        {"model", "relax_standing", "false", "allow parameters outside a>1, 0<h<1<k"},
        {"shift", "family", "sigmoid", "sigmoid | sigmoid-bump | tabulated"},
        {"shift", "m", "2.0", "sigmoid amplitude (> 1)"},
        {"shift", "rho", "0.5", "left-tail envelope decay rate"},
        {"shift", "K", "0", "transition bound; 0 = family default"},
        {"shift", "C", "0", "envelope constant; 0 = family default"},
        {"shift", "bump_amplitude", "0", "signed Gaussian bump amplitude"},
        {"shift", "bump_center", "0", "bump center"},
        {"shift", "bump_width", "1.0", "bump width"},
        {"shift", "table", "", "two-column (z, alpha) file for the tabulated family"},
        {"run", "scenario", "eu", "eu | estar | estable | necessary-only"},
        {"run", "s", "2.5", "shift speed"},
        {"grid", "L", "0", "half-width; 0 = automatic"},
        {"grid", "n", "8001", "grid points (>= 401)"},
        {"solver", "tol", "1e-10", "Newton residual sup-norm tolerance"},
        {"solver", "max_iter", "200", "Newton iteration cap"},
        {"solver", "max_backtrack", "30", "line-search halvings"},
        {"solver", "sandwich_tol", "1e-8", "pointwise sandwich tolerance"},
        {"bounds", "slack", "1.05", "amplitude = slack * analytic lower bound"},
        {"bounds", "epsilon", "0", "working epsilon; 0 = min(0.01, window/2)"},
        {"bounds", "mu1", "0", "override auxiliary rate (0 = midpoint)"},
        {"bounds", "mu2", "0", "override auxiliary rate (0 = mu1)"},
        {"bounds", "nu1", "0", "override auxiliary rate (0 = midpoint)"},
        {"bounds", "q1", "0", "override amplitude (0 = slack * bound)"},
        {"bounds", "q2", "0", "override amplitude"},
        {"bounds", "q3", "0", "override amplitude"},
        {"bounds", "q4", "0", "override amplitude"},
        {"bounds", "eta1", "0", "override amplitude"},
        {"bounds", "eta2", "0", "override amplitude"},
        {"verify", "half_width", "60", "verification grid half-width"},
        {"verify", "n", "12001", "uniform verification points"},
        {"verify", "refine_radius", "1.0", "refined patch radius around kinks"},
        {"verify", "refine_factor", "10", "refinement density factor"},
        {"verify", "exclusion_radius", "1e-6", "kink exclusion radius"},
        {"verify", "tol", "1e-10", "residual sign tolerance"},
        {"chain", "n", "8001", "chain solve grid points"},
        {"chain", "n_verify", "32001", "chain numeric-profile sampling points"},
        {"chain", "left_check_offset", "5.0", "limit check offset from -L"},
        {"sim", "dt", "0", "time step; 0 = 0.25 / Lipschitz bound"},
        {"sim", "t_end", "50.0", "end time"},
        {"sim", "snapshot_every", "1.0", "snapshot cadence"},
        {"sim", "left_boundary", "pinned", "pinned | free | zero"},
        {"sim", "box_tol", "1e-10", "invariant-box breach tolerance"},
        {"sim", "extinction_threshold", "1e-4", "sup-norm extinction threshold"},
        {"sim", "extinction_dwell", "10.0", "dwell time below the threshold"},
        {"sim", "ic", "bounds-midpoint", "wave | bounds-midpoint | pulses | zero"},
        {"sim", "perturb", "0", "multiplicative noise amplitude on the initial state"},
        {"sim", "rng_seed", "12345", "noise seed"},
        {"extinction", "variant", "large-k", "large-k | subcritical-speed"},
        {"extinction", "pulse_amplitude_v", "0.5", "strong prey pulse height"},
        {"extinction", "pulse_amplitude_w", "0.5", "predator pulse height"},
        {"extinction", "pulse_half_width", "5.0", "pulse half-width"},
        {"extinction", "pulse_center_offset", "0", "pulse center relative to the transition"},
    };
    return schema;
}

class RunConfig {
public:
    RunConfig() {
        for (const auto& e : config_schema()) values_[key_of(e.section, e.key)] = e.def;
    }

    static RunConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config '" + path + "'");
        return from_stream(in, path);
    }

    static RunConfig from_stream(std::istream& in, const std::string& name = "<config>") {
        RunConfig cfg;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto semi = line.find(';');
            if (semi != std::string::npos) line.erase(semi);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(name + ":" + std::to_string(lineno) +
                                      ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!cfg.known_section(section))
                    throw ConfigError(name + ":" + std::to_string(lineno) +
                                      ": unknown section [" + section + "]");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(name + ":" + std::to_string(lineno) +
                                  ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) +
                                  ": key outside any section");
            const std::string full = key_of(section, key);
            if (cfg.values_.find(full) == cfg.values_.end())
                throw ConfigError(name + ":" + std::to_string(lineno) + ": unknown key '" +
                                  key + "' in section [" + section + "]");
            cfg.values_[full] = value;
        }
        return cfg;
    }

    std::string str(const std::string& section, const std::string& key) const {
        const auto it = values_.find(key_of(section, key));
        if (it == values_.end()) throw ConfigError("no such key " + section + "." + key);
        return it->second;
    }

    double num(const std::string& section, const std::string& key) const {
        const std::string v = str(section, key);
        std::size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw ConfigError(section + "." + key + ": '" + v + "' is not a number");
        }
        if (pos != v.size())
            throw ConfigError(section + "." + key + ": '" + v + "' is not a number");
        return out;
    }

    int integer(const std::string& section, const std::string& key) const {
        const double v = num(section, key);
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError(section + "." + key + ": expected an integer");
        return i;
    }

    bool flag(const std::string& section, const std::string& key) const {
        const std::string v = str(section, key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(section + "." + key + ": expected true/false");
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        const std::string full = key_of(section, key);
        if (values_.find(full) == values_.end())
            throw ConfigError("unknown key " + section + "." + key);
        values_[full] = value;
    }

    const std::map<std::string, std::string>& raw() const { return values_; }

    /* -------- typed views -------- */

    ModelParams model() const {
        ModelParams p;
        p.d = num("model", "d");
        p.r1 = num("model", "r1");
        p.r2 = num("model", "r2");
        p.r3 = num("model", "r3");
        p.a = num("model", "a");
        p.b = num("model", "b");
        p.h = num("model", "h");
        p.k = num("model", "k");
        p.relax_standing = flag("model", "relax_standing");
        p.validate();
        return p;
    }

    ShiftProfile shift() const {
        const std::string family = str("shift", "family");
        ShiftProfile sp;
        if (family == "sigmoid") {
            sp = make_sigmoid(num("shift", "m"), num("shift", "rho"), num("shift", "K"));
        } else if (family == "sigmoid-bump") {
            BumpParams bump{num("shift", "bump_amplitude"), num("shift", "bump_center"),
                            num("shift", "bump_width")};
            sp = make_sigmoid_bump(num("shift", "m"), num("shift", "rho"), bump,
                                   num("shift", "K"));
        } else if (family == "tabulated") {
            const std::string table = str("shift", "table");
            if (table.empty()) throw ConfigError("tabulated shift needs shift.table");
            sp = load_tabulated(table, num("shift", "rho"));
        } else {
            throw ConfigError("unknown shift family '" + family + "'");
        }
        if (num("shift", "C") > 0.0) sp.C = num("shift", "C");
        return sp;
    }

    Scenario scenario() const { return parse_scenario(str("run", "scenario")); }
    double speed() const { return num("run", "s"); }

    BoundOptions bound_options() const {
        BoundOptions o;
        o.slack = num("bounds", "slack");
        o.epsilon = num("bounds", "epsilon");
        o.mu1 = num("bounds", "mu1");
        o.mu2 = num("bounds", "mu2");
        o.nu1 = num("bounds", "nu1");
        o.q1 = num("bounds", "q1");
        o.q2 = num("bounds", "q2");
        o.q3 = num("bounds", "q3");
        o.q4 = num("bounds", "q4");
        o.eta1 = num("bounds", "eta1");
        o.eta2 = num("bounds", "eta2");
        return o;
    }

    VerifyGridOptions verify_options() const {
        VerifyGridOptions o;
        o.half_width = num("verify", "half_width");
        o.n = integer("verify", "n");
        o.refine_radius = num("verify", "refine_radius");
        o.refine_factor = integer("verify", "refine_factor");
        o.exclusion_radius = num("verify", "exclusion_radius");
        return o;
    }

    SolveConfig solve_config() const {
        SolveConfig c;
        c.tol = num("solver", "tol");
        c.max_iter = integer("solver", "max_iter");
        c.max_backtrack = integer("solver", "max_backtrack");
        c.sandwich_tol = num("solver", "sandwich_tol");
        return c;
    }

    ChainConfig chain_config() const {
        ChainConfig c;
        c.n = integer("chain", "n");
        c.n_verify = integer("chain", "n_verify");
        c.left_check_offset = num("chain", "left_check_offset");
        c.newton = solve_config();
        c.grid_L = num("grid", "L");
        return c;
    }

    SimConfig sim_config() const {
        SimConfig c;
        c.dt = num("sim", "dt");
        c.t_end = num("sim", "t_end");
        c.snapshot_every = num("sim", "snapshot_every");
        const std::string lb = str("sim", "left_boundary");
        if (lb == "pinned")
            c.left = LeftBoundary::Pinned;
        else if (lb == "free")
            c.left = LeftBoundary::Free;
        else if (lb == "zero")
            c.left = LeftBoundary::Zero;
        else
            throw ConfigError("unknown sim.left_boundary '" + lb + "'");
        c.box_tol = num("sim", "box_tol");
        c.extinction_threshold = num("sim", "extinction_threshold");
        c.extinction_dwell = num("sim", "extinction_dwell");
        return c;
    }

    ExtinctionConfig extinction_config() const {
        ExtinctionConfig c;
        c.sim = sim_config();
        c.chain = chain_config();
        c.pulse.amplitude_v = num("extinction", "pulse_amplitude_v");
        c.pulse.amplitude_w = num("extinction", "pulse_amplitude_w");
        c.pulse.half_width = num("extinction", "pulse_half_width");
        c.pulse.center_offset = num("extinction", "pulse_center_offset");
        c.scenario = scenario();
        return c;
    }

    static std::string print_schema() {
        std::ostringstream os;
        std::string last;
        for (const auto& e : config_schema()) {
            if (last != e.section) {
                os << "[" << e.section << "]\n";
                last = e.section;
            }
            char buf[160];
            std::snprintf(buf, sizeof buf, "  %-22s = %-10s # %s\n", e.key, e.def,
                          e.description);
            os << buf;
        }
        return os.str();
    }

private:
    static std::string key_of(const std::string& section, const std::string& key) {
        return section + "." + key;
    }
    bool known_section(const std::string& s) const {
        for (const auto& e : config_schema())
            if (s == e.section) return true;
        return false;
    }
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

} // namespace shiftwave

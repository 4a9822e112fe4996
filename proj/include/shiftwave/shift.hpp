/*
 * Shifting heterogeneity alpha: a negative, bounded profile favorable on the
 * left, lethal on the right, with an exponential envelope on the left tail:
 *
 *   alpha(z) >= -C e^(rho z)  for z <= -K,      alpha(z) < -1  for z >= K.
 *
 * The translation state M turns the envelope into the normalized form
 * alpha(z) >= -eps e^(rho z) for z < 0 used by the bound constructions.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "shiftwave/errors.hpp"

namespace shiftwave {

enum class ShiftFamily { Sigmoid, SigmoidBump, Tabulated };

struct BumpParams {
    double amplitude = 0.0; // signed; negative values dig a dip, positive push up
    double center = 0.0;
    double width = 1.0;
};

struct ShiftProfile {
    ShiftFamily family = ShiftFamily::Sigmoid;
    double m = 2.0;      // sigmoid amplitude, must exceed 1 for a valid profile
    double rho = 0.5;    // envelope decay rate
    double K = 0.0;      // transition location bound
    double C = 0.0;      // envelope constant
    double offset = 0.0; // translation M: evaluated profile is alpha0(z - offset)
    BumpParams bump;
    std::vector<double> tab_z;     // tabulated family only
    std::vector<double> tab_alpha;

    double base(double z) const {
        switch (family) {
            case ShiftFamily::Sigmoid:
                return -m / (1.0 + std::exp(-rho * z));
            case ShiftFamily::SigmoidBump: {
                const double t = (z - bump.center) / bump.width;
                return -m / (1.0 + std::exp(-rho * z)) + bump.amplitude * std::exp(-t * t);
            }
            case ShiftFamily::Tabulated: {
                if (z <= tab_z.front()) return tab_alpha.front();
                if (z >= tab_z.back()) return tab_alpha.back();
                auto it = std::upper_bound(tab_z.begin(), tab_z.end(), z);
                const std::size_t i = static_cast<std::size_t>(it - tab_z.begin());
                const double t = (z - tab_z[i - 1]) / (tab_z[i] - tab_z[i - 1]);
                return tab_alpha[i - 1] + t * (tab_alpha[i] - tab_alpha[i - 1]);
            }
        }
        return 0.0;
    }

    // alpha evaluated in the current (translated) frame
    double operator()(double z) const { return base(z - offset); }

    double sup_abs() const {
        if (family == ShiftFamily::Tabulated) {
            double s = 0.0;
            for (double v : tab_alpha) s = std::max(s, std::abs(v));
            return s;
        }
        return m + std::max(0.0, -bump.amplitude);
    }
};

inline ShiftProfile make_sigmoid(double m, double rho, double K = 0.0) {
    if (!(rho > 0.0)) throw ConfigError("shift: rho must be positive");
    if (!(m > 0.0)) throw ConfigError("shift: m must be positive");
    ShiftProfile p;
    p.family = ShiftFamily::Sigmoid;
    p.m = m;
    p.rho = rho;
    p.C = m; // -m sigma(rho z) >= -m e^(rho z) for all z <= 0
    // default K: where the profile reaches the midpoint between -1 and -m
    p.K = K > 0.0 ? K : (m > 1.0 ? std::log((m + 1.0) / (m - 1.0)) / rho : 1.0 / rho);
    return p;
}

inline ShiftProfile make_sigmoid_bump(double m, double rho, const BumpParams& bump,
                                      double K = 0.0) {
    ShiftProfile p = make_sigmoid(m, rho, K);
    p.family = ShiftFamily::SigmoidBump;
    p.bump = bump;
    // a dip of depth |A| at center z0 tightens the envelope constant by its
    // exponentially-weighted supremum (complete the square in the exponent)
    if (bump.amplitude < 0.0)
        p.C = m + (-bump.amplitude) *
                      std::exp(-rho * bump.center + 0.25 * rho * rho * bump.width * bump.width);
    return p;
}

/*
 * Two-column text table (z, alpha), strictly increasing z, at least 4 rows.
 * '#' starts a comment.  The envelope constants are measured on the table
 * for the supplied rho; extrapolation holds the end values.
 */
inline ShiftProfile load_tabulated(std::istream& in, double rho) {
    if (!(rho > 0.0)) throw ConfigError("tabulated shift: rho must be positive");
    ShiftProfile p;
    p.family = ShiftFamily::Tabulated;
    p.rho = rho;
    p.m = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double z, a;
        if (ls >> z >> a) {
            if (!p.tab_z.empty() && z <= p.tab_z.back())
                throw ConfigError("tabulated shift: z values must be strictly increasing");
            p.tab_z.push_back(z);
            p.tab_alpha.push_back(a);
        }
    }
    if (p.tab_z.size() < 4) throw ConfigError("tabulated shift: need at least 4 rows");
    p.m = -p.tab_alpha.back(); // right-end level, used for carrying-capacity caps
    // smallest K beyond which all tabulated values sit below -1
    std::size_t i = p.tab_z.size();
    while (i > 0 && p.tab_alpha[i - 1] < -1.0) --i;
    p.K = (i < p.tab_z.size()) ? std::max(1e-6, p.tab_z[i]) : p.tab_z.back();
    // envelope constant measured on the interpolant, not just the nodes: the
    // chords sag below a concave exponential tail between them.  On a linear
    // segment a z + b the ratio -(a z + b) e^(-rho z) peaks at z = 1/rho - b/a,
    // so the per-segment maximum is exact.
    double c = 0.0;
    auto ratio = [&](double z) { return -p.base(z) * std::exp(-rho * z); };
    for (std::size_t j = 0; j + 1 < p.tab_z.size(); ++j) {
        const double zl = p.tab_z[j], zr = p.tab_z[j + 1];
        if (zl > -p.K) break;
        c = std::max(c, ratio(zl));
        if (zr <= -p.K) c = std::max(c, ratio(zr));
        const double a = (p.tab_alpha[j + 1] - p.tab_alpha[j]) / (zr - zl);
        if (a != 0.0) {
            const double b = p.tab_alpha[j] - a * zl;
            const double zc = 1.0 / rho - b / a;
            if (zc > zl && zc < zr && zc <= -p.K) c = std::max(c, ratio(zc));
        }
    }
    p.C = c > 0.0 ? c : 1.0;
    return p;
}

inline ShiftProfile load_tabulated(const std::string& path, double rho) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open shift table '" + path + "'");
    return load_tabulated(in, rho);
}

/*
 * Translate so that alpha(z) >= -eps e^(rate z) holds for all z < 0.
 * Sets the absolute offset M = max(K, ln(C/eps)/rate); idempotent for equal
 * eps and monotone in it (smaller eps, larger M).  `rate` defaults to the
 * profile's own rho; the bound constructions pass their scenario rate, which
 * is admissible whenever it does not exceed rho.
 */
inline ShiftProfile normalize_translation(ShiftProfile p, double epsilon, double rate = 0.0) {
    if (!(epsilon > 0.0)) throw ConfigError("normalize_translation: epsilon must be positive");
    if (rate == 0.0) rate = p.rho;
    if (!(rate > 0.0) || rate > p.rho * (1.0 + 1e-12))
        throw ConfigError("normalize_translation: rate must lie in (0, rho]");
    p.offset = std::max(p.K, std::log(p.C / epsilon) / rate);
    return p;
}

struct EnvelopeReport {
    double margin_negativity = 0.0; // min of -alpha over the grid
    double margin_envelope = 0.0;   // min of alpha + C e^(rho z) over z <= -K
    double margin_lethal = 0.0;     // min of -1 - alpha over z >= K
    double inf_alpha = 0.0;
    bool finite = true;
    bool pass = false;
    std::string first_failure;
};

inline std::vector<double> default_envelope_grid(const ShiftProfile& p, int n = 10000) {
    const double half = 10.0 * std::max(p.K, 1.0) + std::abs(p.offset);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = -half + 2.0 * half * i / (n - 1);
    return g;
}

/*
 * Grid-sampled check of the profile's defining conditions, in the *base*
 * frame (the conditions are translation invariant).  Margins are signed:
 * nonnegative means the condition holds at every sampled point.
 */
inline EnvelopeReport verify_envelope(const ShiftProfile& p, const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("verify_envelope: empty grid");
    EnvelopeReport r;
    double worst_neg = std::numeric_limits<double>::infinity();
    double worst_env = std::numeric_limits<double>::infinity();
    double worst_lethal = std::numeric_limits<double>::infinity();
    double inf_alpha = std::numeric_limits<double>::infinity();
    for (double z : grid) {
        const double a = p.base(z);
        if (!std::isfinite(a)) r.finite = false;
        inf_alpha = std::min(inf_alpha, a);
        worst_neg = std::min(worst_neg, -a);
        if (z <= -p.K) worst_env = std::min(worst_env, a + p.C * std::exp(p.rho * z));
        if (z >= p.K) worst_lethal = std::min(worst_lethal, -1.0 - a);
    }
    r.margin_negativity = worst_neg;
    r.margin_envelope = std::isfinite(worst_env) ? worst_env : 0.0;
    r.margin_lethal = std::isfinite(worst_lethal) ? worst_lethal : 0.0;
    r.inf_alpha = inf_alpha;
    const double tol = -1e-12;
    r.pass = r.finite && r.margin_negativity >= tol && r.margin_envelope >= tol &&
             r.margin_lethal >= tol;
    if (!r.finite)
        r.first_failure = "nonfinite value";
    else if (r.margin_negativity < tol)
        r.first_failure = "alpha < 0";
    else if (r.margin_envelope < tol)
        r.first_failure = "left-tail envelope";
    else if (r.margin_lethal < tol)
        r.first_failure = "alpha < -1 beyond K";
    return r;
}

inline EnvelopeReport verify_envelope(const ShiftProfile& p) {
    return verify_envelope(p, default_envelope_grid(p));
}

/*
 * Worst margin of the normalized condition alpha(z) >= -eps e^(rate z) over
 * the sampled z < 0, in the translated frame.
 */
inline double normalized_margin(const ShiftProfile& p, double epsilon, double rate,
                                const std::vector<double>& grid) {
    double worst = std::numeric_limits<double>::infinity();
    for (double z : grid)
        if (z < 0.0) worst = std::min(worst, p(z) + epsilon * std::exp(rate * z));
    return worst;
}

} // namespace shiftwave

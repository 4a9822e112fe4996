/*
 * Scalar forced wave by monotone iteration:
 *
 *   d phi'' - s phi' + r phi (gamma + alpha_hat(z) - phi) = 0,
 *   phi(-inf) = gamma,  phi(+inf) = 0,
 *
 * for a negative bounded heterogeneity alpha_hat with a left exponential
 * envelope of rate rho.  Iteration starts from the constant super-solution
 * gamma and descends through solves of the linear penalized problem
 *
 *   d psi'' - s psi' - P psi = -(r phi_n (gamma + alpha_hat - phi_n) + P phi_n),
 *
 * with P exceeding the reaction's Lipschitz constant on [0, gamma], so the
 * iterates decrease pointwise and converge to the maximal solution below
 * gamma.  The exponential sub-solution gamma (1 - e^(lambda0 (z - anchor)))
 * is verified on the grid afterwards: anchor 0 when alpha_hat satisfies the
 * epsilon-envelope at the origin, shifted left otherwise (composite
 * heterogeneities from the chain carry a larger envelope constant).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "shiftwave/errors.hpp"
#include "shiftwave/grid.hpp"
#include "shiftwave/tridiag.hpp"

namespace shiftwave {

struct ScalarWaveConfig {
    double epsilon = 0.01;   // target envelope epsilon; shrunk automatically if needed
    double iter_tol = 1e-12; // sup-norm of successive differences
    int max_iter = 20000;
    double residual_tol = 1e-10;
    bool require_envelope = true; // throw if the epsilon-envelope fails on the grid
};

struct ScalarWave {
    Grid grid;
    std::vector<double> phi;
    double d = 0.0, s = 0.0, r = 0.0, gamma = 0.0;
    double rho = 0.0;     // envelope rate of alpha_hat
    double epsilon = 0.0; // working epsilon actually used
    double lambda0 = 0.0; // sub-solution decay rate
    double anchor = 0.0;  // sub-solution anchor (<= 0)
    double penalty = 0.0;
    double residual_sup = 0.0;
    double subsolution_margin = 0.0; // min of phi - gamma(1 - e^(lambda0 (z-anchor)))
    double envelope_constant = 0.0;  // measured sup of -alpha_hat e^(-rho z) over z < 0
    int iterations = 0;

    double value(double z) const {
        // linear interpolation, clamped to the end values
        if (z <= grid.left()) return phi.front();
        if (z >= grid.right()) return phi.back();
        const double t = (z - grid.left()) / grid.spacing();
        const auto i = static_cast<std::size_t>(t);
        const double f = t - static_cast<double>(i);
        return phi[i] * (1.0 - f) + phi[i + 1] * f;
    }
};

namespace detail {

// largest root of d x^2 - s x + r eps (exists whenever eps < s^2/(4 d r))
inline double penalized_root(double d, double s, double r, double eps) {
    const double disc = s * s - 4.0 * d * r * eps;
    if (disc <= 0.0) return 0.0;
    return (s + std::sqrt(disc)) / (2.0 * d);
}

// sub-solution rate below min(rho, s/d), shrinking eps until the strict
// inequality d l0^2 - s l0 + r eps < 0 holds
inline std::pair<double, double> choose_lambda0(double d, double s, double r, double rho,
                                                double eps) {
    const double lam_cap = 0.999999 * std::min(rho, s / d);
    double lam0 = lam_cap;
    for (int tries = 0; tries < 200; ++tries) {
        const double lam_eps = penalized_root(d, s, r, eps);
        lam0 = std::min(lam_cap, 0.999999 * lam_eps);
        if (lam0 > 0.0 && d * lam0 * lam0 - s * lam0 + r * eps < 0.0) return {lam0, eps};
        eps *= 0.5;
    }
    throw ConfigError("could not place the scalar sub-solution rate");
}

} // namespace detail

inline ScalarWave solve_scalar_wave(double d, double s, double r, double gamma,
                                    const std::function<double(double)>& alpha_hat,
                                    double rho, const Grid& grid,
                                    const ScalarWaveConfig& cfg = {}) {
    if (!(d > 0.0) || !(s > 0.0) || !(r > 0.0))
        throw ConfigError("solve_scalar_wave: d, s, r must be positive");
    if (!(rho > 0.0)) throw ConfigError("solve_scalar_wave: rho must be positive");
    if (gamma < 0.0) throw GammaOutOfRange("carrying capacity must be nonnegative");
    if (grid.spacing() >= 2.0 * d / s)
        throw ConfigError("solve_scalar_wave: grid too coarse for the drift (need h < 2d/s)");

    const int n = grid.n;
    const auto un = static_cast<std::size_t>(n);
    ScalarWave out;
    out.grid = grid;
    out.d = d;
    out.s = s;
    out.r = r;
    out.gamma = gamma;
    out.rho = rho;

    // sample alpha_hat once; measure its bound and right-end level
    std::vector<double> al(un);
    double sup_abs_alpha = 0.0;
    for (int i = 0; i < n; ++i) {
        al[static_cast<std::size_t>(i)] = alpha_hat(grid.z(i));
        if (!std::isfinite(al[static_cast<std::size_t>(i)]))
            throw NonfiniteValue("alpha_hat nonfinite on the grid");
        if (al[static_cast<std::size_t>(i)] >= 0.0)
            throw EnvelopeUnverified("alpha_hat must be negative on the whole grid");
        sup_abs_alpha = std::max(sup_abs_alpha, std::abs(al[static_cast<std::size_t>(i)]));
    }
    double right_level = -std::numeric_limits<double>::infinity();
    for (int i = n - std::max(2, n / 20); i < n; ++i)
        right_level = std::max(right_level, al[static_cast<std::size_t>(i)]);
    right_level = -right_level; // -limsup of alpha_hat, measured over the last 5%
    if (gamma >= right_level)
        throw GammaOutOfRange("gamma = " + std::to_string(gamma) +
                              " must stay below the right-end lethality " +
                              std::to_string(right_level));

    // choose lambda0 < min(rho, s/d) and epsilon with d l0^2 - s l0 + r eps < 0
    const auto [lam0, eps] = detail::choose_lambda0(d, s, r, rho, cfg.epsilon);
    out.lambda0 = lam0;
    out.epsilon = eps;

    // measured envelope constant at anchor 0; anchor moves left if it
    // exceeds the admissible epsilon
    double c_meas = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = grid.z(i);
        if (z < 0.0) c_meas = std::max(c_meas, -al[static_cast<std::size_t>(i)] * std::exp(-rho * z));
    }
    out.envelope_constant = c_meas;
    if (c_meas <= eps) {
        out.anchor = 0.0;
    } else {
        out.anchor = -std::log(c_meas / eps) / rho;
        if (cfg.require_envelope && out.anchor < grid.left())
            throw EnvelopeUnverified("heterogeneity envelope too large for this grid: "
                                     "measured constant " +
                                     std::to_string(c_meas));
    }

    // monotone iteration from the constant super-solution
    const double P = r * (2.0 * gamma + sup_abs_alpha + 1.0);
    out.penalty = P;
    const double h = grid.spacing();
    const double w2 = d / (h * h);
    const double w1 = s / (2.0 * h);
    std::vector<double> lo(un, w2 + w1), di(un, -2.0 * w2 - P), up(un, w2 - w1);
    std::vector<double> rhs(un), scratch;
    // Dirichlet rows
    lo.front() = lo.back() = up.front() = up.back() = 0.0;
    di.front() = di.back() = 1.0;

    std::vector<double> phi(un, gamma), next(un);
    phi.back() = 0.0;
    int iter = 0;
    double diff = 0.0;
    for (iter = 1; iter <= cfg.max_iter; ++iter) {
        rhs.front() = gamma;
        rhs.back() = 0.0;
        for (std::size_t i = 1; i + 1 < un; ++i) {
            const double f = r * phi[i] * (gamma + al[i] - phi[i]);
            rhs[i] = -(f + P * phi[i]);
        }
        next = rhs;
        solve_tridiag(lo, di, up, next, scratch);
        diff = 0.0;
        double rise = 0.0;
        for (std::size_t i = 0; i < un; ++i) {
            diff = std::max(diff, std::abs(next[i] - phi[i]));
            rise = std::max(rise, next[i] - phi[i]);
        }
        if (rise > 1e-12 * std::max(1.0, gamma))
            throw IterationStall("monotone iteration rose by " + std::to_string(rise) +
                                 "; a precondition is violated");
        phi.swap(next);
        if (diff < cfg.iter_tol) break;
    }
    if (iter > cfg.max_iter)
        throw MaxIterations("monotone iteration did not reach tolerance (last diff " +
                            std::to_string(diff) + ")");
    out.iterations = iter;
    // rounding-level projection onto the invariant box [0, gamma]; without it
    // a +1 ulp overshoot of gamma can flip the sign of composite
    // heterogeneities built from (phi - gamma) where alpha is vanishingly small
    for (double& v : phi) v = std::clamp(v, 0.0, gamma);
    out.phi = std::move(phi);

    // checks: discrete residual, box, verified sub-solution bound
    double res = 0.0;
    const long double hl = h;
    for (std::size_t i = 1; i + 1 < un; ++i) {
        const long double lm = out.phi[i - 1], mid = out.phi[i], rp = out.phi[i + 1];
        const long double lap = ((lm - mid) + (rp - mid)) / (hl * hl);
        const long double drift = (rp - lm) / (2.0L * hl);
        const long double rr =
            d * lap - s * drift + r * out.phi[i] * (gamma + al[i] - out.phi[i]);
        res = std::max(res, static_cast<double>(std::abs(rr)));
    }
    out.residual_sup = res;

    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double z = grid.z(i);
        if (z < out.anchor)
            margin = std::min(margin, out.phi[static_cast<std::size_t>(i)] -
                                          gamma * (1.0 - std::exp(lam0 * (z - out.anchor))));
    }
    out.subsolution_margin = std::isfinite(margin) ? margin : 0.0;
    return out;
}

} // namespace shiftwave

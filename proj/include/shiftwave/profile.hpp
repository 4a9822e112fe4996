/*
 * Piecewise profiles with exact derivatives.
 *
 * Closed-form pieces are sums of terms  c * (-z)^beta * e^(lambda z)  with
 * beta in {0, 1/2, 1}; this basis covers every bound formula in use:
 * constants, exponentials, z e^(lambda z) and sqrt(|z|) e^(lambda z).
 * Numeric profiles carry grid samples with a natural cubic spline whose
 * derivative error is O(h^2) (first and second order alike), h the sample
 * spacing; residual checks against sampled profiles use a relaxed tolerance
 * for that reason.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "shiftwave/errors.hpp"
#include "shiftwave/tridiag.hpp"

namespace shiftwave {

enum class Side { Left, Right };

struct ProfileTerm {
    double coef = 0.0;
    double beta = 0.0;   // exponent of (-z); fractional beta requires z < 0
    double lambda = 0.0; // exponent rate

    double eval(double z, int order) const {
        const double e = std::exp(lambda * z);
        if (beta == 0.0) {
            switch (order) {
                case 0: return coef * e;
                case 1: return coef * lambda * e;
                default: return coef * lambda * lambda * e;
            }
        }
        const double x = -z; // beta > 0 pieces live on z < 0
        auto powx = [&](double p) {
            if (p == 0.0) return 1.0;
            if (p == 1.0) return x;
            return std::pow(x, p);
        };
        switch (order) {
            case 0: return coef * powx(beta) * e;
            case 1: return coef * e * (lambda * powx(beta) - beta * powx(beta - 1.0));
            default:
                return coef * e *
                       (lambda * lambda * powx(beta) - 2.0 * lambda * beta * powx(beta - 1.0) +
                        beta * (beta - 1.0) * powx(beta - 2.0));
        }
    }
};

struct ProfilePiece {
    std::vector<ProfileTerm> terms;

    double eval(double z, int order) const {
        double s = 0.0;
        for (const auto& t : terms) s += t.eval(z, order);
        return s;
    }
};

class PiecewiseProfile {
public:
    PiecewiseProfile() { pieces_.push_back({}); }

    static PiecewiseProfile constant(double c) {
        PiecewiseProfile p;
        p.pieces_[0].terms.push_back({c, 0.0, 0.0});
        return p;
    }

    // pieces.size() must equal breaks.size() + 1; breaks strictly increasing
    static PiecewiseProfile closed_form(std::vector<double> breaks,
                                        std::vector<ProfilePiece> pieces) {
        if (pieces.size() != breaks.size() + 1)
            throw ConfigError("piecewise profile: need one more piece than breakpoints");
        for (std::size_t i = 1; i < breaks.size(); ++i)
            if (!(breaks[i] > breaks[i - 1]))
                throw ConfigError("piecewise profile: breakpoints must increase");
        PiecewiseProfile p;
        p.breaks_ = std::move(breaks);
        p.pieces_ = std::move(pieces);
        return p;
    }

    // numeric profile on strictly increasing samples; constant extrapolation
    static PiecewiseProfile sampled(std::vector<double> z, std::vector<double> v) {
        if (z.size() != v.size() || z.size() < 4)
            throw ConfigError("sampled profile: need at least 4 matching samples");
        PiecewiseProfile p;
        p.sampled_z_ = std::move(z);
        p.sampled_v_ = std::move(v);
        p.build_spline();
        return p;
    }

    bool is_sampled() const { return !sampled_z_.empty(); }
    const std::vector<double>& breakpoints() const { return breaks_; }

    double operator()(double z) const { return eval(z, 0); }

    double eval(double z, int order) const {
        if (is_sampled()) return eval_spline(z, order);
        const std::size_t i = piece_index(z);
        if (order >= 1) {
            for (double b : breaks_)
                if (z == b)
                    throw BreakpointDerivative(
                        "derivative requested at breakpoint z = " + std::to_string(b) +
                        "; use the one-sided variant");
        }
        return pieces_[i].eval(z, order);
    }

    double eval_side(double z, int order, Side side) const {
        if (is_sampled()) return eval_spline(z, order);
        std::size_t i = piece_index(z);
        for (std::size_t bi = 0; bi < breaks_.size(); ++bi) {
            if (z == breaks_[bi]) {
                i = (side == Side::Left) ? bi : bi + 1;
                break;
            }
        }
        return pieces_[i].eval(z, order);
    }

    // limit at -infinity: constant terms of the leftmost piece
    double limit_left() const {
        if (is_sampled()) return sampled_v_.front();
        double s = 0.0;
        for (const auto& t : pieces_.front().terms)
            if (t.lambda == 0.0 && t.beta == 0.0) s += t.coef;
        return s;
    }

    double limit_right() const {
        if (is_sampled()) return sampled_v_.back();
        double s = 0.0;
        for (const auto& t : pieces_.back().terms) {
            if (t.lambda == 0.0 && t.beta == 0.0)
                s += t.coef;
            else if (t.lambda > 0.0)
                throw ConfigError("profile unbounded at +infinity");
        }
        return s;
    }

private:
    std::size_t piece_index(double z) const {
        std::size_t i = 0;
        while (i < breaks_.size() && z >= breaks_[i]) ++i;
        return i;
    }

    void build_spline() {
        // natural cubic spline second-derivative moments
        const std::size_t n = sampled_z_.size();
        std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = sampled_z_[i] - sampled_z_[i - 1];
            const double hr = sampled_z_[i + 1] - sampled_z_[i];
            lo[i] = hl / 6.0;
            di[i] = (hl + hr) / 3.0;
            up[i] = hr / 6.0;
            rhs[i] = (sampled_v_[i + 1] - sampled_v_[i]) / hr -
                     (sampled_v_[i] - sampled_v_[i - 1]) / hl;
        }
        std::vector<double> scratch;
        solve_tridiag(lo, di, up, rhs, scratch);
        spline_m_ = std::move(rhs);
    }

    double eval_spline(double z, int order) const {
        const auto& zs = sampled_z_;
        const auto& vs = sampled_v_;
        if (z <= zs.front()) return order == 0 ? vs.front() : 0.0;
        if (z >= zs.back()) return order == 0 ? vs.back() : 0.0;
        const auto it = std::upper_bound(zs.begin(), zs.end(), z);
        const std::size_t i = static_cast<std::size_t>(it - zs.begin()) - 1;
        const double h = zs[i + 1] - zs[i];
        const double A = (zs[i + 1] - z) / h;
        const double B = 1.0 - A;
        const double Ml = spline_m_[i], Mr = spline_m_[i + 1];
        switch (order) {
            case 0:
                return A * vs[i] + B * vs[i + 1] +
                       ((A * A * A - A) * Ml + (B * B * B - B) * Mr) * h * h / 6.0;
            case 1:
                return (vs[i + 1] - vs[i]) / h +
                       (-(3.0 * A * A - 1.0) * Ml + (3.0 * B * B - 1.0) * Mr) * h / 6.0;
            default:
                return A * Ml + B * Mr;
        }
    }

    std::vector<double> breaks_;
    std::vector<ProfilePiece> pieces_;
    std::vector<double> sampled_z_, sampled_v_, spline_m_;
};

} // namespace shiftwave

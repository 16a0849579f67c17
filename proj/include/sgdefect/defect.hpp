#pragma once

// Frozen Backlund defect at x = 0: defect pairs, the defect matrix L, defect monodromies,
// generating-function relations, the defect Lagrangian and its canonical residuals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sgdefect/charges.hpp"
#include "sgdefect/errors.hpp"
#include "sgdefect/fields.hpp"
#include "sgdefect/lax.hpp"
#include "sgdefect/matcore.hpp"
#include "sgdefect/quadrature.hpp"
#include "sgdefect/transition.hpp"

namespace sgdefect {

struct DefectParams {
    double sigma = 1.0;

    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("DefectParams: sigma must be positive");
    }
};

/// Left field (x < 0, written with a tilde) and right field (x > 0).
struct DefectPair {
    FieldEvaluator left;
    FieldEvaluator right;
    ModelParams params;
    DefectParams defect;
};

/// sin(beta (phit + phi)/2), sin(beta (phit - phi)/2).
struct HalfAngles {
    double s_plus, s_minus, c_plus, c_minus;
};

inline HalfAngles half_angles(const ModelParams& p, double phi, double phit) {
    const double a = 0.5 * p.beta * (phit + phi), b = 0.5 * p.beta * (phit - phi);
    return {std::sin(a), std::sin(b), std::cos(a), std::cos(b)};
}

/// Defect potential B(phi, phit).
inline double b_density(const ModelParams& p, const DefectParams& d, double phi, double phit) {
    const auto h = half_angles(p, phi, phit);
    return 2.0 * p.m / (p.beta * p.beta) * (d.sigma * h.c_plus + h.c_minus / d.sigma);
}

/// dB/dphi and dB/dphit.
inline std::pair<double, double> b_gradient(const ModelParams& p, const DefectParams& d, double phi, double phit) {
    const auto h = half_angles(p, phi, phit);
    const double k = p.m / p.beta;
    return {k * (-d.sigma * h.s_plus + h.s_minus / d.sigma), k * (-d.sigma * h.s_plus - h.s_minus / d.sigma)};
}

/// Max of the two defect-condition residuals at (0, t).
inline double defect_condition_residual(const DefectPair& pr, double t) {
    const FieldSample r = pr.right.sample(0.0, t), l = pr.left.sample(0.0, t);
    const auto h = half_angles(pr.params, r.phi, l.phi);
    const double k = pr.params.m / pr.params.beta, s = pr.defect.sigma;
    const double r1 = l.phi_x - r.phi_t - k * (s * h.s_plus + h.s_minus / s);
    const double r2 = l.phi_t - r.phi_x - k * (s * h.s_plus - h.s_minus / s);
    return std::max(std::abs(r1), std::abs(r2));
}

/// Vacuum on the left, the Backlund-partner kink on the right (orientation -1,
/// v = (1 - sigma^2)/(1 + sigma^2)).
inline DefectPair bt_kink_from_vacuum(const ModelParams& p, const DefectParams& d, double x0) {
    d.validate();
    const double v = (1.0 - d.sigma * d.sigma) / (1.0 + d.sigma * d.sigma);
    return {make_vacuum(p), make_kink(p, v, x0, -1), p, d};
}

inline DefectPair vacuum_pair(const ModelParams& p, const DefectParams& d) {
    d.validate();
    return {make_vacuum(p), make_vacuum(p), p, d};
}

struct BacklundResult {
    FieldEvaluator field;
    double compatibility_residual = 0.0;
    double sg_residual = 0.0;
};

namespace detail {

inline double d4(const std::vector<double>& a, std::size_t i, std::size_t stride, double h) {
    return (-a[i + 2 * stride] + 8.0 * a[i + stride] - 8.0 * a[i - stride] + a[i - 2 * stride]) / (12.0 * h);
}

inline std::size_t node_of(double s, double lo, double h, std::size_t n, const char* what) {
    const double f = (s - lo) / h;
    const double r = std::round(f);
    if (std::abs(f - r) > 1e-9 || r < 0.0 || r > static_cast<double>(n - 1))
        throw ArgumentError(std::string("backlund_integrate: corner ") + what + " must be a grid node");
    return static_cast<std::size_t>(r);
}

} // namespace detail

/// Max over interior nodes of |D_t phi_x - D_x phi_t| and of the sine-Gordon residual, by 4th-order differences.
inline std::pair<double, double> grid_residuals(const ModelParams& p, const GridField& g) {
    double compat = 0.0, sg = 0.0;
    if (g.nx < 5 || g.nt < 5) throw ArgumentError("grid_residuals: need at least 5 nodes per axis");
    for (std::size_t it = 2; it + 2 < g.nt; ++it)
        for (std::size_t ix = 2; ix + 2 < g.nx; ++ix) {
            const std::size_t i = g.index(it, ix);
            const double dt_px = detail::d4(g.phi_x, i, g.nx, g.ht);
            const double dx_pt = detail::d4(g.phi_t, i, 1, g.hx);
            const double tt = detail::d4(g.phi_t, i, g.nx, g.ht);
            const double xx = detail::d4(g.phi_x, i, 1, g.hx);
            compat = std::max(compat, std::abs(dt_px - dx_pt));
            sg = std::max(sg, std::abs(tt - xx + (p.m * p.m / p.beta) * std::sin(p.beta * g.phi[i])));
        }
    return {compat, sg};
}

/// Integrates the Backlund system for phi with phit = seed, first along t = t0 then along each x,
/// with `substeps` RK4 steps per grid cell.
inline BacklundResult backlund_integrate(const FieldEvaluator& seed, const DefectParams& d, double x0, double t0,
                                         double phi0, const GridWindow& w, std::size_t substeps = 1,
                                         double compatibility_limit = 1e-4) {
    d.validate();
    w.validate();
    if (substeps < 1) throw ArgumentError("backlund_integrate: substeps must be >= 1");
    const ModelParams& p = seed.params();
    const double k = p.m / p.beta, s = d.sigma;
    auto rhs_x = [&](double x, double t, double phi) {
        const FieldSample l = seed.sample(x, t);
        const auto h = half_angles(p, phi, l.phi);
        return l.phi_t - k * (s * h.s_plus - h.s_minus / s);
    };
    auto rhs_t = [&](double x, double t, double phi) {
        const FieldSample l = seed.sample(x, t);
        const auto h = half_angles(p, phi, l.phi);
        return l.phi_x - k * (s * h.s_plus + h.s_minus / s);
    };
    auto rk4 = [](auto&& f, double a, double y, double h) {
        const double k1 = f(a, y), k2 = f(a + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = f(a + 0.5 * h, y + 0.5 * h * k2), k4 = f(a + h, y + h * k3);
        return y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    };

    GridField g;
    g.x0 = w.x_min;
    g.t0 = w.t_min;
    g.nx = w.nx;
    g.nt = w.nt;
    g.hx = w.hx();
    g.ht = w.ht();
    g.phi.assign(g.nx * g.nt, 0.0);
    const std::size_t ic = detail::node_of(x0, w.x_min, g.hx, g.nx, "x");
    const std::size_t jc = detail::node_of(t0, w.t_min, g.ht, g.nt, "t");

    std::vector<double> line(g.nx);
    line[ic] = phi0;
    auto along_x = [&](double x, double y) { return rhs_x(x, t0, y); };
    for (std::size_t ix = ic; ix + 1 < g.nx; ++ix) {
        double y = line[ix];
        const double h = g.hx / static_cast<double>(substeps);
        for (std::size_t q = 0; q < substeps; ++q) y = rk4(along_x, g.x_at(ix) + h * static_cast<double>(q), y, h);
        line[ix + 1] = y;
    }
    for (std::size_t ix = ic; ix > 0; --ix) {
        double y = line[ix];
        const double h = -g.hx / static_cast<double>(substeps);
        for (std::size_t q = 0; q < substeps; ++q) y = rk4(along_x, g.x_at(ix) + h * static_cast<double>(q), y, h);
        line[ix - 1] = y;
    }
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const double x = g.x_at(ix);
        auto along_t = [&](double t, double y) { return rhs_t(x, t, y); };
        g.phi[g.index(jc, ix)] = line[ix];
        for (std::size_t it = jc; it + 1 < g.nt; ++it) {
            double y = g.phi[g.index(it, ix)];
            const double h = g.ht / static_cast<double>(substeps);
            for (std::size_t q = 0; q < substeps; ++q) y = rk4(along_t, g.t_at(it) + h * static_cast<double>(q), y, h);
            g.phi[g.index(it + 1, ix)] = y;
        }
        for (std::size_t it = jc; it > 0; --it) {
            double y = g.phi[g.index(it, ix)];
            const double h = -g.ht / static_cast<double>(substeps);
            for (std::size_t q = 0; q < substeps; ++q) y = rk4(along_t, g.t_at(it) + h * static_cast<double>(q), y, h);
            g.phi[g.index(it - 1, ix)] = y;
        }
    }
    g.phi_x.resize(g.phi.size());
    g.phi_t.resize(g.phi.size());
    for (std::size_t it = 0; it < g.nt; ++it)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const std::size_t i = g.index(it, ix);
            g.phi_x[i] = rhs_x(g.x_at(ix), g.t_at(it), g.phi[i]);
            g.phi_t[i] = rhs_t(g.x_at(ix), g.t_at(it), g.phi[i]);
        }
    const auto [compat, sg] = grid_residuals(p, g);
    if (!(compat <= compatibility_limit))
        throw InconsistentSeedError("backlund_integrate: cross-derivative residual " + std::to_string(compat) +
                                    " exceeds " + std::to_string(compatibility_limit));
    return {FieldEvaluator(p, std::move(g)), compat, sg};
}

/// L = Omega Omegat^-1 - (i sigma / lambda) Omegat^-1 sigma2 Omega at (0, t).
inline Mat2 defect_matrix_L(const DefectPair& pr, double t, const SpectralPoint& sp) {
    if (sp.lambda == cplx(0.0)) throw ArgumentError("defect_matrix_L: lambda must be nonzero");
    const Mat2 om = omega(pr.params.beta, pr.right.sample(0.0, t).phi);
    const Mat2 omt_inv = inverse(omega(pr.params.beta, pr.left.sample(0.0, t).phi));
    return om * omt_inv - (I_unit * pr.defect.sigma / sp.lambda) * (omt_inv * sigma2 * om);
}

/// Gauged defect matrix Omega^-1 L Omegat.
inline Mat2 L_hat(const DefectPair& pr, double t, const SpectralPoint& sp) {
    const Mat2 om = omega(pr.params.beta, pr.right.sample(0.0, t).phi);
    const Mat2 omt = omega(pr.params.beta, pr.left.sample(0.0, t).phi);
    return inverse(om) * defect_matrix_L(pr, t, sp) * omt;
}

/// Frobenius norm of L_t - (V L - L Vt) at x = 0, L_t by central differences.
inline double L_equation_residual(const DefectPair& pr, double t, const SpectralPoint& sp, double h) {
    if (!(h > 0.0)) throw ArgumentError("L_equation_residual: step must be positive");
    const Mat2 lt = (defect_matrix_L(pr, t + h, sp) - defect_matrix_L(pr, t - h, sp)) * (0.5 / h);
    const Mat2 l = defect_matrix_L(pr, t, sp);
    const Mat2 v = build_V(pr.right, 0.0, t, sp), vt = build_V(pr.left, 0.0, t, sp);
    return frobenius(lt - (v * l - l * vt));
}

/// M_S = T-hat_+(0)^-1 L-hat T-hat-tilde_-(0) with free boundary data at +-W.
inline Mat2 defect_monodromy_S(const DefectPair& pr, double t, const SpectralPoint& sp, double half_width,
                               std::size_t nsteps = 0) {
    detail::require_asymptote(pr.right, Picture::space, t, half_width);
    detail::require_asymptote(pr.left, Picture::space, t, -half_width);
    if (nsteps == 0) nsteps = default_steps(sp, half_width);
    const Mat2 right = detail::interaction_propagate(pr.right, Picture::space, t, 0.0, half_width, sp, nsteps);
    const Mat2 left = detail::interaction_propagate(pr.left, Picture::space, t, -half_width, 0.0, sp, nsteps);
    const Mat2 f0 = e0(sp, 0.0);
    return right * inverse(f0) * L_hat(pr, t, sp) * f0 * left;
}

struct SplittingReport {
    cplx log_m11;          // ln (M_S)_11, principal branch
    cplx i_plus;           // int_0^W (U_d - Gamma' U_o + i k1 sigma3)_11
    cplx i_minus;          // int_{-W}^0 (U_d + U_o Gammat + i k1 sigma3)_11
    cplx i_minus_literal;  // int_{-W}^0 (U_d - Gammat U_o + i k1 sigma3)_11
    cplx i_defect;         // ln (1/2) [(1 - Gamma') L-hat (1 + Gammat)]_11 at x = 0
    double gap = 0.0;          // with the U_d + U_o Gammat left integrand
    double gap_literal = 0.0;  // with the U_d - Gammat U_o left integrand
    std::string matched;
};

namespace detail {
inline double log_gap(cplx a, cplx b) {
    const cplx d = a - b;
    const double k = std::round(d.imag() / (2.0 * pi));
    return std::abs(d - cplx(0.0, 2.0 * pi * k));
}
} // namespace detail

namespace detail {

struct HalfLineIntegrals {
    cplx i_plus, i_minus, i_minus_literal;
    Mat2 gamma_r0, gamma_l0;
};

inline HalfLineIntegrals half_line_integrals(const DefectPair& pr, double t, const SpectralPoint& sp, double half_width,
                                             std::size_t nsteps) {
    const double h = half_width / static_cast<double>(nsteps);
    const Mat2 k1s3 = I_unit * sp.k1 * sigma3;
    HalfLineIntegrals out;

    // Right half: Phi(x) = T-hat_+(x)^-1 = D (1 - Gamma').
    const auto traj_r = interaction_trajectory(pr.right, Picture::space, t, half_width, 0.0, sp, nsteps);
    std::vector<cplx> f_plus(nsteps + 1);
    for (std::size_t k = 0; k <= nsteps; ++k) {
        const double x = half_width - h * static_cast<double>(k);
        const Mat2 phi = inverse(e0(sp, x) * traj_r[k]);
        const Mat2 gp{0.0, -phi(0, 1) / phi(0, 0), -phi(1, 0) / phi(1, 1), 0.0};
        const Mat2 u = build_U_hat(pr.right, x, t, sp);
        f_plus[nsteps - k] = (u.d() - gp * u.o() + k1s3)(0, 0);
        if (k == nsteps) out.gamma_r0 = gp;
    }
    // Left half: Psi(x) = T-hat-tilde_-(x) = (1 + Gammat) D.
    const auto traj_l = interaction_trajectory(pr.left, Picture::space, t, -half_width, 0.0, sp, nsteps);
    std::vector<cplx> f_minus(nsteps + 1), f_minus_lit(nsteps + 1);
    for (std::size_t k = 0; k <= nsteps; ++k) {
        const double x = -half_width + h * static_cast<double>(k);
        const Mat2 psi = e0(sp, x) * traj_l[k];
        const Mat2 gt{0.0, psi(0, 1) / psi(1, 1), psi(1, 0) / psi(0, 0), 0.0};
        const Mat2 u = build_U_hat(pr.left, x, t, sp);
        f_minus[k] = (u.d() + u.o() * gt + k1s3)(0, 0);
        f_minus_lit[k] = (u.d() - gt * u.o() + k1s3)(0, 0);
        if (k == nsteps) out.gamma_l0 = gt;
    }
    out.i_plus = simpson(f_plus, h);
    out.i_minus = simpson(f_minus, h);
    out.i_minus_literal = simpson(f_minus_lit, h);
    return out;
}

} // namespace detail

/// Splits ln (M_S)_11 into right-half, left-half and defect contributions, with Gamma' and Gammat
/// read off from numerically propagated half-line solutions.
/// nsteps = 0 doubles the Simpson mesh from default_steps until both half-line integrals change by
/// less than 1e-3 tolerance; a Riccati pole next to x = 0 (lambda near the defect parameter) that
/// defeats 64 doublings' worth of refinement raises SingularityError.
inline SplittingReport defect_splitting(const DefectPair& pr, double t, const SpectralPoint& sp, double half_width,
                                        std::size_t nsteps = 0, double tolerance = 1e-5) {
    detail::HalfLineIntegrals q;
    const std::size_t base = default_steps(sp, half_width) + default_steps(sp, half_width) % 2;
    if (nsteps != 0) {
        q = detail::half_line_integrals(pr, t, sp, half_width, nsteps + nsteps % 2);
    } else {
        q = detail::half_line_integrals(pr, t, sp, half_width, base);
        for (std::size_t n = 2 * base;; n *= 2) {
            if (n > 64 * base)
                throw SingularityError("defect_splitting: half-line Riccati integrals do not converge "
                                       "(pole of Gamma at the defect; lambda too close to the defect parameter)");
            const auto next = detail::half_line_integrals(pr, t, sp, half_width, n);
            const double change = std::max({std::abs(next.i_plus - q.i_plus), std::abs(next.i_minus - q.i_minus),
                                            std::abs(next.i_minus_literal - q.i_minus_literal)});
            q = next;
            if (change <= 1e-3 * tolerance) break;
        }
    }
    SplittingReport r;
    r.i_plus = q.i_plus;
    r.i_minus = q.i_minus;
    r.i_minus_literal = q.i_minus_literal;
    const Mat2 lh = L_hat(pr, t, sp);
    const Mat2 one = Mat2::identity();
    r.i_defect = std::log(0.5 * ((one - q.gamma_r0) * lh * (one + q.gamma_l0))(0, 0));
    r.log_m11 = std::log(defect_monodromy_S(pr, t, sp, half_width, nsteps == 0 ? base : nsteps)(0, 0));
    r.gap = detail::log_gap(r.i_plus + r.i_minus + r.i_defect, r.log_m11);
    r.gap_literal = detail::log_gap(r.i_plus + r.i_minus_literal + r.i_defect, r.log_m11);
    const bool a = r.gap < tolerance, b = r.gap_literal < tolerance;
    r.matched = a && b ? "both" : a ? "U_d+U_o*Gamma" : b ? "U_d-Gamma*U_o" : "none";
    return r;
}

struct Parities {
    int p_plus = 0;
    int p_minus = 0;
    TopologicalCharges right, left;
};

/// p_pm = (calQt_pm + calQ_pm) mod 2 from the time-picture charges of both fields.
inline Parities defect_parities(const DefectPair& pr, double x_right, double x_left) {
    Parities r;
    r.right = topological_charges(pr.right, x_right, Picture::time);
    r.left = topological_charges(pr.left, x_left, Picture::time);
    auto mod2 = [](int a) { return ((a % 2) + 2) % 2; };
    r.p_plus = mod2(r.right.q_plus + r.left.q_plus);
    r.p_minus = mod2(r.right.q_minus + r.left.q_minus);
    return r;
}

inline double parity_sign(int p) { return p % 2 == 0 ? 1.0 : -1.0; }

/// B_pm = lambda / (lambda + i sigma) (1 - (i sigma / lambda) (-1)^{p_pm} sigma3).
inline std::pair<Mat2, Mat2> b_factors(const SpectralPoint& sp, const DefectParams& d, const Parities& par) {
    const cplx den = sp.lambda + I_unit * d.sigma;
    if (std::abs(den) == 0.0) throw SingularityError("b_factors: pole at lambda = -i sigma");
    auto b = [&](int parity) {
        return (sp.lambda / den) * (Mat2::identity() - (I_unit * d.sigma / sp.lambda * parity_sign(parity)) * sigma3);
    };
    return {b(par.p_plus), b(par.p_minus)};
}

struct CCandidates {
    cplx printed;  // (lambda - i sigma s+)(lambda + i sigma s-)/(lambda + i sigma), as displayed
    cplx alt;    // (lambda - i sigma s+)/(lambda - i sigma s-)
};

inline CCandidates c_function(const SpectralPoint& sp, const DefectParams& d, const Parities& par) {
    const double sp_ = parity_sign(par.p_plus), sm = parity_sign(par.p_minus);
    const cplx l = sp.lambda, is = I_unit * d.sigma;
    const cplx den_printed = l + is, den_alt = l - is * sm;
    if (std::abs(den_printed) == 0.0 || std::abs(den_alt) == 0.0) throw SingularityError("c_function: pole");
    return {(l - is * sp_) * (l + is * sm) / den_printed, (l - is * sp_) / den_alt};
}

/// Constants E_n with J_n - Jt_n = E_n from the expansion of ln C_alt; n < 0 for the lambda -> 0 side.
inline double charge_shift_alt(const DefectParams& d, const Parities& par, int n) {
    if (n == 0) return 0.0;
    const double sp_ = parity_sign(par.p_plus), sm = parity_sign(par.p_minus);
    if (n > 0) {
        // ln(1 - i sigma s+/lambda) - ln(1 - i sigma s-/lambda) = sum_k ((i sigma s-)^k - (i sigma s+)^k) / (k lambda^k)
        const cplx c = (std::pow(I_unit * d.sigma * sm, n) - std::pow(I_unit * d.sigma * sp_, n)) / static_cast<double>(n);
        return (c / I_unit).real();
    }
    const int k = -n;
    // ln(1 + i lambda s+/sigma) - ln(1 + i lambda s-/sigma) up to the constant ln(s+/s-)
    auto term = [&](double s) { return -std::pow(-I_unit * s / d.sigma, k) / static_cast<double>(k); };
    return ((term(sp_) - term(sm)) / I_unit).real();
}

struct GeneratingRow {
    double lambda = 0.0;
    cplx ln_a, ln_a_tilde, ln_c_printed, ln_c_alt;
    double gap_printed = 0.0, gap_alt = 0.0;
};

struct GeneratingReport {
    Parities parities;
    std::vector<GeneratingRow> rows;
    std::string verdict;  // "alt", "printed", "both" or "none"
    double large_lambda_ln_c_alt = 0.0;
    double large_lambda_ln_c_printed = 0.0;
};

/// Compares ln calA (right field at x_right) - ln calAt (left field at x_left) with ln C for both candidates.
inline GeneratingReport generating_relation_check(const DefectPair& pr, double x_right, double x_left,
                                                  const std::vector<double>& lambdas, double half_width,
                                                  std::size_t nsteps = 0, double tolerance = 1e-4) {
    GeneratingReport rep;
    rep.parities = defect_parities(pr, x_right, x_left);
    bool all_printed = true, all_alt = true;
    for (double l : lambdas) {
        const SpectralPoint sp = spectral(l, pr.params);
        GeneratingRow row;
        row.lambda = l;
        const cplx a = monodromy(pr.right, Picture::time, x_right, half_width, sp, nsteps).a_entry;
        const cplx at = monodromy(pr.left, Picture::time, x_left, half_width, sp, nsteps).a_entry;
        const CCandidates c = c_function(sp, pr.defect, rep.parities);
        row.ln_a = std::log(a);
        row.ln_a_tilde = std::log(at);
        row.ln_c_printed = std::log(c.printed);
        row.ln_c_alt = std::log(c.alt);
        row.gap_printed = std::abs(std::log(a / (at * c.printed)));
        row.gap_alt = std::abs(std::log(a / (at * c.alt)));
        all_printed = all_printed && row.gap_printed < tolerance;
        all_alt = all_alt && row.gap_alt < tolerance;
        rep.rows.push_back(row);
    }
    rep.verdict = all_printed && all_alt ? "both" : all_alt ? "alt" : all_printed ? "printed" : "none";
    const SpectralPoint far = spectral(1e8, pr.params);
    const CCandidates cf = c_function(far, pr.defect, rep.parities);
    rep.large_lambda_ln_c_alt = std::abs(std::log(cf.alt));
    rep.large_lambda_ln_c_printed = std::abs(std::log(cf.printed));
    return rep;
}

struct HamShiftReport {
    double lhs = 0.0;
    double rhs_printed = 0.0;
    double rhs_alt = 0.0;
    double gap_printed = 0.0;
    double gap_alt = 0.0;
};

/// H_T(right, x_right) - H_T(left, x_left) against the two displayed shift forms.
inline HamShiftReport ham_shift_check(const DefectPair& pr, double x_right, double x_left, const GridWindow& w) {
    const Parities par = defect_parities(pr, x_right, x_left);
    const double s = pr.defect.sigma, pref = 2.0 * pr.params.m / (pr.params.beta * pr.params.beta);
    const double ds = parity_sign(par.p_plus) - parity_sign(par.p_minus);
    HamShiftReport r;
    r.lhs = hamiltonian_T(pr.right, x_right, w).value - hamiltonian_T(pr.left, x_left, w).value;
    r.rhs_printed = pref * (s + 1.0 / s) * ds;
    r.rhs_alt = pref * (1.0 / s - s) * ds;
    r.gap_printed = std::abs(r.lhs - r.rhs_printed);
    r.gap_alt = std::abs(r.lhs - r.rhs_alt);
    return r;
}

/// L_defect = (1/2)(phit phi_t - phi phit_t) - B at x = 0.
inline double defect_lagrangian(const DefectPair& pr, double t) {
    const FieldSample r = pr.right.sample(0.0, t), l = pr.left.sample(0.0, t);
    return 0.5 * (l.phi * r.phi_t - r.phi * l.phi_t) - b_density(pr.params, pr.defect, r.phi, l.phi);
}

struct GeneratingFunctional {
    double s_value = 0.0;           // regularized time integral of L_defect
    double limit_minus = 0.0;       // L_defect as t -> -inf, subtracted on t < 0
    double limit_plus = 0.0;        // L_defect as t -> +inf, subtracted on t > 0
    double e_shift = 0.0;           // H_T - Ht_T measured at the window
    std::map<int, double> charge_shifts;  // J_n - Jt_n from ln C_alt
    bool tail_warning = false;
};

/// S_T with the t -> -inf limit subtracted on t < 0 and the t -> +inf limit on t > 0.
inline GeneratingFunctional s_functional(const DefectPair& pr, const GridWindow& w, double x_right = 1.0,
                                         double x_left = -1.0) {
    w.validate();
    if (!(w.t_min < 0.0 && w.t_max > 0.0)) throw ArgumentError("s_functional: window must straddle t = 0");
    GeneratingFunctional g;
    auto lim = [&](double t) {
        const double phi = pr.right.sample(0.0, t).phi, phit = pr.left.sample(0.0, t).phi;
        const double period = 2.0 * pi / pr.params.beta;
        return -b_density(pr.params, pr.defect, period * std::round(phi / period), period * std::round(phit / period));
    };
    g.limit_minus = lim(w.t_min);
    g.limit_plus = lim(w.t_max);
    const std::size_t half = std::max<std::size_t>(3, w.nt / 2 + 1);
    auto part = [&](double a, double b, double limit) {
        return detail::integrate_window([&](double t) { return defect_lagrangian(pr, t) - limit; }, a, b, half);
    };
    const auto lo = part(w.t_min, 0.0, g.limit_minus), hi = part(0.0, w.t_max, g.limit_plus);
    g.s_value = lo.value + hi.value;
    g.tail_warning = std::max(std::abs(defect_lagrangian(pr, w.t_min) - g.limit_minus),
                              std::abs(defect_lagrangian(pr, w.t_max) - g.limit_plus)) > tail_density_limit;
    const Parities par = defect_parities(pr, x_right, x_left);
    g.e_shift = ham_shift_check(pr, x_right, x_left, w).lhs;
    for (int n : {-3, -2, -1, 1, 2, 3}) g.charge_shifts[n] = charge_shift_alt(pr.defect, par, n);
    return g;
}

struct CanonicalResidual {
    double right = 0.0;
    double left = 0.0;
};

/// Max over t_grid of |Pi - (dL/dphi - d/dt dL/dphi_t)| and |Pit + (dL/dphit - d/dt dL/dphit_t)|.
inline CanonicalResidual canonical_residual(const DefectPair& pr, const std::vector<double>& t_grid, double h) {
    if (!(h > 0.0)) throw ArgumentError("canonical_residual: step must be positive");
    CanonicalResidual res;
    for (double t : t_grid) {
        const FieldSample r = pr.right.sample(0.0, t), l = pr.left.sample(0.0, t);
        const auto [b_phi, b_phit] = b_gradient(pr.params, pr.defect, r.phi, l.phi);
        const double dt_phit = (pr.left.sample(0.0, t + h).phi - pr.left.sample(0.0, t - h).phi) / (2.0 * h);
        const double dt_phi = (pr.right.sample(0.0, t + h).phi - pr.right.sample(0.0, t - h).phi) / (2.0 * h);
        // dL/dphi = -phit_t/2 - B_phi, dL/dphi_t = phit/2
        const double el_right = -0.5 * l.phi_t - b_phi - 0.5 * dt_phit;
        // dL/dphit = phi_t/2 - B_phit, dL/dphit_t = -phi/2
        const double el_left = 0.5 * r.phi_t - b_phit + 0.5 * dt_phi;
        res.right = std::max(res.right, std::abs(r.Pi() - el_right));
        res.left = std::max(res.left, std::abs(l.Pi() + el_left));
    }
    return res;
}

} // namespace sgdefect

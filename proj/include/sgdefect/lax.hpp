#pragma once

// Lax matrices U, V, their Omega-gauged forms and asymptotic data.

#include <cmath>

#include "sgdefect/errors.hpp"
#include "sgdefect/fields.hpp"
#include "sgdefect/matcore.hpp"

namespace sgdefect {

struct SpectralPoint {
    cplx lambda;
    cplx k0;
    cplx k1;
    double m = 1.0;

    bool is_real() const { return lambda.imag() == 0.0; }
};

inline SpectralPoint spectral(cplx lambda, const ModelParams& p) {
    if (lambda == cplx(0.0)) throw ArgumentError("spectral: lambda must be nonzero");
    const cplx inv = 1.0 / lambda;
    return {lambda, 0.25 * p.m * (lambda + inv), 0.25 * p.m * (lambda - inv), p.m};
}

/// Omega = exp(i (beta/4) phi sigma3).
inline Mat2 omega(double beta, double phi) { return exp_sigma3(0.25 * beta * phi); }

inline Mat2 build_U(const ModelParams& p, const FieldSample& s, const SpectralPoint& sp) {
    const double h = 0.5 * p.beta * s.phi;
    return -I_unit * (0.25 * p.beta * s.pi()) * sigma3 - I_unit * sp.k0 * std::sin(h) * sigma1 -
           I_unit * sp.k1 * std::cos(h) * sigma2;
}

inline Mat2 build_V(const ModelParams& p, const FieldSample& s, const SpectralPoint& sp) {
    const double h = 0.5 * p.beta * s.phi;
    return I_unit * (0.25 * p.beta * s.Pi()) * sigma3 - I_unit * sp.k1 * std::sin(h) * sigma1 -
           I_unit * sp.k0 * std::cos(h) * sigma2;
}

inline Mat2 build_U_hat(const ModelParams& p, const FieldSample& s, const SpectralPoint& sp) {
    const double q = 0.25 * p.m;
    return -I_unit * (0.25 * p.beta * (s.phi_x + s.pi())) * sigma3 - I_unit * sp.lambda * q * sigma2 +
           (I_unit * q / sp.lambda) * (exp_sigma3(-p.beta * s.phi) * sigma2);
}

inline Mat2 build_V_hat(const ModelParams& p, const FieldSample& s, const SpectralPoint& sp) {
    const double q = 0.25 * p.m;
    return -I_unit * (0.25 * p.beta * (s.phi_t - s.Pi())) * sigma3 - I_unit * sp.lambda * q * sigma2 -
           (I_unit * q / sp.lambda) * (exp_sigma3(-p.beta * s.phi) * sigma2);
}

inline Mat2 build_U(const FieldEvaluator& f, double x, double t, const SpectralPoint& sp) {
    return build_U(f.params(), f.sample(x, t), sp);
}
inline Mat2 build_V(const FieldEvaluator& f, double x, double t, const SpectralPoint& sp) {
    return build_V(f.params(), f.sample(x, t), sp);
}
inline Mat2 build_U_hat(const FieldEvaluator& f, double x, double t, const SpectralPoint& sp) {
    return build_U_hat(f.params(), f.sample(x, t), sp);
}
inline Mat2 build_V_hat(const FieldEvaluator& f, double x, double t, const SpectralPoint& sp) {
    return build_V_hat(f.params(), f.sample(x, t), sp);
}

/// Gauged generator of the picture: U-hat along x, V-hat along t.
inline Mat2 gauged_generator(Picture pic, const ModelParams& p, const FieldSample& s, const SpectralPoint& sp) {
    return pic == Picture::space ? build_U_hat(p, s, sp) : build_V_hat(p, s, sp);
}

// Asymptotic data.

inline Mat2 u_inf(const SpectralPoint& sp) { return -I_unit * sp.k1 * sigma2; }
inline Mat2 v_inf(const SpectralPoint& sp) { return -I_unit * sp.k0 * sigma2; }

inline Mat2 n_matrix() {
    const double r = 1.0 / std::sqrt(2.0);
    return Mat2{r, I_unit * r, I_unit * r, r};
}

inline Mat2 e0(const SpectralPoint& sp, double x) { return n_matrix() * exp_sigma3(-sp.k1 * x); }
inline Mat2 ce0(const SpectralPoint& sp, double t) { return n_matrix() * exp_sigma3(-sp.k0 * t); }
inline Mat2 e_pm(const SpectralPoint& sp, int charge, double x) {
    return exp_sigma3(0.5 * pi * charge) * e0(sp, x);
}
inline Mat2 ce_pm(const SpectralPoint& sp, int charge, double t) {
    return exp_sigma3(0.5 * pi * charge) * ce0(sp, t);
}

/// E0 (space) or calE0 (time).
inline Mat2 free_solution(Picture pic, const SpectralPoint& sp, double s) {
    return pic == Picture::space ? e0(sp, s) : ce0(sp, s);
}

/// Frobenius norm of U_t - V_x + [U, V] with central differences of step h.
inline double zero_curvature_residual(const FieldEvaluator& f, double x, double t, const SpectralPoint& sp,
                                      double h) {
    if (!(h > 0.0)) throw ArgumentError("zero_curvature_residual: step must be positive");
    const Mat2 ut = (build_U(f, x, t + h, sp) - build_U(f, x, t - h, sp)) * (0.5 / h);
    const Mat2 vx = (build_V(f, x + h, t, sp) - build_V(f, x - h, t, sp)) * (0.5 / h);
    return frobenius(ut - vx + comm(build_U(f, x, t, sp), build_V(f, x, t, sp)));
}

/// Frobenius norm of U-hat - Omega^-1 (U Omega - Omega_x) (space) or V-hat - Omega^-1 (V Omega - Omega_t) (time),
/// with the derivative of Omega by central differences of step h.
inline double gauge_consistency_residual(const FieldEvaluator& f, Picture pic, double x, double t,
                                         const SpectralPoint& sp, double h) {
    if (!(h > 0.0)) throw ArgumentError("gauge_consistency_residual: step must be positive");
    const double beta = f.params().beta;
    const double dx = pic == Picture::space ? h : 0.0, dt = pic == Picture::space ? 0.0 : h;
    const Mat2 om = omega(beta, f.sample(x, t).phi);
    const Mat2 d_om = (omega(beta, f.sample(x + dx, t + dt).phi) - omega(beta, f.sample(x - dx, t - dt).phi)) * (0.5 / h);
    const Mat2 g = pic == Picture::space ? build_U(f, x, t, sp) : build_V(f, x, t, sp);
    const Mat2 hat = pic == Picture::space ? build_U_hat(f, x, t, sp) : build_V_hat(f, x, t, sp);
    return frobenius(hat - inverse(om) * (g * om - d_om));
}

} // namespace sgdefect

#pragma once

// Transition and monodromy matrices of the gauged auxiliary problem in x and in t.
// Stepping is done in the frame of the free solution F = E0 (space) or calE0 (time):
// Psi = F Psi_I with Psi_I' = F^-1 (G - G_inf) F Psi_I, so only the decaying part of the
// generator is integrated and the oscillating exponentials are exact.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sgdefect/errors.hpp"
#include "sgdefect/fields.hpp"
#include "sgdefect/lax.hpp"
#include "sgdefect/matcore.hpp"

namespace sgdefect {

struct TransitionResult {
    Mat2 matrix;
    double from = 0.0;
    double to = 0.0;
    Picture picture = Picture::space;
    SpectralPoint sp{};
    std::size_t step_count = 0;
};

struct Monodromy {
    Mat2 matrix;
    cplx a_entry;
    Picture picture = Picture::space;
    double truncation = 0.0;
};

/// Distance from the asymptote accepted at the ends of a truncated line.
inline constexpr double truncation_tolerance = 1e-8;

/// 200 L max(|k0|, |k1|, m) / pi, at least 16.
inline std::size_t default_steps(const SpectralPoint& sp, double length) {
    const double k = std::max({std::abs(sp.k0), std::abs(sp.k1), sp.m});
    const double n = std::ceil(200.0 * std::abs(length) * k / pi);
    return std::max<std::size_t>(16, static_cast<std::size_t>(n));
}

namespace detail {

inline FieldSample sample_along(const FieldEvaluator& f, Picture pic, double fixed, double s) {
    return pic == Picture::space ? f.sample(s, fixed) : f.sample(fixed, s);
}

inline cplx free_wavenumber(Picture pic, const SpectralPoint& sp) { return pic == Picture::space ? sp.k1 : sp.k0; }

/// F(s)^-1 (G(s) - G_inf) F(s).
inline Mat2 interaction_generator(const FieldEvaluator& f, Picture pic, double fixed, double s,
                                  const SpectralPoint& sp) {
    static const Mat2 n = n_matrix();
    static const Mat2 n_inv = inverse(n_matrix());
    const Mat2 g_inf = pic == Picture::space ? u_inf(sp) : v_inf(sp);
    const Mat2 g = gauged_generator(pic, f.params(), sample_along(f, pic, fixed, s), sp) - g_inf;
    Mat2 k = n_inv * g * n;
    const cplx ph = std::exp(2.0 * I_unit * free_wavenumber(pic, sp) * s);
    k(0, 1) *= ph;
    k(1, 0) /= ph;
    return k;
}

/// Psi_I(to) with Psi_I(from) = 1 by classical RK4.
inline Mat2 interaction_propagate(const FieldEvaluator& f, Picture pic, double fixed, double from, double to,
                                  const SpectralPoint& sp, std::size_t nsteps) {
    if (nsteps < 1) throw ArgumentError("propagate: nsteps must be >= 1");
    const double h = (to - from) / static_cast<double>(nsteps);
    Mat2 psi = Mat2::identity();
    Mat2 k_lo = interaction_generator(f, pic, fixed, from, sp);
    for (std::size_t i = 0; i < nsteps; ++i) {
        const double s = from + h * static_cast<double>(i);
        const Mat2 k_mid = interaction_generator(f, pic, fixed, s + 0.5 * h, sp);
        const Mat2 k_hi = interaction_generator(f, pic, fixed, i + 1 == nsteps ? to : s + h, sp);
        const Mat2 r1 = k_lo * psi;
        const Mat2 r2 = k_mid * (psi + r1 * (0.5 * h));
        const Mat2 r3 = k_mid * (psi + r2 * (0.5 * h));
        const Mat2 r4 = k_hi * (psi + r3 * h);
        psi += (r1 + 2.0 * r2 + 2.0 * r3 + r4) * (h / 6.0);
        k_lo = k_hi;
    }
    if (!is_finite(psi)) throw NumericError("propagate: non-finite transition matrix (reduce the step or use real lambda)");
    return psi;
}

/// Psi_I at every node from + k (to - from) / nsteps, with Psi_I(from) = 1.
inline std::vector<Mat2> interaction_trajectory(const FieldEvaluator& f, Picture pic, double fixed, double from,
                                                double to, const SpectralPoint& sp, std::size_t nsteps) {
    if (nsteps < 1) throw ArgumentError("propagate: nsteps must be >= 1");
    const double h = (to - from) / static_cast<double>(nsteps);
    std::vector<Mat2> out;
    out.reserve(nsteps + 1);
    Mat2 psi = Mat2::identity();
    out.push_back(psi);
    Mat2 k_lo = interaction_generator(f, pic, fixed, from, sp);
    for (std::size_t i = 0; i < nsteps; ++i) {
        const double s = from + h * static_cast<double>(i);
        const Mat2 k_mid = interaction_generator(f, pic, fixed, s + 0.5 * h, sp);
        const Mat2 k_hi = interaction_generator(f, pic, fixed, i + 1 == nsteps ? to : s + h, sp);
        const Mat2 r1 = k_lo * psi;
        const Mat2 r2 = k_mid * (psi + r1 * (0.5 * h));
        const Mat2 r3 = k_mid * (psi + r2 * (0.5 * h));
        const Mat2 r4 = k_hi * (psi + r3 * h);
        psi += (r1 + 2.0 * r2 + 2.0 * r3 + r4) * (h / 6.0);
        k_lo = k_hi;
        out.push_back(psi);
    }
    if (!is_finite(psi)) throw NumericError("propagate: non-finite transition matrix (reduce the step or use real lambda)");
    return out;
}

inline void require_asymptote(const FieldEvaluator& f, Picture pic, double fixed, double s) {
    const double d = vacuum_distance(f.params(), sample_along(f, pic, fixed, s).phi);
    if (!(d <= truncation_tolerance))
        throw TruncationError("field has not reached its asymptote at the truncation point (distance " +
                              std::to_string(d) + ")");
}

} // namespace detail

/// Gauged transition matrix from `from` to `to` at fixed t (space) or fixed x (time).
inline TransitionResult propagate(const FieldEvaluator& f, Picture pic, double fixed, double from, double to,
                                  const SpectralPoint& sp, std::size_t nsteps) {
    const Mat2 psi = detail::interaction_propagate(f, pic, fixed, from, to, sp, nsteps);
    const Mat2 m = free_solution(pic, sp, to) * psi * inverse(free_solution(pic, sp, from));
    return {m, from, to, pic, sp, nsteps};
}

/// Regularized monodromy F(W)^-1 T-hat(W, -W) F(-W); nsteps = 0 selects default_steps.
inline Monodromy monodromy(const FieldEvaluator& f, Picture pic, double fixed, double half_width,
                           const SpectralPoint& sp, std::size_t nsteps = 0) {
    if (!(half_width > 0.0)) throw ArgumentError("monodromy: half_width must be positive");
    detail::require_asymptote(f, pic, fixed, -half_width);
    detail::require_asymptote(f, pic, fixed, half_width);
    if (nsteps == 0) nsteps = default_steps(sp, 2.0 * half_width);
    const Mat2 m = detail::interaction_propagate(f, pic, fixed, -half_width, half_width, sp, nsteps);
    return {m, m(0, 0), pic, half_width};
}

/// Half-line solution from -W with free boundary data, evaluated at (x, t).
inline Mat2 jost_minus(const FieldEvaluator& f, Picture pic, double x, double t, const SpectralPoint& sp,
                       double half_width, std::size_t nsteps = 0, bool check_truncation = true) {
    const double fixed = pic == Picture::space ? t : x;
    const double s = pic == Picture::space ? x : t;
    if (!(half_width > 0.0) || !(s > -half_width)) throw ArgumentError("jost_minus: point must lie inside (-W, ...)");
    if (check_truncation) detail::require_asymptote(f, pic, fixed, -half_width);
    if (nsteps == 0) nsteps = default_steps(sp, s + half_width);
    return free_solution(pic, sp, s) * detail::interaction_propagate(f, pic, fixed, -half_width, s, sp, nsteps);
}

/// || T-hat_-(x,t) exp(-i k0 t sigma3) - calT-hat_-(x,t) exp(-i k1 x sigma3) ||_F.
/// The truncation gate is off here: the residual itself measures the truncation.
inline double appendix_equality_residual(const FieldEvaluator& f, double x, double t, const SpectralPoint& sp,
                                         double half_width, std::size_t nsteps = 0) {
    const Mat2 a = jost_minus(f, Picture::space, x, t, sp, half_width, nsteps, false) * exp_sigma3(-sp.k0 * t);
    const Mat2 b = jost_minus(f, Picture::time, x, t, sp, half_width, nsteps, false) * exp_sigma3(-sp.k1 * x);
    return frobenius(a - b);
}

} // namespace sgdefect

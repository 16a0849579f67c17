#pragma once

// Classical r-matrix and lattice checks of the ultralocal Poisson algebra for the
// equal-time bracket (picture S, fields phi, pi) and the equal-space bracket (picture T, fields phi, Pi).
// The lattice bracket is {phi_i, p_j} = delta_ij / Delta.

#include <algorithm>
#include <array>
#include <complex>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sgdefect/errors.hpp"
#include "sgdefect/fields.hpp"
#include "sgdefect/lax.hpp"
#include "sgdefect/matcore.hpp"

namespace sgdefect {

struct RMatrixValue {
    cplx lambda, mu;
    cplx f, g;
    double gamma_const = 0.0;
    Mat4 matrix;
};

inline RMatrixValue r_matrix(cplx lambda, cplx mu, const ModelParams& p) {
    const cplx l2 = lambda * lambda, m2 = mu * mu;
    if (std::abs(l2 - m2) == 0.0) throw SingularityError("r_matrix: lambda^2 = mu^2");
    RMatrixValue r;
    r.lambda = lambda;
    r.mu = mu;
    r.gamma_const = p.beta * p.beta / 16.0;
    r.f = -r.gamma_const * (l2 + m2) / (l2 - m2);
    r.g = 2.0 * r.gamma_const * lambda * mu / (l2 - m2);
    const Mat2 one = Mat2::identity();
    r.matrix = r.f * (tensor(one, one) - tensor(sigma3, sigma3)) + r.g * (tensor(sigma1, sigma1) + tensor(sigma2, sigma2));
    return r;
}

/// Trigonometric display: (i gamma / sin a) times the 4x4 pattern with cos a on (2,2), (3,3) and -1 on (2,3), (3,2).
inline Mat4 r_trigonometric(double alpha, const ModelParams& p) {
    const double s = std::sin(alpha);
    if (s == 0.0) throw SingularityError("r_trigonometric: sin(alpha) = 0");
    const cplx pre = I_unit * (p.beta * p.beta / 16.0) / s;
    Mat4 r;
    r(1, 1) = pre * std::cos(alpha);
    r(2, 2) = pre * std::cos(alpha);
    r(1, 2) = -pre;
    r(2, 1) = -pre;
    return r;
}

/// A coefficient that is either an ordinary number, a principal value, or a delta(lambda - mu) weight.
struct TaggedCoefficient {
    enum class Tag { regular, principal_value, delta };
    Tag tag = Tag::regular;
    cplx value;
};

/// r_pm of the infinite-volume bracket as data: overall prefactor times tagged 4x4 entries.
struct RPlusMinus {
    double prefactor = 0.0;  // -gamma / 2
    std::array<std::array<TaggedCoefficient, 4>, 4> entries{};
};

inline RPlusMinus r_pm(cplx lambda, cplx mu, int sign, const ModelParams& p) {
    if (sign != 1 && sign != -1) throw ArgumentError("r_pm: sign must be +1 or -1");
    if (std::abs(lambda + mu) == 0.0) throw SingularityError("r_pm: lambda = -mu");
    using Tag = TaggedCoefficient::Tag;
    RPlusMinus r;
    r.prefactor = -p.beta * p.beta / 32.0;
    const cplx d = (lambda - mu) / (lambda + mu);
    r.entries[0][0] = {Tag::regular, d};
    r.entries[3][3] = {Tag::regular, d};
    if (std::abs(lambda - mu) != 0.0) {
        r.entries[1][1] = {Tag::principal_value, (lambda + mu) / (lambda - mu)};
        r.entries[2][2] = {Tag::principal_value, (lambda + mu) / (lambda - mu)};
    }
    r.entries[1][2] = {Tag::delta, -static_cast<double>(sign) * I_unit * pi * (lambda + mu)};
    r.entries[2][1] = {Tag::delta, static_cast<double>(sign) * I_unit * pi * (lambda + mu)};
    return r;
}

/// Partial derivatives of U (picture S) or V (picture T) with respect to phi and to the momentum.
struct LaxPartials {
    Mat2 d_phi;
    Mat2 d_p;
};

inline LaxPartials lax_partials(Picture pic, const ModelParams& p, double phi, const SpectralPoint& sp) {
    const double h = 0.5 * p.beta * phi, hb = 0.5 * p.beta;
    if (pic == Picture::space)
        return {-I_unit * sp.k0 * hb * std::cos(h) * sigma1 + I_unit * sp.k1 * hb * std::sin(h) * sigma2,
                -I_unit * (0.25 * p.beta) * sigma3};
    return {-I_unit * sp.k1 * hb * std::cos(h) * sigma1 + I_unit * sp.k0 * hb * std::sin(h) * sigma2,
            I_unit * (0.25 * p.beta) * sigma3};
}

inline Mat2 lax_matrix(Picture pic, const ModelParams& p, const FieldSample& s, const SpectralPoint& sp) {
    return pic == Picture::space ? build_U(p, s, sp) : build_V(p, s, sp);
}

/// +1 for the equal-time bracket, -1 for the equal-space bracket.
inline double bracket_sign(Picture pic) { return pic == Picture::space ? 1.0 : -1.0; }

struct UltralocalResult {
    double gap = 0.0;         // same site: max |lhs - rhs|
    double lhs_norm = 0.0;
};

namespace detail {

using xcplx = std::complex<long double>;
using X2 = std::array<xcplx, 4>;
using X4 = std::array<xcplx, 16>;

inline X2 x_pauli(xcplx c0, xcplx c1, xcplx c2, xcplx c3) {
    const xcplx i(0.0L, 1.0L);
    return {c0 + c3, c1 - i * c2, c1 + i * c2, c0 - c3};
}

inline X4 x_tensor(const X2& a, const X2& b) {
    X4 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r[4 * (2 * i + k) + 2 * j + l] = a[2 * i + j] * b[2 * k + l];
    return r;
}

inline X4 x_mul(const X4& a, const X4& b) {
    X4 r{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) r[4 * i + j] += a[4 * i + k] * b[4 * k + j];
    return r;
}

/// Lax matrix and its (phi, p) partials as Pauli coefficients, in extended precision.
struct XLax {
    X2 a, d_phi, d_p;
};

inline XLax x_lax(Picture pic, const ModelParams& p, const FieldSample& s, cplx lambda) {
    const xcplx i(0.0L, 1.0L), l(lambda.real(), lambda.imag());
    const long double beta = p.beta, m = p.m, h = 0.5L * beta * static_cast<long double>(s.phi);
    const xcplx k0 = 0.25L * m * (l + 1.0L / l), k1 = 0.25L * m * (l - 1.0L / l);
    const xcplx ka = pic == Picture::space ? k0 : k1, kb = pic == Picture::space ? k1 : k0;
    const long double mom = pic == Picture::space ? s.pi() : s.Pi(), sgn = pic == Picture::space ? -1.0L : 1.0L;
    const xcplx z = 0.0L;
    return {x_pauli(z, -i * ka * std::sin(h), -i * kb * std::cos(h), sgn * i * 0.25L * beta * mom),
            x_pauli(z, -i * ka * 0.5L * beta * std::cos(h), i * kb * 0.5L * beta * std::sin(h), z),
            x_pauli(z, z, z, sgn * i * 0.25L * beta)};
}

} // namespace detail

/// Same-site lattice bracket {A(lambda) (x) A(mu)} against sign (1/Delta) [r, A(lambda) (x) 1 + 1 (x) A(mu)].
/// Both sides are formed in long double: near lambda^2 = mu^2 the large f and g cancel in the commutator.
/// `flip` reverses the sign on the right-hand side (negative control).
inline UltralocalResult ultralocal_check(Picture pic, const ModelParams& p, const FieldSample& s,
                                         const SpectralPoint& sp1, const SpectralPoint& sp2, double delta,
                                         bool flip = false) {
    using namespace detail;
    if (!(delta > 0.0)) throw ArgumentError("ultralocal_check: delta must be positive");
    const cplx lc = sp1.lambda, mc = sp2.lambda;
    if (std::abs(lc * lc - mc * mc) == 0.0) throw SingularityError("ultralocal_check: lambda^2 = mu^2");
    const xcplx l(lc.real(), lc.imag()), m(mc.real(), mc.imag());
    const long double gamma = static_cast<long double>(p.beta) * p.beta / 16.0L;
    const xcplx f = -gamma * (l * l + m * m) / (l * l - m * m), g = 2.0L * gamma * l * m / (l * l - m * m);
    const xcplx z = 0.0L, o = 1.0L;
    const X4 s11 = x_tensor(x_pauli(z, o, z, z), x_pauli(z, o, z, z));
    const X4 s22 = x_tensor(x_pauli(z, z, o, z), x_pauli(z, z, o, z));
    const X4 s33 = x_tensor(x_pauli(z, z, z, o), x_pauli(z, z, z, o));
    const X2 one = x_pauli(o, z, z, z);
    X4 r{};
    for (int k = 0; k < 16; ++k) r[k] = f * (x_tensor(one, one)[k] - s33[k]) + g * (s11[k] + s22[k]);

    const XLax a = x_lax(pic, p, s, lc), b = x_lax(pic, p, s, mc);
    const X4 t1 = x_tensor(a.d_phi, b.d_p), t2 = x_tensor(a.d_p, b.d_phi);
    const X4 sa = x_tensor(a.a, one), sb = x_tensor(one, b.a);
    X4 sum{};
    for (int k = 0; k < 16; ++k) sum[k] = sa[k] + sb[k];
    const X4 rs = x_mul(r, sum), sr = x_mul(sum, r);
    const long double inv = 1.0L / delta, sgn = bracket_sign(pic) * (flip ? -1.0L : 1.0L);
    long double gap = 0.0L, norm = 0.0L;
    for (int k = 0; k < 16; ++k) {
        const xcplx lhs = (t1[k] - t2[k]) * inv;
        const xcplx rhs = sgn * inv * (rs[k] - sr[k]);
        gap = std::max(gap, std::abs(lhs - rhs));
        norm = std::max(norm, std::abs(lhs));
    }
    return {static_cast<double>(gap), static_cast<double>(norm)};
}

namespace detail {

enum class SitePlacement { left, midpoint };

/// linearized: the site derivative of expm(Delta A) is Delta dA (same-site Lax bracket).
/// exact: full derivative of the exponential.
enum class SiteBracket { linearized, exact };

struct LatticeLine {
    std::vector<FieldSample> samples;
    double delta = 0.0;
    double start = 0.0;
};

inline LatticeLine lattice_line(const FieldEvaluator& f, Picture pic, double fixed, double a, double b,
                                std::size_t n_sites, SitePlacement place = SitePlacement::left) {
    if (n_sites < 1 || !(b > a)) throw ArgumentError("lattice: need n_sites >= 1 and a < b");
    LatticeLine l;
    l.delta = (b - a) / static_cast<double>(n_sites);
    l.start = a;
    l.samples.reserve(n_sites);
    const double offset = place == SitePlacement::midpoint ? 0.5 : 0.0;
    for (std::size_t i = 0; i < n_sites; ++i) {
        const double s = a + (static_cast<double>(i) + offset) * l.delta;
        l.samples.push_back(pic == Picture::space ? f.sample(s, fixed) : f.sample(fixed, s));
    }
    return l;
}

struct SiteFactors {
    std::vector<Mat2> m, dm_phi, dm_p;
};

inline SiteFactors site_factors(const LatticeLine& l, Picture pic, const ModelParams& p, const SpectralPoint& sp,
                                SiteBracket mode = SiteBracket::linearized) {
    SiteFactors s;
    const std::size_t n = l.samples.size();
    s.m.resize(n);
    s.dm_phi.resize(n);
    s.dm_p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Mat2 a = lax_matrix(pic, p, l.samples[i], sp) * l.delta;
        const LaxPartials d = lax_partials(pic, p, l.samples[i].phi, sp);
        s.m[i] = expm(a);
        if (mode == SiteBracket::exact) {
            s.dm_phi[i] = expm_derivative(a, d.d_phi * l.delta);
            s.dm_p[i] = expm_derivative(a, d.d_p * l.delta);
        } else {
            s.dm_phi[i] = d.d_phi * l.delta;
            s.dm_p[i] = d.d_p * l.delta;
        }
    }
    return s;
}

/// prefix[i] = M_{i-1} ... M_0 (prefix[0] = 1), suffix[i] = M_{n-1} ... M_{i+1}.
inline std::pair<std::vector<Mat2>, std::vector<Mat2>> prefix_suffix(const std::vector<Mat2>& m) {
    const std::size_t n = m.size();
    std::vector<Mat2> pre(n), suf(n);
    Mat2 acc = Mat2::identity();
    for (std::size_t i = 0; i < n; ++i) {
        pre[i] = acc;
        acc = m[i] * acc;
    }
    acc = Mat2::identity();
    for (std::size_t i = n; i-- > 0;) {
        suf[i] = acc;
        acc = acc * m[i];
    }
    return {pre, suf};
}

} // namespace detail

struct TransitionBracketResult {
    double gap = 0.0;
    double lhs_norm = 0.0;
    double delta = 0.0;
};

/// Lattice transition matrix prod expm(Delta A_i) on [a, b] and its Leibniz-sum bracket against
/// sign [r(lambda, mu), T(lambda) (x) T(mu)].
inline TransitionBracketResult transition_bracket_check(Picture pic, const FieldEvaluator& f, double fixed, double a,
                                                        double b, const SpectralPoint& sp1, const SpectralPoint& sp2,
                                                        std::size_t n_sites,
                                                        detail::SitePlacement place = detail::SitePlacement::left,
                                                        detail::SiteBracket mode = detail::SiteBracket::linearized) {
    const ModelParams& p = f.params();
    const RMatrixValue r = r_matrix(sp1.lambda, sp2.lambda, p);
    const auto line = detail::lattice_line(f, pic, fixed, a, b, n_sites, place);
    const auto s1 = detail::site_factors(line, pic, p, sp1, mode), s2 = detail::site_factors(line, pic, p, sp2, mode);
    const auto [pre1, suf1] = detail::prefix_suffix(s1.m);
    const auto [pre2, suf2] = detail::prefix_suffix(s2.m);
    Mat4 lhs;
    for (std::size_t i = 0; i < n_sites; ++i) {
        const Mat4 site = (tensor(s1.dm_phi[i], s2.dm_p[i]) - tensor(s1.dm_p[i], s2.dm_phi[i])) * cplx(1.0 / line.delta);
        lhs += tensor(suf1[i], suf2[i]) * site * tensor(pre1[i], pre2[i]);
    }
    const Mat2 t1 = s1.m.back() * pre1.back(), t2 = s2.m.back() * pre2.back();
    const Mat4 rhs = comm(r.matrix, tensor(t1, t2)) * cplx(bracket_sign(pic));
    return {max_abs(lhs - rhs), max_abs(lhs), line.delta};
}

struct InvolutionResult {
    cplx bracket;
    double magnitude = 0.0;
    cplx a_lambda, a_mu;
};

/// Lattice bracket {calA(lambda), calA(mu)}_T of the regularized time-monodromy entries on [-T0, T0]
/// at fixed x (picture T), or {a(lambda), a(mu)}_S on [-L, L] at fixed t (picture S).
inline InvolutionResult involution_check(Picture pic, const FieldEvaluator& f, double fixed, double half_interval,
                                         const SpectralPoint& sp1, const SpectralPoint& sp2, std::size_t n_sites,
                                         detail::SitePlacement place = detail::SitePlacement::left,
                                         detail::SiteBracket mode = detail::SiteBracket::linearized) {
    const ModelParams& p = f.params();
    const TopologicalCharges q = topological_charges(f, fixed, pic);
    const auto line = detail::lattice_line(f, pic, fixed, -half_interval, half_interval, n_sites, place);
    auto ends = [&](const SpectralPoint& sp) {
        const Mat2 left = pic == Picture::space ? e_pm(sp, q.q_minus, -half_interval) : ce_pm(sp, q.q_minus, -half_interval);
        const Mat2 right = pic == Picture::space ? e_pm(sp, q.q_plus, half_interval) : ce_pm(sp, q.q_plus, half_interval);
        return std::pair{inverse(right), left};
    };
    struct Grad {
        std::vector<cplx> d_phi, d_p;
        cplx value;
    };
    auto gradient = [&](const SpectralPoint& sp) {
        const auto s = detail::site_factors(line, pic, p, sp, mode);
        const auto [a_left, b_right] = ends(sp);
        const std::size_t n = s.m.size();
        // row[i] = e1^T A M_{n-1} ... M_{i+1}, col[i] = M_{i-1} ... M_0 B e1
        std::vector<std::array<cplx, 2>> row(n), col(n);
        std::array<cplx, 2> r{a_left(0, 0), a_left(0, 1)};
        for (std::size_t i = n; i-- > 0;) {
            row[i] = r;
            const Mat2& m = s.m[i];
            r = {r[0] * m(0, 0) + r[1] * m(1, 0), r[0] * m(0, 1) + r[1] * m(1, 1)};
        }
        std::array<cplx, 2> c{b_right(0, 0), b_right(1, 0)};
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = c;
            const Mat2& m = s.m[i];
            c = {m(0, 0) * c[0] + m(0, 1) * c[1], m(1, 0) * c[0] + m(1, 1) * c[1]};
        }
        auto sandwich = [](const std::array<cplx, 2>& u, const Mat2& m, const std::array<cplx, 2>& v) {
            return u[0] * (m(0, 0) * v[0] + m(0, 1) * v[1]) + u[1] * (m(1, 0) * v[0] + m(1, 1) * v[1]);
        };
        Grad g;
        g.d_phi.resize(n);
        g.d_p.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.d_phi[i] = sandwich(row[i], s.dm_phi[i], col[i]);
            g.d_p[i] = sandwich(row[i], s.dm_p[i], col[i]);
        }
        g.value = sandwich(row[0], s.m[0], col[0]);
        return g;
    };
    const Grad g1 = gradient(sp1), g2 = gradient(sp2);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n_sites; ++i) acc += (g1.d_phi[i] * g2.d_p[i] - g1.d_p[i] * g2.d_phi[i]);
    acc /= line.delta;
    return {acc, std::abs(acc), g1.value, g2.value};
}

} // namespace sgdefect

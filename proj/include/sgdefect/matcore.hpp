#pragma once

// Complex 2x2 / 4x4 matrix algebra used by the Lax, transition and r-matrix code.
// Kronecker convention (fixed everywhere): tensor(a, b) has entry
// ((i,k),(j,l)) = a(i,j) * b(k,l), row index 2*i + k, column index 2*j + l.

#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include "sgdefect/errors.hpp"

namespace sgdefect {

using cplx = std::complex<double>;
inline constexpr cplx I_unit{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

struct Mat2 {
    std::array<cplx, 4> e{};

    constexpr Mat2() = default;
    constexpr Mat2(cplx a, cplx b, cplx c, cplx d) : e{a, b, c, d} {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {}; }
    static constexpr Mat2 diag(cplx a, cplx d) { return {a, 0.0, 0.0, d}; }

    constexpr cplx& operator()(int i, int j) { return e[2 * i + j]; }
    constexpr const cplx& operator()(int i, int j) const { return e[2 * i + j]; }

    Mat2& operator+=(const Mat2& o) {
        for (int k = 0; k < 4; ++k) e[k] += o.e[k];
        return *this;
    }
    Mat2& operator-=(const Mat2& o) {
        for (int k = 0; k < 4; ++k) e[k] -= o.e[k];
        return *this;
    }
    Mat2& operator*=(cplx s) {
        for (auto& v : e) v *= s;
        return *this;
    }

    /// Diagonal part.
    Mat2 d() const { return diag(e[0], e[3]); }
    /// Off-diagonal part.
    Mat2 o() const { return {0.0, e[1], e[2], 0.0}; }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator-(const Mat2& a) { return {-a.e[0], -a.e[1], -a.e[2], -a.e[3]}; }
inline Mat2 operator*(Mat2 a, cplx s) { return a *= s; }
inline Mat2 operator*(cplx s, Mat2 a) { return a *= s; }
inline Mat2 operator*(double s, Mat2 a) { return a *= cplx(s); }
inline Mat2 operator*(Mat2 a, double s) { return a *= cplx(s); }

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
            a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
}

inline cplx trace(const Mat2& a) { return a.e[0] + a.e[3]; }
inline cplx det(const Mat2& a) { return a.e[0] * a.e[3] - a.e[1] * a.e[2]; }

inline Mat2 inverse(const Mat2& a) {
    const cplx dt = det(a);
    if (dt == cplx(0.0)) throw NumericError("inverse: singular 2x2 matrix");
    return Mat2{a.e[3], -a.e[1], -a.e[2], a.e[0]} * (1.0 / dt);
}

inline Mat2 comm(const Mat2& a, const Mat2& b) { return a * b - b * a; }

inline double frobenius(const Mat2& a) {
    double s = 0.0;
    for (const auto& v : a.e) s += std::norm(v);
    return std::sqrt(s);
}

inline double max_abs(const Mat2& a) {
    double s = 0.0;
    for (const auto& v : a.e) s = std::max(s, std::abs(v));
    return s;
}

inline bool is_finite(const Mat2& a) {
    for (const auto& v : a.e)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

/// Pauli matrix sigma_k, k in {1,2,3}.
inline Mat2 pauli(int k) {
    switch (k) {
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -I_unit, I_unit, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default: throw ArgumentError("pauli: index must be 1, 2 or 3");
    }
}

inline const Mat2 sigma1 = pauli(1);
inline const Mat2 sigma2 = pauli(2);
inline const Mat2 sigma3 = pauli(3);

/// exp(i theta sigma3) for complex theta.
inline Mat2 exp_sigma3(cplx theta) {
    return Mat2::diag(std::exp(I_unit * theta), std::exp(-I_unit * theta));
}

namespace detail {

// sinh(mu)/mu and (cosh(mu) - sinh(mu)/mu)/mu^2 as functions of z = mu^2.
inline cplx sinhc_sq(cplx z) {
    if (std::abs(z) < 1e-12) return 1.0 + z / 6.0 + z * z / 120.0;
    const cplx mu = std::sqrt(z);
    if (std::abs(mu) < 1e-6) return 1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0;
    return std::sinh(mu) / mu;
}

inline cplx dsinhc_sq(cplx z) {
    // d/dz [sinh(sqrt z)/sqrt z]
    const cplx mu = std::sqrt(z);
    if (std::abs(mu) < 1e-3)
        return 1.0 / 6.0 + z / 60.0 + z * z / 2520.0 + z * z * z / 181440.0;
    return (std::cosh(mu) - std::sinh(mu) / mu) / (2.0 * z);
}

inline Mat2 expm_general(const Mat2& a) {
    // Shift out the trace, then use the traceless closed form.
    const cplx half_tr = 0.5 * trace(a);
    Mat2 b = a - Mat2::identity() * half_tr;
    const cplx z = -det(b);
    const cplx mu = std::sqrt(z);
    const Mat2 r = Mat2::identity() * std::cosh(mu) + b * sinhc_sq(z);
    return r * std::exp(half_tr);
}

} // namespace detail

/// Matrix exponential. Traceless input uses cosh(mu) 1 + sinh(mu)/mu a, mu^2 = -det a,
/// with a series for small |mu|; general input factors out exp(tr/2).
inline Mat2 expm(const Mat2& a) {
    if (!is_finite(a)) throw NumericError("expm: non-finite entries");
    return detail::expm_general(a);
}

/// Directional (Frechet) derivative of exp at a traceless matrix a along traceless da.
inline Mat2 expm_derivative(const Mat2& a, const Mat2& da) {
    const cplx z = -det(a);
    // d(mu^2) = tr(a da)
    const cplx dz = trace(a * da);
    const cplx s = detail::sinhc_sq(z);
    const cplx dc = 0.5 * s * dz;  // d cosh(mu) = sinh(mu)/(2 mu) d(mu^2)
    const cplx ds = detail::dsinhc_sq(z) * dz;
    return Mat2::identity() * dc + a * ds + da * s;
}

inline std::ostream& operator<<(std::ostream& os, const Mat2& a) {
    return os << "[[" << a.e[0] << ", " << a.e[1] << "], [" << a.e[2] << ", " << a.e[3] << "]]";
}

struct Mat4 {
    std::array<cplx, 16> e{};

    static Mat4 identity() {
        Mat4 r;
        for (int k = 0; k < 4; ++k) r(k, k) = 1.0;
        return r;
    }

    cplx& operator()(int i, int j) { return e[4 * i + j]; }
    const cplx& operator()(int i, int j) const { return e[4 * i + j]; }

    Mat4& operator+=(const Mat4& o) {
        for (int k = 0; k < 16; ++k) e[k] += o.e[k];
        return *this;
    }
    Mat4& operator-=(const Mat4& o) {
        for (int k = 0; k < 16; ++k) e[k] -= o.e[k];
        return *this;
    }
    Mat4& operator*=(cplx s) {
        for (auto& v : e) v *= s;
        return *this;
    }
};

inline Mat4 operator+(Mat4 a, const Mat4& b) { return a += b; }
inline Mat4 operator-(Mat4 a, const Mat4& b) { return a -= b; }
inline Mat4 operator*(Mat4 a, cplx s) { return a *= s; }
inline Mat4 operator*(cplx s, Mat4 a) { return a *= s; }

inline Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < 4; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline Mat4 comm(const Mat4& a, const Mat4& b) { return a * b - b * a; }

inline double max_abs(const Mat4& a) {
    double s = 0.0;
    for (const auto& v : a.e) s = std::max(s, std::abs(v));
    return s;
}

inline double frobenius(const Mat4& a) {
    double s = 0.0;
    for (const auto& v : a.e) s += std::norm(v);
    return std::sqrt(s);
}

/// Kronecker product a (x) b.
inline Mat4 tensor(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

} // namespace sgdefect

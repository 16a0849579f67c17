#pragma once

// Truncated Taylor series ("jets") in one local variable s around a base point.
// Coefficient k multiplies s^k. Used to carry analytic field derivatives through
// the Riccati recursions without finite differences.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "sgdefect/matcore.hpp"

namespace sgdefect {

template <class T>
class Series {
public:
    Series() = default;
    explicit Series(std::size_t order, T fill = T{}) : c_(order + 1, fill) {}
    Series(std::initializer_list<T> init) : c_(init) {}
    explicit Series(std::vector<T> coeffs) : c_(std::move(coeffs)) {}

    static Series constant(const T& v, std::size_t order) {
        Series s(order);
        s.c_[0] = v;
        return s;
    }

    /// v + slope * s
    static Series linear(const T& v, const T& slope, std::size_t order) {
        Series s(order);
        s.c_[0] = v;
        if (order >= 1) s.c_[1] = slope;
        return s;
    }

    std::size_t order() const { return c_.empty() ? 0 : c_.size() - 1; }
    std::size_t size() const { return c_.size(); }
    T& operator[](std::size_t k) { return c_[k]; }
    const T& operator[](std::size_t k) const { return c_[k]; }
    const T& value() const { return c_[0]; }
    const std::vector<T>& coeffs() const { return c_; }

    Series truncated(std::size_t order) const {
        Series r(order);
        for (std::size_t k = 0; k <= std::min(order, this->order()); ++k) r.c_[k] = c_[k];
        return r;
    }

    /// d/ds; the result carries one order fewer.
    Series derivative() const {
        if (c_.size() <= 1) return Series(0);
        Series r(order() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) r.c_[k - 1] = c_[k] * static_cast<double>(k);
        return r;
    }

    /// Antiderivative with the given constant; one order more.
    Series integral(const T& c0) const {
        Series r(order() + 1);
        r.c_[0] = c0;
        for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k + 1] = c_[k] * (1.0 / static_cast<double>(k + 1));
        return r;
    }

    Series& operator+=(const Series& o) {
        resize_min(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Series& operator-=(const Series& o) {
        resize_min(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    template <class S>
    Series& scale(const S& s) {
        for (auto& v : c_) v = v * s;
        return *this;
    }

private:
    void resize_min(const Series& o) {
        if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
    }
    std::vector<T> c_;
};

template <class T>
Series<T> operator+(Series<T> a, const Series<T>& b) { return a += b; }
template <class T>
Series<T> operator-(Series<T> a, const Series<T>& b) { return a -= b; }
template <class T>
Series<T> operator-(Series<T> a) { return a.scale(-1.0); }

/// Series times a constant (scalar or matrix) on the right.
template <class T, class S>
auto scaled(const Series<T>& a, const S& s) {
    using R = decltype(std::declval<T>() * std::declval<S>());
    Series<R> r(a.order());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] * s;
    return r;
}

/// Constant (scalar or matrix) times series on the left.
template <class S, class T>
auto lscaled(const S& s, const Series<T>& a) {
    using R = decltype(std::declval<S>() * std::declval<T>());
    Series<R> r(a.order());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = s * a[k];
    return r;
}

/// Cauchy product, truncated at the lower of the two orders.
template <class A, class B>
auto operator*(const Series<A>& a, const Series<B>& b) {
    using R = decltype(std::declval<A>() * std::declval<B>());
    const std::size_t n = std::min(a.order(), b.order());
    Series<R> r(n);
    for (std::size_t k = 0; k <= n; ++k) {
        R acc = a[0] * b[k];
        for (std::size_t j = 1; j <= k; ++j) acc = acc + a[j] * b[k - j];
        r[k] = acc;
    }
    return r;
}

using RealSeries = Series<double>;
using CplxSeries = Series<cplx>;
using MatSeries = Series<Mat2>;

template <class T>
Series<T> exp(const Series<T>& g) {
    Series<T> f(g.order());
    f[0] = std::exp(g[0]);
    for (std::size_t k = 1; k < g.size(); ++k) {
        T acc{};
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * g[j] * f[k - j];
        f[k] = acc / static_cast<double>(k);
    }
    return f;
}

/// Simultaneous sin and cos of a series.
template <class T>
std::pair<Series<T>, Series<T>> sincos(const Series<T>& g) {
    Series<T> s(g.order()), c(g.order());
    s[0] = std::sin(g[0]);
    c[0] = std::cos(g[0]);
    for (std::size_t k = 1; k < g.size(); ++k) {
        T as{}, ac{};
        for (std::size_t j = 1; j <= k; ++j) {
            as += static_cast<double>(j) * g[j] * c[k - j];
            ac -= static_cast<double>(j) * g[j] * s[k - j];
        }
        s[k] = as / static_cast<double>(k);
        c[k] = ac / static_cast<double>(k);
    }
    return {s, c};
}

template <class T>
Series<T> divide(const Series<T>& a, const Series<T>& b) {
    const std::size_t n = std::min(a.order(), b.order());
    Series<T> q(n);
    for (std::size_t k = 0; k <= n; ++k) {
        T acc = a[k];
        for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
        q[k] = acc / b[0];
    }
    return q;
}

inline RealSeries atan(const RealSeries& u) {
    // atan(u)' = u' / (1 + u^2)
    if (u.order() == 0) return RealSeries::constant(std::atan(u[0]), 0);
    RealSeries one_plus = u * u;
    one_plus[0] += 1.0;
    const RealSeries w = divide(u.derivative(), one_plus.truncated(u.order() - 1));
    return w.integral(std::atan(u[0]));
}

/// Promote a real series to complex coefficients.
inline CplxSeries complexify(const RealSeries& r) {
    CplxSeries c(r.order());
    for (std::size_t k = 0; k < r.size(); ++k) c[k] = r[k];
    return c;
}

/// exp(i theta sigma3) with theta a real series, as a matrix-valued series.
inline MatSeries exp_sigma3(const RealSeries& theta) {
    const auto [s, c] = sincos(theta);
    MatSeries r(theta.order());
    for (std::size_t k = 0; k < theta.size(); ++k)
        r[k] = Mat2::diag(cplx(c[k], s[k]), cplx(c[k], -s[k]));
    return r;
}

} // namespace sgdefect

#pragma once

// Exact sine-Gordon configurations, energies and topological data in both pictures.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sgdefect/errors.hpp"
#include "sgdefect/matcore.hpp"
#include "sgdefect/quadrature.hpp"
#include "sgdefect/series.hpp"

namespace sgdefect {

struct ModelParams {
    double m = 1.0;
    double beta = 1.0;

    void validate() const {
        if (!(m > 0.0) || !std::isfinite(m)) throw ArgumentError("ModelParams: m must be positive");
        if (beta == 0.0 || !std::isfinite(beta)) throw ArgumentError("ModelParams: beta must be nonzero");
    }
};

enum class Picture { space, time };

inline const char* to_string(Picture p) { return p == Picture::space ? "space" : "time"; }

struct FieldSample {
    double phi = 0.0;
    double phi_x = 0.0;
    double phi_t = 0.0;

    /// Equal-time momentum.
    double pi() const { return phi_t; }
    /// Equal-space momentum.
    double Pi() const { return -phi_x; }
};

struct GridWindow {
    double x_min = -40.0, x_max = 40.0;
    double t_min = -40.0, t_max = 40.0;
    std::size_t nx = 16001, nt = 16001;

    void validate() const {
        if (!(x_min < x_max) || !(t_min < t_max)) throw ArgumentError("GridWindow: empty range");
        if (nx < 2 || nt < 2) throw ArgumentError("GridWindow: need at least two nodes per axis");
    }
    double hx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double ht() const { return (t_max - t_min) / static_cast<double>(nt - 1); }
};

/// Taylor jets of the field along the propagation direction of a picture.
struct FieldJets {
    RealSeries phi, phi_x, phi_t;
};

struct VacuumField {};

struct KinkField {
    double v = 0.0;
    double x0 = 0.0;
    int orientation = 1;
    double gamma = 1.0;
};

/// Arbitrary sampler, used for perturbed or deliberately wrong configurations.
struct CustomField {
    std::function<FieldSample(double, double)> fn;
    std::string label = "custom";
};

/// Samples on a uniform (x, t) grid, row-major in t.
struct GridField {
    double x0 = 0.0, hx = 1.0, t0 = 0.0, ht = 1.0;
    std::size_t nx = 0, nt = 0;
    std::vector<double> phi, phi_x, phi_t;

    std::size_t index(std::size_t it, std::size_t ix) const { return it * nx + ix; }
    double x_at(std::size_t ix) const { return x0 + hx * static_cast<double>(ix); }
    double t_at(std::size_t it) const { return t0 + ht * static_cast<double>(it); }
};

namespace detail {

// 4-point Lagrange weights for fractional offset u in [0,1] around nodes -1,0,1,2.
inline std::array<double, 4> cubic_weights(double u) {
    return {-u * (u - 1.0) * (u - 2.0) / 6.0, (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
            -(u + 1.0) * u * (u - 2.0) / 2.0, (u + 1.0) * u * (u - 1.0) / 6.0};
}

inline std::pair<std::size_t, double> locate(double s, double s0, double h, std::size_t n) {
    const double f = (s - s0) / h;
    if (f < -1e-9 || f > static_cast<double>(n - 1) + 1e-9) throw ArgumentError("grid field: sample outside grid");
    auto i = static_cast<std::size_t>(std::clamp(std::floor(f), 1.0, static_cast<double>(n >= 4 ? n - 3 : 0)));
    if (n < 4) i = 0;
    return {i, f - static_cast<double>(i)};
}

inline double grid_interp(const GridField& g, const std::vector<double>& a, double x, double t) {
    if (g.nx < 4 || g.nt < 4) throw ArgumentError("grid field: need at least 4 nodes per axis");
    const auto [ix, ux] = locate(x, g.x0, g.hx, g.nx);
    const auto [it, ut] = locate(t, g.t0, g.ht, g.nt);
    const auto wx = cubic_weights(ux);
    const auto wt = cubic_weights(ut);
    double acc = 0.0;
    for (int a_t = 0; a_t < 4; ++a_t) {
        double row = 0.0;
        for (int a_x = 0; a_x < 4; ++a_x) row += wx[a_x] * a[g.index(it - 1 + a_t, ix - 1 + a_x)];
        acc += wt[a_t] * row;
    }
    return acc;
}

// (4/beta) atan(exp(z0 + c s)) and sech(z0 + c s) as jets; overflow-safe for large |z0|.
inline std::pair<RealSeries, RealSeries> kink_profile_jets(double z0, double c, std::size_t order) {
    const bool right = z0 > 0.0;
    const double sgn = right ? -1.0 : 1.0;
    const RealSeries u = exp(RealSeries::linear(sgn * z0, sgn * c, order + 1));
    RealSeries at = atan(u);
    if (right) {
        at.scale(-1.0);
        at[0] += 0.5 * pi;
    }
    RealSeries den = u * u;
    den[0] += 1.0;
    RealSeries sech = divide(u.truncated(order) + u.truncated(order), den.truncated(order));
    return {at.truncated(order), sech};
}

} // namespace detail

class FieldEvaluator {
public:
    using Kind = std::variant<VacuumField, KinkField, GridField, CustomField>;

    FieldEvaluator(ModelParams p, Kind k) : params_(p), kind_(std::move(k)) { params_.validate(); }

    const ModelParams& params() const { return params_; }
    const Kind& kind() const { return kind_; }
    bool is_vacuum() const { return std::holds_alternative<VacuumField>(kind_); }
    bool is_kink() const { return std::holds_alternative<KinkField>(kind_); }
    bool is_grid() const { return std::holds_alternative<GridField>(kind_); }
    bool is_custom() const { return std::holds_alternative<CustomField>(kind_); }

    std::string describe() const {
        if (is_vacuum()) return "vacuum";
        if (is_kink()) {
            const auto& k = std::get<KinkField>(kind_);
            return "kink(v=" + std::to_string(k.v) + ", x0=" + std::to_string(k.x0) +
                   ", orientation=" + std::to_string(k.orientation) + ")";
        }
        if (const auto* c = std::get_if<CustomField>(&kind_)) return c->label;
        return "grid";
    }

    FieldSample sample(double x, double t) const {
        const double beta = params_.beta, m = params_.m;
        if (is_vacuum()) return {};
        if (const auto* k = std::get_if<KinkField>(&kind_)) {
            const double c = k->orientation * m * k->gamma;
            const double z = c * (x - k->v * t - k->x0);
            FieldSample s;
            s.phi = (4.0 / beta) * std::atan(std::exp(z));
            s.phi_x = (2.0 / beta) * c / std::cosh(z);
            s.phi_t = -k->v * s.phi_x;
            return s;
        }
        if (const auto* c = std::get_if<CustomField>(&kind_)) return c->fn(x, t);
        const auto& g = std::get<GridField>(kind_);
        return {detail::grid_interp(g, g.phi, x, t), detail::grid_interp(g, g.phi_x, x, t),
                detail::grid_interp(g, g.phi_t, x, t)};
    }

    /// Jets in s of phi(x + s, t) (space) or phi(x, t + s) (time), each of the given order.
    FieldJets jets(Picture pic, double x, double t, std::size_t order) const {
        if (is_vacuum()) return {RealSeries(order), RealSeries(order), RealSeries(order)};
        if (const auto* k = std::get_if<KinkField>(&kind_)) {
            const double beta = params_.beta;
            const double c = k->orientation * params_.m * k->gamma;
            const double z0 = c * (x - k->v * t - k->x0);
            const double dz = pic == Picture::space ? c : -k->v * c;
            auto [prof, sech] = detail::kink_profile_jets(z0, dz, order);
            FieldJets j;
            j.phi = prof.scale(4.0 / beta);
            j.phi_x = sech.scale(2.0 * c / beta);
            j.phi_t = j.phi_x;
            j.phi_t.scale(-k->v);
            return j;
        }
        throw ArgumentError("jets: only vacuum and kink fields carry analytic jets");
    }

private:
    ModelParams params_;
    Kind kind_;
};

inline FieldEvaluator make_vacuum(const ModelParams& p) { return FieldEvaluator(p, VacuumField{}); }

/// phi scaled by a constant factor; derivatives scale alike.
inline FieldEvaluator make_scaled(const FieldEvaluator& f, double factor) {
    auto fn = [f, factor](double x, double t) {
        FieldSample s = f.sample(x, t);
        return FieldSample{factor * s.phi, factor * s.phi_x, factor * s.phi_t};
    };
    return FieldEvaluator(f.params(), CustomField{fn, "scaled(" + f.describe() + ")"});
}

inline FieldEvaluator make_kink(const ModelParams& p, double v, double x0, int orientation) {
    if (!(std::abs(v) < 1.0)) throw ArgumentError("make_kink: |v| must be < 1");
    if (orientation != 1 && orientation != -1) throw ArgumentError("make_kink: orientation must be +1 or -1");
    return FieldEvaluator(p, KinkField{v, x0, orientation, 1.0 / std::sqrt(1.0 - v * v)});
}

/// phi_tt - phi_xx + (m^2/beta) sin(beta phi) by central differences of step h.
inline double sg_residual(const FieldEvaluator& f, double x, double t, double h) {
    if (!(h > 0.0)) throw ArgumentError("sg_residual: step must be positive");
    const auto& p = f.params();
    const double c = f.sample(x, t).phi;
    const double tt = (f.sample(x, t + h).phi - 2.0 * c + f.sample(x, t - h).phi) / (h * h);
    const double xx = (f.sample(x + h, t).phi - 2.0 * c + f.sample(x - h, t).phi) / (h * h);
    return tt - xx + (p.m * p.m / p.beta) * std::sin(p.beta * c);
}

/// Quadrature value with the integrand magnitude at the window edges.
struct WindowIntegral {
    double value = 0.0;
    double edge_density = 0.0;
    bool tail_warning = false;
};

inline double potential_density(const ModelParams& p, double phi) {
    const double s = std::sin(0.5 * p.beta * phi);
    return (p.m * p.m / (p.beta * p.beta)) * 2.0 * s * s;
}

inline double density_S(const ModelParams& p, const FieldSample& s) {
    return 0.5 * s.pi() * s.pi() + 0.5 * s.phi_x * s.phi_x + potential_density(p, s.phi);
}

inline double density_T(const ModelParams& p, const FieldSample& s) {
    return -0.5 * s.Pi() * s.Pi() - 0.5 * s.phi_t * s.phi_t + potential_density(p, s.phi);
}

inline constexpr double tail_density_limit = 1e-12;

namespace detail {
template <class F>
WindowIntegral integrate_window(F&& density, double a, double b, std::size_t n) {
    const auto nodes = linspace(a, b, n);
    std::vector<double> vals(n);
    for (std::size_t k = 0; k < n; ++k) vals[k] = density(nodes[k]);
    WindowIntegral r;
    r.value = simpson(vals, (b - a) / static_cast<double>(n - 1));
    r.edge_density = std::max(std::abs(vals.front()), std::abs(vals.back()));
    r.tail_warning = r.edge_density > tail_density_limit;
    return r;
}
} // namespace detail

inline WindowIntegral hamiltonian_S(const FieldEvaluator& f, double t, const GridWindow& w) {
    w.validate();
    return detail::integrate_window([&](double x) { return density_S(f.params(), f.sample(x, t)); }, w.x_min,
                                    w.x_max, w.nx);
}

inline WindowIntegral hamiltonian_T(const FieldEvaluator& f, double x, const GridWindow& w) {
    w.validate();
    return detail::integrate_window([&](double t) { return density_T(f.params(), f.sample(x, t)); }, w.t_min,
                                    w.t_max, w.nt);
}

struct TopologicalCharges {
    int q_minus = 0;
    int q_plus = 0;
};

/// Nearest integer n with phi ~ 2 pi n / beta, or NonDecayingFieldError beyond 0.1 of a period.
inline int round_to_vacuum(const ModelParams& p, double phi) {
    const double q = p.beta * phi / (2.0 * pi);
    const double n = std::round(q);
    if (!(std::abs(q - n) <= 0.1)) throw NonDecayingFieldError("field asymptote is not a vacuum multiple of 2pi/beta");
    return static_cast<int>(n);
}

/// Reads (Q-, Q+) at fixed t (space) or (calQ-, calQ+) at fixed x (time) from phi at distance `far`.
inline TopologicalCharges topological_charges(const FieldEvaluator& f, double fixed, Picture pic, double far = 1e3) {
    if (const auto* g = std::get_if<GridField>(&f.kind())) {
        const double lo = pic == Picture::space ? g->x0 : g->t0;
        const double hi = pic == Picture::space ? g->x_at(g->nx - 1) : g->t_at(g->nt - 1);
        auto at = [&](double s) { return pic == Picture::space ? f.sample(s, fixed).phi : f.sample(fixed, s).phi; };
        return {round_to_vacuum(f.params(), at(lo)), round_to_vacuum(f.params(), at(hi))};
    }
    auto at = [&](double s) { return pic == Picture::space ? f.sample(s, fixed).phi : f.sample(fixed, s).phi; };
    return {round_to_vacuum(f.params(), at(-far)), round_to_vacuum(f.params(), at(far))};
}

/// Distance of phi(s) from the nearest vacuum 2 pi n / beta.
inline double vacuum_distance(const ModelParams& p, double phi) {
    const double period = 2.0 * pi / std::abs(p.beta);
    return std::abs(phi - period * std::round(phi / period));
}

} // namespace sgdefect

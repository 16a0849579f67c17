#pragma once

// Riccati recursions for the off-diagonal dressing Gamma and the two charge hierarchies:
// I_n (conserved in time, space picture) and J_n (conserved in space, time picture),
// on the lambda -> infinity side (n >= 1) and the lambda -> 0 side (I_0, I_{-n}).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sgdefect/errors.hpp"
#include "sgdefect/fields.hpp"
#include "sgdefect/lax.hpp"
#include "sgdefect/matcore.hpp"
#include "sgdefect/quadrature.hpp"
#include "sgdefect/series.hpp"
#include "sgdefect/transition.hpp"

namespace sgdefect {

/// `literal` keeps the recursion exactly as displayed; `corrected` drops the p = 0 term of the
/// second sum at n = 1, which the delta_{n,1} term already contains.
enum class RecursionForm { literal, corrected };

inline const char* to_string(RecursionForm f) { return f == RecursionForm::literal ? "literal" : "corrected"; }

/// lambda -> infinity (Gamma_n) or lambda -> 0 (Gamma'_n: phi -> -phi at fixed momentum).
enum class ExpansionSide { infinity, zero };

inline constexpr std::size_t max_riccati_order = 6;

namespace detail {

/// Jets of (phi, A) feeding the recursion, where A multiplies -(beta/m) Gamma_n.
/// Space: A = phi_x + pi; time: A = phi_t - Pi. Both equal phi_x + phi_t on shell.
inline std::pair<RealSeries, RealSeries> recursion_inputs(const FieldJets& j, Picture pic, ExpansionSide side) {
    if (side == ExpansionSide::infinity) return {j.phi, j.phi_x + j.phi_t};
    RealSeries phi = -j.phi;
    // momentum held fixed: space keeps pi = phi_t, time keeps Pi = -phi_x
    if (pic == Picture::space) return {phi, j.phi_t - j.phi_x};
    return {phi, j.phi_x - j.phi_t};
}

} // namespace detail

/// Gamma_0 .. Gamma_N as jets along the picture direction, from jets of phi and A.
inline std::vector<MatSeries> riccati_recursion(const ModelParams& p, Picture pic, const RealSeries& phi,
                                                const RealSeries& a, std::size_t order, RecursionForm form) {
    const double m = p.m, beta = p.beta;
    const double sgn = pic == Picture::space ? -1.0 : 1.0;
    const std::size_t k = std::min(phi.order(), a.order());
    if (k < order) throw ArgumentError("riccati_recursion: jets too short for the requested order");
    const MatSeries e = exp_sigma3(scaled(phi, beta).truncated(k));
    const MatSeries e_inv = exp_sigma3(scaled(phi, -beta).truncated(k));
    const CplxSeries ac = complexify(a.truncated(k));

    std::vector<MatSeries> g;
    g.reserve(order + 1);
    g.push_back(MatSeries::constant(I_unit * sigma1, k));
    for (std::size_t n = 0; n < order; ++n) {
        MatSeries next = scaled(scaled(g[n].derivative(), sigma3), -2.0 * I_unit / m);
        next += scaled(ac * g[n], cplx(-beta / m));
        if (n == 1) next += scaled(lscaled(sigma1, e - e_inv), sgn * 0.5 * I_unit);
        MatSeries s1(next.order()), s2(next.order());
        for (std::size_t q = 1; q <= n; ++q) s1 += scaled(g[q], sigma1) * g[n + 1 - q];
        if (n >= 1) {
            for (std::size_t q = 0; q + 1 <= n; ++q) {
                if (form == RecursionForm::corrected && n == 1 && q == 0) continue;
                s2 += (scaled(g[q], sigma1) * e) * g[n - 1 - q];
            }
        }
        s2.scale(cplx(sgn));
        s1 += s2;
        next += scaled(s1, 0.5 * I_unit);
        g.push_back(std::move(next));
    }
    return g;
}

/// Riccati coefficients of a field at fixed t (space) or fixed x (time), evaluated on demand.
class RiccatiCoefficients {
public:
    RiccatiCoefficients(FieldEvaluator f, Picture pic, double fixed, std::size_t order, RecursionForm form,
                        ExpansionSide side = ExpansionSide::infinity)
        : field_(std::move(f)), picture_(pic), fixed_(fixed), order_(order), form_(form), side_(side) {
        if (order > max_riccati_order + 1) throw ArgumentError("riccati_coeffs: order above supported range");
    }

    Picture picture() const { return picture_; }
    std::size_t order() const { return order_; }
    RecursionForm form() const { return form_; }
    ExpansionSide side() const { return side_; }

    /// Coefficient jets at position s along the picture direction, each with at least `extra` orders.
    std::vector<MatSeries> jets_at(double s, std::size_t extra = 0) const {
        const double x = picture_ == Picture::space ? s : fixed_;
        const double t = picture_ == Picture::space ? fixed_ : s;
        const FieldJets j = field_.jets(picture_, x, t, order_ + extra + 1);
        const auto [phi, a] = detail::recursion_inputs(j, picture_, side_);
        return riccati_recursion(field_.params(), picture_, phi, a, order_, form_);
    }

    std::vector<Mat2> at(double s) const {
        std::vector<Mat2> r;
        for (const auto& g : jets_at(s)) r.push_back(g.value());
        return r;
    }

private:
    FieldEvaluator field_;
    Picture picture_;
    double fixed_;
    std::size_t order_;
    RecursionForm form_;
    ExpansionSide side_;
};

inline RiccatiCoefficients riccati_coeffs(const FieldEvaluator& f, Picture pic, double fixed, std::size_t order,
                                          RecursionForm form = RecursionForm::corrected) {
    if (order > max_riccati_order) throw ArgumentError("riccati_coeffs: order must be <= 6");
    return RiccatiCoefficients(f, pic, fixed, order, form);
}

/// Frobenius norm of the Riccati equation residual of the truncated series at position s.
/// Infinity side: Gamma = sum_{n<=N} Gamma_n lambda^-n. Zero side: Gamma = e^{-i beta phi sigma3} sum c_n Gamma'_n lambda^n
/// with c_n = (-1)^n in space and 1 in time.
inline double riccati_residual(const FieldEvaluator& f, Picture pic, double fixed, double s, const SpectralPoint& sp,
                               std::size_t order, RecursionForm form, ExpansionSide side = ExpansionSide::infinity) {
    const RiccatiCoefficients rc(f, pic, fixed, order, form, side);
    const auto g = rc.jets_at(s, 1);
    const double x = pic == Picture::space ? s : fixed;
    const double t = pic == Picture::space ? fixed : s;
    const FieldSample fs = f.sample(x, t);
    const ModelParams& p = f.params();
    Mat2 gam, dgam;
    if (side == ExpansionSide::infinity) {
        cplx w = 1.0;
        for (std::size_t n = 0; n <= order; ++n) {
            gam += g[n][0] * w;
            dgam += g[n][1] * w;
            w /= sp.lambda;
        }
    } else {
        Mat2 sum, dsum;
        cplx w = 1.0;
        const double c = pic == Picture::space ? -1.0 : 1.0;
        for (std::size_t n = 0; n <= order; ++n) {
            sum += g[n][0] * w;
            dsum += g[n][1] * w;
            w *= c * sp.lambda;
        }
        const double dphi = pic == Picture::space ? fs.phi_x : fs.phi_t;
        const Mat2 pre = exp_sigma3(-p.beta * fs.phi);
        gam = pre * sum;
        dgam = pre * dsum + (-I_unit * p.beta * dphi) * (sigma3 * pre * sum);
    }
    const Mat2 gen = gauged_generator(pic, p, fs, sp);
    const Mat2 gd = gen.d(), go = gen.o();
    return frobenius(dgam - (go + gd * gam - gam * gd - gam * go * gam));
}

struct ChargeLedger {
    Picture picture = Picture::space;
    std::string provenance = "recursion";
    /// n >= 1: I_n or J_n; n <= 0: I_n or J_n of the lambda -> 0 side.
    std::map<int, cplx> values;
    std::map<int, double> drift;
    bool tail_warning = false;

    cplx at(int n) const {
        auto it = values.find(n);
        if (it == values.end()) throw ArgumentError("ChargeLedger: no entry for n = " + std::to_string(n));
        return it->second;
    }
};

namespace detail {

struct Axis {
    double lo, hi;
    std::size_t n;
};

inline Axis window_axis(const GridWindow& w, Picture pic) {
    w.validate();
    return pic == Picture::space ? Axis{w.x_min, w.x_max, w.nx} : Axis{w.t_min, w.t_max, w.nt};
}

inline bool edge_flag(const FieldEvaluator& f, Picture pic, double fixed, const Axis& ax) {
    auto d = [&](double s) {
        const FieldSample fs = pic == Picture::space ? f.sample(s, fixed) : f.sample(fixed, s);
        return std::max({vacuum_distance(f.params(), fs.phi), std::abs(fs.phi_x), std::abs(fs.phi_t)});
    };
    return std::max(d(ax.lo), d(ax.hi)) > tail_density_limit;
}

} // namespace detail

/// I_n (space) or J_n (time) for n = 1..order from the (1,1) entry of the Y_n integrands.
inline ChargeLedger charges_infinity(const FieldEvaluator& f, Picture pic, double fixed, std::size_t order,
                                     const GridWindow& w, RecursionForm form = RecursionForm::corrected) {
    if (order < 1 || order > max_riccati_order) throw ArgumentError("charges_infinity: order must be in 1..6");
    const auto ax = detail::window_axis(w, pic);
    const RiccatiCoefficients rc(f, pic, fixed, order + 1, form);
    const double m = f.params().m, beta = f.params().beta;
    const double tsgn = pic == Picture::space ? -1.0 : 1.0;
    const auto nodes = linspace(ax.lo, ax.hi, ax.n);
    std::vector<std::vector<cplx>> dens(order + 1, std::vector<cplx>(ax.n));
    for (std::size_t k = 0; k < ax.n; ++k) {
        const auto g = rc.at(nodes[k]);
        const double x = pic == Picture::space ? nodes[k] : fixed;
        const double t = pic == Picture::space ? fixed : nodes[k];
        const Mat2 e = exp_sigma3(beta * f.sample(x, t).phi);
        for (std::size_t n = 1; n <= order; ++n) {
            Mat2 inner = g[n + 1] + tsgn * (e * g[n - 1]);
            if (n == 1) inner += (-tsgn) * (I_unit * sigma1);
            dens[n][k] = (-0.25 * m) * (sigma2 * inner)(0, 0);
        }
    }
    ChargeLedger led;
    led.picture = pic;
    const double h = (ax.hi - ax.lo) / static_cast<double>(ax.n - 1);
    for (std::size_t n = 1; n <= order; ++n) led.values[static_cast<int>(n)] = simpson(dens[n], h);
    led.tail_warning = detail::edge_flag(f, pic, fixed, ax);
    return led;
}

/// I_0, I_{-1}, .. I_{-order} (space) or J_0 .. J_{-order} (time) from the lambda -> 0 densities.
inline ChargeLedger charges_zero(const FieldEvaluator& f, Picture pic, double fixed, std::size_t order,
                                 const GridWindow& w, RecursionForm form = RecursionForm::corrected) {
    if (order > max_riccati_order) throw ArgumentError("charges_zero: order must be <= 6");
    const auto ax = detail::window_axis(w, pic);
    const RiccatiCoefficients rc(f, pic, fixed, order + 1, form, ExpansionSide::zero);
    const double m = f.params().m, beta = f.params().beta;
    const auto nodes = linspace(ax.lo, ax.hi, ax.n);
    std::vector<std::vector<cplx>> dens(order + 1, std::vector<cplx>(ax.n));
    for (std::size_t k = 0; k < ax.n; ++k) {
        const double x = pic == Picture::space ? nodes[k] : fixed;
        const double t = pic == Picture::space ? fixed : nodes[k];
        const FieldSample fs = f.sample(x, t);
        dens[0][k] = -0.5 * beta * (pic == Picture::space ? fs.phi_x : fs.phi_t);
        if (order == 0) continue;
        const auto g = rc.at(nodes[k]);
        const Mat2 e_inv = exp_sigma3(-beta * fs.phi);
        for (std::size_t n = 1; n <= order; ++n) {
            Mat2 inner;
            if (pic == Picture::space) {
                const double s = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n-1} = (-1)^{n+1}
                inner = s * (e_inv * g[n - 1]) - s * g[n + 1];
            } else {
                inner = e_inv * g[n - 1] + g[n + 1];
            }
            if (n == 1) inner -= I_unit * sigma1;
            dens[n][k] = (-0.25 * m) * (sigma2 * inner)(0, 0);
        }
    }
    ChargeLedger led;
    led.picture = pic;
    const double h = (ax.hi - ax.lo) / static_cast<double>(ax.n - 1);
    for (std::size_t n = 0; n <= order; ++n) led.values[-static_cast<int>(n)] = simpson(dens[n], h);
    led.tail_warning = detail::edge_flag(f, pic, fixed, ax);
    return led;
}

/// Both sides of a ledger merged.
inline ChargeLedger merge(const ChargeLedger& a, const ChargeLedger& b) {
    ChargeLedger r = a;
    for (const auto& [n, v] : b.values) r.values[n] = v;
    for (const auto& [n, d] : b.drift) r.drift[n] = d;
    r.tail_warning = a.tail_warning || b.tail_warning;
    return r;
}

/// Fills `drift` with |value - other| / max(|value|, 1e-300) entrywise; 0 where both vanish.
inline void record_drift(ChargeLedger& led, const ChargeLedger& other) {
    for (const auto& [n, v] : led.values) {
        const cplx w = other.at(n);
        const double scale = std::max(std::abs(v), std::abs(w));
        led.drift[n] = scale == 0.0 ? 0.0 : std::abs(v - w) / scale;
    }
}

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    double relative_gap = 0.0;
};

namespace detail {
inline IdentityCheck make_identity(double lhs, double rhs) {
    IdentityCheck c{lhs, rhs, lhs - rhs, 0.0};
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    c.relative_gap = scale == 0.0 ? 0.0 : std::abs(c.gap) / scale;
    return c;
}
} // namespace detail

/// I_{-1} - I_1 against (beta^2 / 2m) H_S.
inline IdentityCheck energy_identity_S(const FieldEvaluator& f, double t, const GridWindow& w,
                                       const ChargeLedger& ledger) {
    const auto& p = f.params();
    const double rhs = p.beta * p.beta / (2.0 * p.m) * hamiltonian_S(f, t, w).value;
    return detail::make_identity((ledger.at(-1) - ledger.at(1)).real(), rhs);
}

/// J_1 + J_{-1} against (beta^2 / 2m) H_T, both integrated over t.
inline IdentityCheck energy_identity_T(const FieldEvaluator& f, double x, const GridWindow& w,
                                       const ChargeLedger& ledger) {
    const auto& p = f.params();
    const double rhs = p.beta * p.beta / (2.0 * p.m) * hamiltonian_T(f, x, w).value;
    return detail::make_identity((ledger.at(1) + ledger.at(-1)).real(), rhs);
}

struct LnaFitReport {
    std::vector<double> lambdas;
    std::vector<cplx> ln_a;
    std::vector<double> remainder;
    double slope = 0.0;      // fitted exponent p in remainder ~ lambda^-p
    double intercept = 0.0;  // log remainder at lambda = 1
    int branch_shift = 0;    // multiples of 2 pi i removed so that ln a -> 0 at large lambda
};

/// Principal log of a along an increasing lambda sweep, continuous in arg; BranchError if two
/// neighbours differ by more than pi/2 in phase after unwrapping.
inline std::vector<cplx> unwrapped_log(const std::vector<cplx>& a, int* shift_out = nullptr) {
    std::vector<cplx> r;
    r.reserve(a.size());
    double offset = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == cplx(0.0)) throw BranchError("unwrapped_log: zero of a on the sweep");
        cplx l = std::log(a[k]);
        if (k > 0) {
            double im = l.imag() + offset;
            const double prev = r.back().imag();
            while (im - prev > pi) { offset -= 2.0 * pi; im -= 2.0 * pi; }
            while (im - prev < -pi) { offset += 2.0 * pi; im += 2.0 * pi; }
            if (std::abs(im - prev) > 0.5 * pi) throw BranchError("unwrapped_log: phase jump along the lambda sweep");
        }
        r.emplace_back(l.real(), l.imag() + offset);
    }
    int shift = 0;
    if (!r.empty()) {
        shift = static_cast<int>(std::round(r.back().imag() / (2.0 * pi)));
        for (auto& v : r) v -= cplx(0.0, 2.0 * pi * shift);
    }
    if (shift_out) *shift_out = shift;
    return r;
}

/// Least-squares slope of log(remainder) against log(lambda).
inline std::pair<double, double> loglog_fit(const std::vector<double>& lambdas, const std::vector<double>& rem) {
    if (lambdas.size() != rem.size() || lambdas.size() < 2) throw ArgumentError("loglog_fit: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (!(rem[k] > 0.0)) throw NumericError("loglog_fit: non-positive remainder");
        const double lx = std::log(lambdas[k]), ly = std::log(rem[k]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {-b, (sy - b * sx) / n};
}

/// Monodromy half-width and step density used for the large-lambda fit.
struct FitNumerics {
    double half_width = 25.0;
    double steps_per_radian = 2000.0 / pi;  // steps per unit of max(|k|) * length
};

/// Compares ln a (space) or ln calA (time) on a real lambda ray against i sum_{n<=3} I_n lambda^-n.
inline LnaFitReport lna_asymptotic_fit(const FieldEvaluator& f, Picture pic, double fixed,
                                       const std::vector<double>& lambdas, const ChargeLedger& ledger,
                                       const FitNumerics& num = {}) {
    LnaFitReport rep;
    rep.lambdas = lambdas;
    if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw ArgumentError("lna_asymptotic_fit: lambdas must increase");
    for (double l : lambdas)
        if (!(l >= 10.0 && l <= 100.0)) throw ArgumentError("lna_asymptotic_fit: lambda must lie in [10, 100]");
    std::vector<cplx> a(lambdas.size());
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const SpectralPoint sp = spectral(lambdas[k], f.params());
        const double kmax = std::max({std::abs(sp.k0), std::abs(sp.k1), sp.m});
        const auto steps = static_cast<std::size_t>(std::ceil(num.steps_per_radian * 2.0 * num.half_width * kmax));
        a[k] = monodromy(f, pic, fixed, num.half_width, sp, steps).a_entry;
    }
    rep.ln_a = unwrapped_log(a, &rep.branch_shift);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        cplx series = 0.0;
        for (int n = 1; n <= 3; ++n) series += ledger.at(n) * std::pow(lambdas[k], -n);
        rep.remainder.push_back(std::abs(rep.ln_a[k] - I_unit * series));
    }
    if (f.is_vacuum()) return rep;
    const auto [slope, icpt] = loglog_fit(lambdas, rep.remainder);
    rep.slope = slope;
    rep.intercept = icpt;
    return rep;
}

/// Least-squares coefficients c_1..c_count of ln a / i = sum c_n lambda^-n over the fit sweep:
/// the charges as seen by the monodromy (provenance "monodromy_fit").
inline ChargeLedger charges_from_fit(const LnaFitReport& rep, Picture pic, int count) {
    const std::size_t n = rep.lambdas.size(), k = static_cast<std::size_t>(count);
    if (count < 1 || n < k) throw ArgumentError("charges_from_fit: need at least `count` sweep points");
    // Normal equations in the scaled basis (lambda_0 / lambda)^j for conditioning.
    const double l0 = rep.lambdas.front();
    std::vector<std::vector<cplx>> a(k, std::vector<cplx>(k + 1, 0.0));
    for (std::size_t q = 0; q < n; ++q) {
        const cplx y = rep.ln_a[q] / I_unit;
        std::vector<double> b(k);
        for (std::size_t j = 0; j < k; ++j) b[j] = std::pow(l0 / rep.lambdas[q], static_cast<double>(j + 1));
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) a[r][c] += b[r] * b[c];
            a[r][k] += b[r] * y;
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const cplx f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    ChargeLedger led;
    led.picture = pic;
    led.provenance = "monodromy_fit";
    for (std::size_t j = 0; j < k; ++j)
        led.values[static_cast<int>(j + 1)] = a[j][k] / a[j][j] * std::pow(l0, static_cast<double>(j + 1));
    return led;
}

/// CSV with columns picture,n,value_re,value_im,provenance,drift.
inline void write_ledger_csv(std::ostream& os, const ChargeLedger& led, bool header = true) {
    if (header) os << "picture,n,value_re,value_im,provenance,drift\n";
    const auto old = os.precision(17);
    for (const auto& [n, v] : led.values) {
        auto d = led.drift.find(n);
        os << to_string(led.picture) << ',' << n << ',' << v.real() << ',' << v.imag() << ',' << led.provenance << ',';
        if (d != led.drift.end()) os << d->second;
        os << '\n';
    }
    os.precision(old);
}

} // namespace sgdefect

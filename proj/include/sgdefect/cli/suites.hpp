#pragma once

// The eight verification suites run by the batch driver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "sgdefect/charges.hpp"
#include "sgdefect/cli/report.hpp"
#include "sgdefect/cli/scenario.hpp"
#include "sgdefect/defect.hpp"
#include "sgdefect/lax.hpp"
#include "sgdefect/rmatrix.hpp"
#include "sgdefect/transition.hpp"

namespace sgdefect::cli {

namespace detail {

/// A bulk field of the scenario with the position where time-picture checks are probed.
struct Member {
    std::string name;
    const FieldEvaluator* field;
    double x_probe;
};

inline std::vector<Member> members(const Scenario& s) {
    if (s.is_defect()) return {{"right", &s.pair->right, 0.5}, {"left", &s.pair->left, -0.5}};
    return {{"field", &*s.field, 0.0}};
}

inline bool decays_in_time(const FieldEvaluator& f, double x) {
    try {
        topological_charges(f, x, Picture::time);
        return true;
    } catch (const NonDecayingFieldError&) {
        return false;
    }
}

inline std::string tag(const std::string& base, const std::string& member) { return base + "[" + member + "]"; }

inline void skip_grid(Report& r, const Member& m) {
    r.note(m.name + " field is grid-backed: whole-line space-picture and jet-based checks are skipped");
}

inline nlohmann::ordered_json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

} // namespace detail

inline Report suite_lax_residual(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    const std::vector<std::pair<double, double>> probes{{0.0, 0.0}, {0.7, -0.3}, {-1.2, 0.9}, {2.0, 1.5}};
    for (const auto& m : detail::members(s)) {
        if (m.field->is_grid()) {
            detail::skip_grid(r, m);
            continue;
        }
        for (double l : c.lambdas) {
            const SpectralPoint sp = spectral(l, c.model);
            double zc = 0.0, gs = 0.0, gt = 0.0;
            for (const auto& [x, t] : probes) {
                zc = std::max(zc, zero_curvature_residual(*m.field, x, t, sp, 1e-3));
                gs = std::max(gs, gauge_consistency_residual(*m.field, Picture::space, x, t, sp, 1e-5));
                gt = std::max(gt, gauge_consistency_residual(*m.field, Picture::time, x, t, sp, 1e-5));
            }
            r.add(detail::tag("zero_curvature", m.name), {{"lambda", l}, {"h", 1e-3}}, zc, 0.0, zc, c.tol("lax_residual"));
            r.add(detail::tag("gauge_U_hat", m.name), {{"lambda", l}, {"h", 1e-5}}, gs, 0.0, gs, c.tol("gauge_consistency"));
            r.add(detail::tag("gauge_V_hat", m.name), {{"lambda", l}, {"h", 1e-5}}, gt, 0.0, gt, c.tol("gauge_consistency"));
        }
    }
    return r;
}

inline Report suite_monodromy(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    const double w = c.numerics.half_width;
    const std::size_t ns = c.numerics.nsteps;
    for (const auto& m : detail::members(s)) {
        const bool grid = m.field->is_grid();
        if (grid) detail::skip_grid(r, m);
        const double x0 = m.x_probe, x1 = m.x_probe + (m.x_probe < 0.0 ? -0.5 : 0.5);
        const bool timelike = detail::decays_in_time(*m.field, x0) && detail::decays_in_time(*m.field, x1);
        if (!timelike) r.note(m.name + " field does not decay in t at the probe positions: time monodromy skipped");
        for (double l : c.lambdas) {
            const SpectralPoint sp = spectral(l, c.model);
            if (!grid) {
                const cplx a0 = monodromy(*m.field, Picture::space, 0.0, w, sp, ns).a_entry;
                const cplx a1 = monodromy(*m.field, Picture::space, 2.0, w, sp, ns).a_entry;
                const double d = std::abs(a0 - a1);
                r.add(detail::tag("a_time_drift", m.name), {{"lambda", l}, {"t0", 0.0}, {"t1", 2.0}}, std::abs(a0),
                      std::abs(a1), d, c.tol("monodromy_drift"));
            }
            if (timelike) {
                const cplx a0 = monodromy(*m.field, Picture::time, x0, w, sp, ns).a_entry;
                const cplx a1 = monodromy(*m.field, Picture::time, x1, w, sp, ns).a_entry;
                const double d = std::abs(a0 - a1);
                r.add(detail::tag("calA_space_drift", m.name), {{"lambda", l}, {"x0", x0}, {"x1", x1}}, std::abs(a0),
                      std::abs(a1), d, c.tol("monodromy_drift"));
            }
        }
    }
    return r;
}

inline Report suite_charges(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    const GridWindow win = c.numerics.window();
    r.metadata["ledgers"] = nlohmann::ordered_json::array();
    auto record = [&](const std::string& member, const ChargeLedger& led) {
        for (const auto& [n, v] : led.values) {
            nlohmann::ordered_json e;
            e["field"] = member;
            e["picture"] = to_string(led.picture);
            e["n"] = n;
            e["value_re"] = v.real();
            e["value_im"] = v.imag();
            e["provenance"] = led.provenance;
            auto d = led.drift.find(n);
            e["drift"] = d == led.drift.end() ? 0.0 : d->second;
            r.metadata["ledgers"].push_back(e);
        }
    };
    auto drifts = [&](const std::string& key, const std::string& member, ChargeLedger& a, const ChargeLedger& b,
                      const char* pos, double p0, double p1) {
        record_drift(a, b);
        for (const auto& [n, v] : a.values) {
            const double gap = std::abs(v - b.at(n)) / std::max(1.0, std::abs(v));
            r.add(detail::tag(key, member), {{"n", n}, {std::string(pos) + "0", p0}, {std::string(pos) + "1", p1}},
                  v.real(), b.at(n).real(), gap, c.tol("charge_drift"));
        }
        record(member, a);
    };
    for (const auto& m : detail::members(s)) {
        if (m.field->is_grid()) {
            detail::skip_grid(r, m);
            continue;
        }
        const FieldEvaluator& f = *m.field;
        ChargeLedger s0 = merge(charges_infinity(f, Picture::space, 0.0, 4, win), charges_zero(f, Picture::space, 0.0, 3, win));
        const ChargeLedger s1 = merge(charges_infinity(f, Picture::space, 1.0, 4, win), charges_zero(f, Picture::space, 1.0, 3, win));
        if (s0.tail_warning) r.note(m.name + ": space window edge density above the tail limit");
        const auto q = topological_charges(f, 0.0, Picture::space);
        const double top = -pi * (q.q_plus - q.q_minus);
        r.add(detail::tag("I_0_topological", m.name), {{"t", 0.0}}, s0.at(0).real(), top,
              std::abs(s0.at(0).real() - top), c.tol("topological"));
        drifts("I_n_time_drift", m.name, s0, s1, "t", 0.0, 1.0);

        const double x0 = m.x_probe, x1 = m.x_probe + (m.x_probe < 0.0 ? -0.5 : 0.5);
        if (!(detail::decays_in_time(f, x0) && detail::decays_in_time(f, x1))) {
            r.note(m.name + " field does not decay in t at the probe positions: J_n skipped");
            continue;
        }
        ChargeLedger t0 = merge(charges_infinity(f, Picture::time, x0, 4, win), charges_zero(f, Picture::time, x0, 3, win));
        const ChargeLedger t1 = merge(charges_infinity(f, Picture::time, x1, 4, win), charges_zero(f, Picture::time, x1, 3, win));
        if (t0.tail_warning) r.note(m.name + ": time window edge density above the tail limit");
        const auto qt = topological_charges(f, x0, Picture::time);
        const double topt = -pi * (qt.q_plus - qt.q_minus);
        r.add(detail::tag("J_0_topological", m.name), {{"x", x0}}, t0.at(0).real(), topt,
              std::abs(t0.at(0).real() - topt), c.tol("topological"));
        drifts("J_n_space_drift", m.name, t0, t1, "x", x0, x1);
    }
    return r;
}

inline Report suite_energy(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    const GridWindow win = c.numerics.window();
    for (const auto& m : detail::members(s)) {
        if (m.field->is_grid()) {
            detail::skip_grid(r, m);
            continue;
        }
        const FieldEvaluator& f = *m.field;
        const auto ls = merge(charges_infinity(f, Picture::space, 0.0, 1, win), charges_zero(f, Picture::space, 0.0, 1, win));
        const auto es = energy_identity_S(f, 0.0, win, ls);
        r.add(detail::tag("H_S_identity", m.name), {{"t", 0.0}}, es.lhs, es.rhs, es.relative_gap, c.tol("energy_identity"));
        if (hamiltonian_S(f, 0.0, win).tail_warning) r.note(m.name + ": H_S window tail above the limit");
        for (double x : {m.x_probe, m.x_probe + (m.x_probe < 0.0 ? -0.5 : 0.5)}) {
            if (!detail::decays_in_time(f, x)) {
                r.note(m.name + " field does not decay in t: H_T identity skipped");
                break;
            }
            const auto lt = merge(charges_infinity(f, Picture::time, x, 1, win), charges_zero(f, Picture::time, x, 1, win));
            const auto et = energy_identity_T(f, x, win, lt);
            r.add(detail::tag("H_T_identity", m.name), {{"x", x}}, et.lhs, et.rhs, et.relative_gap, c.tol("energy_identity"));
            if (hamiltonian_T(f, x, win).tail_warning) r.note(m.name + ": H_T window tail above the limit");
        }
    }
    return r;
}

inline Report suite_appendix(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    const double x = 1.0, t = 0.5, w = c.numerics.half_width;
    for (const auto& m : detail::members(s)) {
        if (m.field->is_grid()) {
            detail::skip_grid(r, m);
            continue;
        }
        if (!detail::decays_in_time(*m.field, x)) {
            r.note(m.name + " field does not decay in t: appendix equality skipped");
            continue;
        }
        const int q_space = topological_charges(*m.field, t, Picture::space).q_minus;
        const int q_time = topological_charges(*m.field, x, Picture::time).q_minus;
        if (q_space != q_time)
            r.note(m.name + ": the half-lines x -> -inf and t -> -inf end in different vacua; the two solutions then "
                            "differ by the scattering data of the kink");
        for (double l : c.lambdas) {
            const SpectralPoint sp = spectral(l, c.model);
            const double res = appendix_equality_residual(*m.field, x, t, sp, w, c.numerics.nsteps);
            r.add(detail::tag("appendix_equality", m.name), {{"lambda", l}, {"x", x}, {"t", t}, {"W", w}}, res, 0.0, res,
                  c.tol("appendix"));
        }
    }
    return r;
}

inline Report suite_defect(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    if (!s.is_defect()) {
        r.note("scenario has no defect");
        return r;
    }
    const DefectPair& pr = *s.pair;
    const bool grid = pr.right.is_grid() || pr.left.is_grid();
    for (const auto& n : s.notes) r.note(n);
    r.metadata["sigma"] = pr.defect.sigma;

    double dc = 0.0;
    for (double t = -5.0; t <= 5.0 + 1e-12; t += 0.25) dc = std::max(dc, defect_condition_residual(pr, t));
    r.add("defect_conditions", {{"t_min", -5.0}, {"t_max", 5.0}}, dc, 0.0, dc, c.tol("defect_condition"));
    if (pr.right.is_grid()) {
        const auto [compat, sg] = grid_residuals(pr.params, std::get<GridField>(pr.right.kind()));
        r.add("backlund_compatibility", {}, compat, 0.0, compat, 1e-4);
        r.add("backlund_sine_gordon", {}, sg, 0.0, sg, 1e-4);
    }

    for (double l : c.lambdas) {
        const SpectralPoint sp = spectral(l, c.model);
        double le = 0.0;
        for (double t : {-1.0, 0.0, 0.5, 1.0}) le = std::max(le, L_equation_residual(pr, t, sp, 1e-4));
        r.add("L_equation", {{"lambda", l}, {"h", 1e-4}}, le, 0.0, le, c.tol("l_equation"));
        if (grid) continue;
        const Mat2 m0 = defect_monodromy_S(pr, 0.0, sp, c.numerics.half_width, c.numerics.nsteps);
        const Mat2 m1 = defect_monodromy_S(pr, 1.0, sp, c.numerics.half_width, c.numerics.nsteps);
        const double d = std::max(std::abs(m0(0, 0) - m1(0, 0)), std::abs(m0(1, 1) - m1(1, 1)));
        r.add("M_S_diag_drift", {{"lambda", l}, {"t0", 0.0}, {"t1", 1.0}}, std::abs(m0(0, 0)), std::abs(m1(0, 0)), d,
              c.tol("defect_drift"));
        SplittingReport sr;
        try {
            sr = defect_splitting(pr, 0.0, sp, c.numerics.half_width, c.numerics.nsteps, c.tol("splitting"));
        } catch (const SingularityError& e) {
            r.note("splitting skipped at lambda = " + detail::fmt(l) + ": " + e.what());
            continue;
        }
        r.add("ln_M_S_splitting", {{"lambda", l}}, sr.log_m11.real(), (sr.i_plus + sr.i_minus + sr.i_defect).real(),
              sr.gap, c.tol("splitting"));
        r.metadata["splitting_transcription"][std::to_string(l)] = sr.matched;
    }
    if (grid) r.note("M_S and its splitting need the whole x line: skipped for grid-backed pairs");

    const double xr = 0.5, xl = -0.5;
    if (detail::decays_in_time(pr.right, xr) && detail::decays_in_time(pr.left, xl)) try {
        const auto g = generating_relation_check(pr, xr, xl, c.lambdas, c.numerics.half_width, c.numerics.nsteps,
                                                 c.tol("generating"));
        const bool printed = g.verdict == "printed";
        r.metadata["c_candidate_verdict"] = g.verdict;
        r.metadata["parities"] = {{"p_plus", g.parities.p_plus}, {"p_minus", g.parities.p_minus}};
        auto& rows = r.metadata["generating"] = nlohmann::ordered_json::array();
        for (const auto& row : g.rows) {
            nlohmann::ordered_json e;
            e["sigma"] = pr.defect.sigma;
            e["parities"] = {g.parities.p_plus, g.parities.p_minus};
            e["lambda"] = row.lambda;
            e["ln_a"] = detail::cplx_json(row.ln_a);
            e["ln_a_tilde"] = detail::cplx_json(row.ln_a_tilde);
            e["lnC_printed"] = detail::cplx_json(row.ln_c_printed);
            e["lnC_alt"] = detail::cplx_json(row.ln_c_alt);
            e["gaps"] = {{"printed", row.gap_printed}, {"alt", row.gap_alt}};
            rows.push_back(e);
            const double gap = printed ? row.gap_printed : row.gap_alt;
            r.add(printed ? "generating_relation(printed)" : "generating_relation(alt)", {{"lambda", row.lambda}},
                  (row.ln_a - row.ln_a_tilde).imag(), (printed ? row.ln_c_printed : row.ln_c_alt).imag(), gap,
                  c.tol("generating"));
        }
        const double far = printed ? g.large_lambda_ln_c_printed : g.large_lambda_ln_c_alt;
        r.add(printed ? "ln_C_large_lambda(printed)" : "ln_C_large_lambda(alt)", {{"lambda", 1e8}}, far, 0.0, far,
              c.tol("generating"));

        const auto h = ham_shift_check(pr, xr, xl, c.numerics.window());
        r.metadata["ham_shift"] = {{"lhs", h.lhs}, {"rhs_printed", h.rhs_printed}, {"rhs_alt", h.rhs_alt},
                                   {"gap_printed", h.gap_printed}, {"gap_alt", h.gap_alt}};
        r.add(printed ? "H_T_shift(printed)" : "H_T_shift(alt)", {{"x_right", xr}, {"x_left", xl}}, h.lhs,
              printed ? h.rhs_printed : h.rhs_alt, printed ? h.gap_printed : h.gap_alt, c.tol("ham_shift"));

        const auto sf = s_functional(pr, c.numerics.window(), xr, xl);
        r.metadata["S_T"] = {{"value", sf.s_value}, {"limit_minus", sf.limit_minus}, {"limit_plus", sf.limit_plus},
                             {"tail_warning", sf.tail_warning}};
    } catch (const TruncationError& e) {
        r.note(std::string("time monodromy of the pair: ") + e.what());
        r.add("generating_relation_truncation", {{"W", c.numerics.half_width}}, 0.0, 0.0,
              std::numeric_limits<double>::infinity(), c.tol("generating"));
    } else {
        r.note("a member field does not decay in t: generating relation, H_T shift and S_T skipped");
    }

    std::vector<double> tg;
    for (int k = -30; k <= 30; ++k) tg.push_back(0.1 * k);
    const auto cr = canonical_residual(pr, tg, 1e-4);
    r.add("canonical_right", {{"h", 1e-4}}, cr.right, 0.0, cr.right, c.tol("canonical"));
    r.add("canonical_left", {{"h", 1e-4}}, cr.left, 0.0, cr.left, c.tol("canonical"));
    return r;
}

inline Report suite_rmatrix(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    std::mt19937 rng(c.numerics.seed);
    std::uniform_real_distribution<double> field_dist(-3.0, 3.0), lambda_dist(0.3, 3.0);
    double gs = 0.0, gt = 0.0, flip = 1e300;
    for (int i = 0; i < 20; ++i) {
        const FieldSample fs{field_dist(rng), field_dist(rng), field_dist(rng)};
        for (int j = 0; j < 20; ++j) {
            const SpectralPoint a = spectral(lambda_dist(rng), c.model), b = spectral(lambda_dist(rng), c.model);
            gs = std::max(gs, ultralocal_check(Picture::space, c.model, fs, a, b, 0.01).gap);
            gt = std::max(gt, ultralocal_check(Picture::time, c.model, fs, a, b, 0.01).gap);
            flip = std::min(flip, ultralocal_check(Picture::time, c.model, fs, a, b, 0.01, true).gap);
        }
    }
    r.add("ultralocal_S", {{"samples", 20}, {"spectral_pairs", 20}}, gs, 0.0, gs, c.tol("ultralocal"));
    r.add("ultralocal_T", {{"samples", 20}, {"spectral_pairs", 20}}, gt, 0.0, gt, c.tol("ultralocal"));
    r.add("ultralocal_T_sign_flip_control", {}, flip, 1e-2, flip > 1e-2 ? 0.0 : 1e-2 - flip, 0.0);

    double anti = 0.0;
    for (double l : c.lambdas)
        for (double u : c.lambdas) {
            if (std::abs(l * l - u * u) == 0.0) continue;
            const Mat4 d = r_matrix(l, u, c.model).matrix + r_matrix(u, l, c.model).matrix;
            anti = std::max(anti, max_abs(d));
        }
    r.add("r_antisymmetry", {}, anti, 0.0, anti, c.tol("r_antisymmetry"));

    const auto ms = detail::members(s);
    const detail::Member& m = ms.front();
    const double xf = m.field->is_grid() ? m.x_probe : 0.0;
    if (!detail::decays_in_time(*m.field, xf)) r.note(m.name + " field does not decay in t at the probe position");
    const SpectralPoint a = spectral(c.numerics.involution_lambda, c.model);
    const SpectralPoint b = spectral(c.numerics.involution_mu, c.model);
    const auto& sites = c.numerics.lattice_sites;
    std::vector<double> gaps;
    for (std::size_t n : sites) gaps.push_back(transition_bracket_check(Picture::time, *m.field, xf, -5.0, 5.0, a, b, n).gap);
    r.add(detail::tag("transition_bracket_T", m.name), {{"n_sites", static_cast<double>(sites.back())}, {"x", xf}},
          gaps.back(), 0.0, gaps.back(), c.tol("transition_bracket"));
    const bool vacuum = c.solution.kind == "vacuum";
    if (vacuum) r.note("vacuum: the lattice bracket error is O(Delta^2), so the first-order halving cases are not run");
    for (std::size_t k = 1; k < sites.size(); ++k) {
        if (sites[k] != 2 * sites[k - 1]) continue;
        const double ratio = gaps[k - 1] > 0.0 ? gaps[k] / gaps[k - 1] : 0.0;
        r.metadata["halving_ratios"].push_back({{"n_from", sites[k - 1]}, {"n_to", sites[k]}, {"ratio", ratio}});
        if (vacuum) continue;
        r.add(detail::tag("transition_bracket_T_halving", m.name),
              {{"n_from", static_cast<double>(sites[k - 1])}, {"n_to", static_cast<double>(sites[k])}}, ratio, 0.5,
              std::abs(ratio - 0.5), c.tol("bracket_order"));
    }
    const double swapped = transition_bracket_check(Picture::time, *m.field, xf, -5.0, 5.0, b, a, sites.back()).gap;
    r.metadata["swap_invariance"] = {{"gap", gaps.back()}, {"gap_swapped", swapped}};
    r.note("lattice brackets use Kronecker delta / Delta for the delta function and the linearized site bracket");
    return r;
}

inline Report suite_involution(const ScenarioConfig& c, const Scenario& s) {
    Report r;
    const SpectralPoint a = spectral(c.numerics.involution_lambda, c.model);
    const SpectralPoint b = spectral(c.numerics.involution_mu, c.model);
    const auto& sites = c.numerics.lattice_sites;
    for (const auto& m : detail::members(s)) {
        if (!detail::decays_in_time(*m.field, m.x_probe)) {
            r.note(m.name + " field does not decay in t: involution skipped");
            continue;
        }
        double half = c.numerics.half_width;
        if (const auto* g = std::get_if<GridField>(&m.field->kind()))
            half = std::min(half, 0.5 * (g->t_at(g->nt - 1) - g->t0) - 1.0);
        std::vector<double> v;
        for (std::size_t n : sites) v.push_back(involution_check(Picture::time, *m.field, m.x_probe, half, a, b, n).magnitude);
        r.add(detail::tag("involution", m.name), {{"x", m.x_probe}, {"n_sites", static_cast<double>(sites.back())}, {"T", half}},
              v.back(), 0.0, v.back(), c.tol("involution"));
        // Rises below 1e-14 are rounding, not growth.
        double rise = 0.0;
        for (std::size_t k = 1; k < v.size(); ++k) rise = std::max(rise, v[k] - std::max(v[k - 1], 1e-14));
        r.add(detail::tag("involution_nonincreasing", m.name), {{"x", m.x_probe}}, v.front(), v.back(), std::max(rise, 0.0), 0.0);
    }
    return r;
}

using SuiteFn = std::function<Report(const ScenarioConfig&, const Scenario&)>;

inline SuiteFn suite_function(const std::string& name) {
    if (name == "lax-residual") return suite_lax_residual;
    if (name == "monodromy-conservation") return suite_monodromy;
    if (name == "charges") return suite_charges;
    if (name == "energy-identities") return suite_energy;
    if (name == "appendix") return suite_appendix;
    if (name == "defect") return suite_defect;
    if (name == "rmatrix") return suite_rmatrix;
    if (name == "involution") return suite_involution;
    throw ConfigError("unknown suite '" + name + "'");
}

} // namespace sgdefect::cli

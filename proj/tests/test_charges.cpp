#include <gtest/gtest.h>

#include <sstream>

#include "sgdefect/charges.hpp"

using namespace sgdefect;

namespace {

const ModelParams unit{1.0, 1.0};
const GridWindow wide{-40, 40, -80, 80, 16001, 32001};

double kappa(double v) { return std::sqrt((1.0 - v) / (1.0 + v)); }

// Coefficients of ln((lambda - i k)/(lambda + i k)) = i sum_n c_n lambda^-n at infinity
// and i sum_n c_-n lambda^n near zero (branch at lambda -> 0 fixed by the topological charge).
double series_at_infinity(double k, int n) {
    if (n % 2 == 0) return 0.0;
    const int j = (n - 1) / 2;
    return -2.0 * (j % 2 == 0 ? 1.0 : -1.0) * std::pow(k, n) / n;
}
double series_at_zero(double k, int n) {
    if (n % 2 == 0) return 0.0;
    const int j = (n - 1) / 2;
    return 2.0 * (j % 2 == 0 ? 1.0 : -1.0) * std::pow(k, -n) / n;
}

double loglog_slope(double a, double b, double ra, double rb) { return std::log(ra / rb) / std::log(b / a); }

} // namespace

TEST(Charges, GammaZeroIsISigma1) {
    const auto rc = riccati_coeffs(make_kink(unit, 0.4, 0.0, 1), Picture::space, 0.0, 3);
    for (double x : {-2.0, 0.0, 1.5}) EXPECT_LT(max_abs(rc.at(x)[0] - I_unit * sigma1), 1e-15);
    const auto rt = riccati_coeffs(make_kink(unit, 0.4, 0.0, 1), Picture::time, 0.5, 3);
    EXPECT_LT(max_abs(rt.at(0.2)[0] - I_unit * sigma1), 1e-15);
}

TEST(Charges, VacuumCoefficientsVanish) {
    const auto rc = riccati_coeffs(make_vacuum(unit), Picture::space, 0.0, 6);
    const auto g = rc.at(0.7);
    for (std::size_t n = 1; n < g.size(); ++n) EXPECT_EQ(max_abs(g[n]), 0.0);
    EXPECT_THROW(riccati_coeffs(make_vacuum(unit), Picture::space, 0.0, 7), ArgumentError);
}

TEST(Charges, RiccatiResidualOrderAtInfinity) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    for (Picture pic : {Picture::space, Picture::time}) {
        const double fixed = pic == Picture::space ? 0.0 : 0.3;
        for (std::size_t n : {3u, 4u}) {
            const double r50 = riccati_residual(f, pic, fixed, 0.2, spectral(50.0, unit), n, RecursionForm::corrected);
            const double r100 = riccati_residual(f, pic, fixed, 0.2, spectral(100.0, unit), n, RecursionForm::corrected);
            EXPECT_NEAR(loglog_slope(50, 100, r50, r100), static_cast<double>(n), 0.3) << to_string(pic) << " N=" << n;
        }
        const double r3 = riccati_residual(f, pic, fixed, 0.2, spectral(50.0, unit), 3, RecursionForm::corrected);
        const double r4 = riccati_residual(f, pic, fixed, 0.2, spectral(50.0, unit), 4, RecursionForm::corrected);
        EXPECT_GT(r3 / r4, 25.0);
    }
}

TEST(Charges, LiteralRecursionStallsAtFirstOrder) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const double r50 = riccati_residual(f, Picture::space, 0.0, 0.3, spectral(50.0, unit), 4, RecursionForm::literal);
    const double r100 = riccati_residual(f, Picture::space, 0.0, 0.3, spectral(100.0, unit), 4, RecursionForm::literal);
    EXPECT_NEAR(loglog_slope(50, 100, r50, r100), 1.0, 0.1);
}

TEST(Charges, RiccatiResidualOrderAtZero) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const auto side = ExpansionSide::zero;
    const double a = riccati_residual(f, Picture::space, 0.0, 0.3, spectral(0.02, unit), 3, RecursionForm::corrected, side);
    const double b = riccati_residual(f, Picture::space, 0.0, 0.3, spectral(0.01, unit), 3, RecursionForm::corrected, side);
    EXPECT_NEAR(std::log(a / b) / std::log(2.0), 3.0, 0.3);
}

TEST(Charges, VacuumLedgersVanish) {
    const auto f = make_vacuum(unit);
    const auto led = merge(charges_infinity(f, Picture::space, 0.0, 4, GridWindow{}),
                           charges_zero(f, Picture::space, 0.0, 3, GridWindow{}));
    for (const auto& [n, v] : led.values) EXPECT_EQ(std::abs(v), 0.0) << n;
    const auto id = energy_identity_S(f, 0.0, GridWindow{}, led);
    EXPECT_EQ(id.lhs, 0.0);
    EXPECT_EQ(id.rhs, 0.0);
    EXPECT_EQ(id.gap, 0.0);
}

TEST(Charges, StaticKinkLedgerMatchesScatteringSeries) {
    const auto f = make_kink(unit, 0.0, 0.0, 1);
    const GridWindow w;
    const auto inf = charges_infinity(f, Picture::space, 0.0, 5, w);
    const auto zero = charges_zero(f, Picture::space, 0.0, 3, w);
    EXPECT_NEAR(inf.at(1).real(), -2.0, 1e-6);
    EXPECT_NEAR(inf.at(3).real(), 2.0 / 3.0, 1e-6);
    EXPECT_NEAR(inf.at(5).real(), -0.4, 1e-6);
    EXPECT_NEAR(std::abs(inf.at(2)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(inf.at(4)), 0.0, 1e-8);
    EXPECT_NEAR(zero.at(0).real(), -pi, 1e-8);
    EXPECT_NEAR(zero.at(-1).real(), 2.0, 1e-6);
    EXPECT_NEAR(zero.at(-3).real(), -2.0 / 3.0, 1e-6);
    EXPECT_FALSE(inf.tail_warning);
}

TEST(Charges, MovingKinkLedgersBothPictures) {
    const double v = 0.4, k = kappa(v);
    const auto f = make_kink(unit, v, 0.0, 1);
    const auto s = merge(charges_infinity(f, Picture::space, 0.0, 3, wide), charges_zero(f, Picture::space, 0.0, 3, wide));
    const auto t = merge(charges_infinity(f, Picture::time, 1.0, 3, wide), charges_zero(f, Picture::time, 1.0, 3, wide));
    for (int n : {1, 2, 3}) {
        EXPECT_NEAR(s.at(n).real(), series_at_infinity(k, n), 1e-6) << "I_" << n;
        EXPECT_NEAR(s.at(-n).real(), series_at_zero(k, n), 1e-6) << "I_-" << n;
        EXPECT_NEAR(t.at(n).real(), series_at_infinity(-k, n), 1e-6) << "J_" << n;
        EXPECT_NEAR(t.at(-n).real(), series_at_zero(-k, n), 1e-6) << "J_-" << n;
    }
}

TEST(Charges, TopologicalZerothCharges) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const auto qs = topological_charges(f, 0.0, Picture::space);
    EXPECT_NEAR(charges_zero(f, Picture::space, 0.0, 0, wide).at(0).real(), -pi * (qs.q_plus - qs.q_minus), 1e-8);
    const auto qt = topological_charges(f, 1.0, Picture::time);
    EXPECT_NEAR(charges_zero(f, Picture::time, 1.0, 0, wide).at(0).real(), -pi * (qt.q_plus - qt.q_minus), 1e-8);
}

TEST(Charges, ConservationAcrossTimeAndSpace) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    auto a = charges_infinity(f, Picture::space, 0.0, 3, wide);
    const auto b = charges_infinity(f, Picture::space, 1.0, 3, wide);
    record_drift(a, b);
    for (int n : {1, 2, 3}) EXPECT_LT(std::abs(a.at(n) - b.at(n)) / std::max(1.0, std::abs(a.at(n))), 1e-6) << n;
    const auto c = charges_infinity(f, Picture::time, 0.0, 3, wide);
    const auto d = charges_infinity(f, Picture::time, 1.0, 3, wide);
    for (int n : {1, 2, 3}) EXPECT_LT(std::abs(c.at(n) - d.at(n)) / std::max(1.0, std::abs(c.at(n))), 1e-6) << n;
    EXPECT_LT(a.drift.at(1), 1e-6);
}

TEST(Charges, EnergyIdentitySpace) {
    const GridWindow w;
    for (auto [v, rhs] : {std::pair{0.0, 4.0}, std::pair{0.6, 5.0}}) {
        const auto f = make_kink(unit, v, 0.0, 1);
        const auto led = merge(charges_infinity(f, Picture::space, 0.0, 1, w), charges_zero(f, Picture::space, 0.0, 1, w));
        const auto id = energy_identity_S(f, 0.0, w, led);
        EXPECT_NEAR(id.rhs, rhs, 1e-5);
        EXPECT_LT(std::abs(id.gap), 1e-5);
        EXPECT_LT(id.relative_gap, 1e-4);
    }
}

TEST(Charges, EnergyIdentityTimeAtTwoPositions) {
    const auto f = make_kink(unit, 0.6, 0.0, 1);
    for (double x : {0.0, 1.0}) {
        const auto led = merge(charges_infinity(f, Picture::time, x, 1, wide), charges_zero(f, Picture::time, x, 1, wide));
        const auto id = energy_identity_T(f, x, wide, led);
        EXPECT_LT(id.relative_gap, 1e-5) << "x=" << x;
    }
}

TEST(Charges, IdentityNeedsFirstCharges) {
    const auto f = make_kink(unit, 0.0, 0.0, 1);
    EXPECT_THROW(energy_identity_S(f, 0.0, GridWindow{}, charges_infinity(f, Picture::space, 0.0, 2, GridWindow{})),
                 ArgumentError);
}

TEST(Charges, LnaFitVacuum) {
    const auto f = make_vacuum(unit);
    const auto rep = lna_asymptotic_fit(f, Picture::space, 0.0, {10, 20, 40},
                                        charges_infinity(f, Picture::space, 0.0, 3, GridWindow{}));
    for (const auto& l : rep.ln_a) EXPECT_LT(std::abs(l), 1e-10);
    for (double r : rep.remainder) EXPECT_LT(r, 1e-10);
}

TEST(Charges, LnaFitRejectsOutOfRangeLambda) {
    const auto f = make_vacuum(unit);
    const auto led = charges_infinity(f, Picture::space, 0.0, 3, GridWindow{});
    EXPECT_THROW(lna_asymptotic_fit(f, Picture::space, 0.0, {5, 20}, led), ArgumentError);
    EXPECT_THROW(lna_asymptotic_fit(f, Picture::space, 0.0, {40, 20}, led), ArgumentError);
}

TEST(Charges, LnaRemainderFollowsFirstNonzeroOmittedTerm) {
    // I_4 = 0 for a kink, so the remainder after three terms is |I_5| lambda^-5 to leading order.
    const double v = 0.4, k = kappa(v);
    const auto f = make_kink(unit, v, 0.0, 1);
    const auto led = charges_infinity(f, Picture::space, 0.0, 3, GridWindow{});
    const auto rep = lna_asymptotic_fit(f, Picture::space, 0.0, {10, 15, 20, 30, 40}, led);
    EXPECT_NEAR(rep.slope, 5.0, 0.1);
    EXPECT_NEAR(rep.remainder[0], 0.4 * std::pow(k, 5) * 1e-5, 0.02 * 0.4 * std::pow(k, 5) * 1e-5);
}

TEST(Charges, RecursionMonodromyConsistency) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const auto led = charges_infinity(f, Picture::space, 0.0, 3, GridWindow{});
    const auto rep = lna_asymptotic_fit(f, Picture::space, 0.0, {10, 12, 15, 20, 25, 30, 40, 50}, led);
    const auto fit = charges_from_fit(rep, Picture::space, 5);
    EXPECT_EQ(fit.provenance, "monodromy_fit");
    for (int n : {1, 2})
        EXPECT_LT(std::abs(fit.at(n) - led.at(n)) / std::max(1.0, std::abs(led.at(n))), 1e-4) << "n=" << n;
}

TEST(Charges, LedgerCsvColumns) {
    auto led = charges_infinity(make_vacuum(unit), Picture::space, 0.0, 2, GridWindow{-5, 5, -5, 5, 101, 101});
    std::ostringstream os;
    write_ledger_csv(os, led);
    std::string header;
    std::getline(std::istringstream(os.str()) >> std::ws, header);
    EXPECT_EQ(header, "picture,n,value_re,value_im,provenance,drift");
}

#include <gtest/gtest.h>

#include "sgdefect/transition.hpp"

using namespace sgdefect;

namespace {

const ModelParams unit{1.0, 1.0};

double kappa(double v) { return std::sqrt((1.0 - v) / (1.0 + v)); }

// Scattering coefficient of a single kink: (lambda - i k) / (lambda + i k).
cplx kink_a(double lambda, double k) { return (lambda - I_unit * k) / (lambda + I_unit * k); }

} // namespace

TEST(Transition, VacuumPropagationIsFreeExponential) {
    const auto f = make_vacuum(unit);
    const auto sp = spectral(1.3, unit);
    const auto r = propagate(f, Picture::space, 0.0, -2.0, 3.0, sp, 100);
    EXPECT_LT(max_abs(r.matrix - expm(u_inf(sp) * 5.0)), 1e-10);
    const auto m = monodromy(f, Picture::space, 0.0, 20.0, sp);
    EXPECT_LT(max_abs(m.matrix - Mat2::identity()), 1e-10);
    EXPECT_LT(std::abs(m.a_entry - 1.0), 1e-10);
}

TEST(Transition, CompositionAndUnitDeterminant) {
    const auto f = make_kink(unit, 0.3, 0.0, 1);
    const auto sp = spectral(1.3, unit);
    const auto ab = propagate(f, Picture::space, 0.0, -20.0, 1.0, sp, 2100);
    const auto bc = propagate(f, Picture::space, 0.0, 1.0, 20.0, sp, 1900);
    const auto ac = propagate(f, Picture::space, 0.0, -20.0, 20.0, sp, 4000);
    EXPECT_LT(max_abs(bc.matrix * ab.matrix - ac.matrix), 1e-8);
    EXPECT_LT(std::abs(det(ac.matrix) - 1.0), 1e-9);
}

TEST(Transition, RejectsZeroSteps) {
    EXPECT_THROW(propagate(make_vacuum(unit), Picture::space, 0.0, 0.0, 1.0, spectral(1.0, unit), 0), ArgumentError);
}

TEST(Transition, MonodromyMatchesClosedFormScattering) {
    for (double v : {0.0, 0.4, -0.6}) {
        const auto f = make_kink(unit, v, 0.0, 1);
        for (double l : {0.7, 1.7}) {
            const cplx a = monodromy(f, Picture::space, 0.0, 30.0, spectral(l, unit)).a_entry;
            EXPECT_LT(std::abs(a - kink_a(l, kappa(v))), 1e-8) << "v=" << v << " lambda=" << l;
        }
    }
}

TEST(Transition, TimeMonodromyMatchesClosedForm) {
    // For v > 0 the time picture sees the kink with the opposite sign of kappa.
    for (double v : {0.4, -0.6}) {
        const auto f = make_kink(unit, v, 0.0, 1);
        const double k = v > 0 ? -kappa(v) : kappa(v);
        for (double l : {0.7, 1.7}) {
            const cplx a = monodromy(f, Picture::time, 1.0, 60.0, spectral(l, unit)).a_entry;
            EXPECT_LT(std::abs(a - kink_a(l, k)), 1e-8) << "v=" << v << " lambda=" << l;
        }
    }
}

TEST(Transition, MonodromyTruncationStudy) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const auto sp = spectral(1.2, unit);
    const Mat2 a = monodromy(f, Picture::space, 0.0, 25.0, sp).matrix;
    const Mat2 b = monodromy(f, Picture::space, 0.0, 35.0, sp).matrix;
    EXPECT_LT(max_abs(a - b), 1e-7);
}

TEST(Transition, MonodromyTimeInvariance) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    for (double l : {0.5, 1.0, 2.0, 4.0}) {
        const auto sp = spectral(l, unit);
        const cplx a0 = monodromy(f, Picture::space, 0.0, 30.0, sp).a_entry;
        const cplx a2 = monodromy(f, Picture::space, 2.0, 30.0, sp).a_entry;
        EXPECT_LT(std::abs(a0 - a2), 1e-6);
        const Mat2 d1 = monodromy(f, Picture::space, -1.0, 30.0, sp).matrix;
        EXPECT_LT(std::abs(d1(1, 1) - monodromy(f, Picture::space, 1.0, 30.0, sp).matrix(1, 1)), 1e-6);
    }
}

TEST(Transition, TimeMonodromySpaceInvariance) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    for (double l : {0.5, 1.0, 2.0, 4.0}) {
        const auto sp = spectral(l, unit);
        const cplx b0 = monodromy(f, Picture::time, 0.0, 60.0, sp).a_entry;
        const cplx b1 = monodromy(f, Picture::time, 1.0, 60.0, sp).a_entry;
        const cplx b2 = monodromy(f, Picture::time, -1.5, 60.0, sp).a_entry;
        EXPECT_LT(std::abs(b0 - b1), 1e-6);
        EXPECT_LT(std::abs(b0 - b2), 1e-6);
    }
}

TEST(Transition, TruncationErrorWhenWindowTooShort) {
    const auto f = make_kink(unit, 0.0, 0.0, 1);
    EXPECT_THROW(monodromy(f, Picture::space, 0.0, 5.0, spectral(1.0, unit)), TruncationError);
}

TEST(Transition, JostMinusVacuumAndConvergence) {
    const auto sp = spectral(1.4, unit);
    EXPECT_LT(max_abs(jost_minus(make_vacuum(unit), Picture::space, 0.3, 0.0, sp, 20.0) - e0(sp, 0.3)), 1e-10);
    EXPECT_LT(max_abs(jost_minus(make_vacuum(unit), Picture::time, 0.0, 0.3, sp, 20.0) - ce0(sp, 0.3)), 1e-10);
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const Mat2 a = jost_minus(f, Picture::space, 0.5, 0.0, sp, 25.0);
    const Mat2 b = jost_minus(f, Picture::space, 0.5, 0.0, sp, 35.0);
    EXPECT_LT(max_abs(a - b), 1e-7);
    double col = 0.0;
    for (double x = -10.0; x <= 10.0; x += 0.5) {
        const Mat2 j = jost_minus(f, Picture::space, x, 0.0, sp, 30.0);
        col = std::max(col, std::abs(j(0, 0)) + std::abs(j(1, 0)));
    }
    EXPECT_LT(col, 10.0);
}

TEST(Transition, AppendixEqualityVacuum) {
    EXPECT_LT(appendix_equality_residual(make_vacuum(unit), 1.0, 0.5, spectral(1.7, unit), 30.0), 1e-12);
}

TEST(Transition, AppendixEqualityLeftMovingKink) {
    const auto f = make_kink(unit, -0.6, 0.0, 1);
    const auto sp = spectral(1.7, unit);
    const double r15 = appendix_equality_residual(f, 1.0, 0.5, sp, 15.0);
    const double r25 = appendix_equality_residual(f, 1.0, 0.5, sp, 25.0);
    const double r30 = appendix_equality_residual(f, 1.0, 0.5, sp, 30.0);
    const double r35 = appendix_equality_residual(f, 1.0, 0.5, sp, 35.0);
    EXPECT_LT(r30, 1e-6);
    EXPECT_GT(r15, r25);
    EXPECT_GT(r25, r35);
}

TEST(Transition, AppendixEqualityRightMovingKinkCarriesScatteringData) {
    // x -> -inf and t -> -inf end in different vacua, so the two half-line
    // solutions differ by diag(a, conj a) and the residual is sqrt(2) |a - 1|.
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    for (double l : {0.7, 1.7}) {
        const double oracle = std::sqrt(2.0) * std::abs(kink_a(l, kappa(0.4)) - 1.0);
        for (double w : {20.0, 30.0})
            EXPECT_NEAR(appendix_equality_residual(f, 1.0, 0.5, spectral(l, unit), w), oracle, 1e-7);
    }
}

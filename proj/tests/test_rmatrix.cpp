#include <gtest/gtest.h>

#include <random>

#include "sgdefect/defect.hpp"
#include "sgdefect/rmatrix.hpp"

using namespace sgdefect;

namespace {

const ModelParams unit{1.0, 1.0};

} // namespace

TEST(RMatrix, CoefficientsAtUnitGamma) {
    const auto r = r_matrix(2.0, 1.0, ModelParams{1.0, 4.0});
    EXPECT_NEAR(r.gamma_const, 1.0, 1e-15);
    EXPECT_LT(std::abs(r.f - (-5.0 / 3.0)), 1e-15);
    EXPECT_LT(std::abs(r.g - 4.0 / 3.0), 1e-15);
    EXPECT_EQ(r.matrix(0, 0), cplx(0.0));
    EXPECT_EQ(r.matrix(3, 3), cplx(0.0));
    EXPECT_LT(std::abs(r.matrix(1, 1) - 2.0 * r.f), 1e-15);
    EXPECT_LT(std::abs(r.matrix(1, 2) - 2.0 * r.g), 1e-15);
}

TEST(RMatrix, SingularOnDiagonal) {
    EXPECT_THROW(r_matrix(1.5, 1.5, unit), SingularityError);
    EXPECT_THROW(r_matrix(1.5, -1.5, unit), SingularityError);
    const FieldSample s{0.1, 0.2, 0.3};
    EXPECT_THROW(ultralocal_check(Picture::space, unit, s, spectral(1.2, unit), spectral(-1.2, unit), 0.01),
                 SingularityError);
}

TEST(RMatrix, Antisymmetry) {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int k = 0; k < 20; ++k) {
        const cplx l(u(rng), u(rng) - 1.5), m(u(rng), u(rng) - 1.5);
        EXPECT_LT(max_abs(r_matrix(l, m, unit).matrix + r_matrix(m, l, unit).matrix), 1e-12);
    }
}

TEST(RMatrix, TrigonometricFormIsHalfTheRationalForm) {
    // With lambda = e^{i a}, mu = e^{i b} the rational r reduces to 2 r_trig(a - b) in the displayed normalization.
    std::mt19937 rng(22);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const ModelParams p{1.0, 1.3};
    for (int k = 0; k < 10; ++k) {
        const double a = u(rng), b = u(rng);
        const Mat4 rat = r_matrix(std::polar(1.0, a), std::polar(1.0, b), p).matrix;
        const Mat4 tri = r_trigonometric(a - b, p);
        EXPECT_LT(max_abs(rat - tri * cplx(2.0)), 1e-12 * std::max(1.0, max_abs(rat)));
        EXPECT_EQ(tri(0, 0), cplx(0.0));
        EXPECT_EQ(tri(3, 3), cplx(0.0));
    }
}

TEST(RMatrix, InfiniteVolumeEntriesAreTagged) {
    using Tag = TaggedCoefficient::Tag;
    const auto r = r_pm(2.0, 1.0, 1, unit);
    EXPECT_EQ(r.entries[0][0].tag, Tag::regular);
    EXPECT_EQ(r.entries[1][2].tag, Tag::delta);
    EXPECT_EQ(r.entries[1][2].value, -r_pm(2.0, 1.0, -1, unit).entries[1][2].value);
    EXPECT_THROW(r_pm(2.0, 1.0, 0, unit), ArgumentError);
}

TEST(RMatrix, UltralocalIdentityBothPictures) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> field(-3.0, 3.0), lam(0.3, 3.0);
    const ModelParams p{1.2, 0.9};
    double gs = 0.0, gt = 0.0, flip = 1e300;
    for (int i = 0; i < 20; ++i) {
        const FieldSample s{field(rng), field(rng), field(rng)};
        for (int j = 0; j < 20; ++j) {
            const auto a = spectral(lam(rng), p), b = spectral(lam(rng), p);
            gs = std::max(gs, ultralocal_check(Picture::space, p, s, a, b, 0.01).gap);
            gt = std::max(gt, ultralocal_check(Picture::time, p, s, a, b, 0.01).gap);
            flip = std::min(flip, ultralocal_check(Picture::time, p, s, a, b, 0.01, true).gap);
        }
    }
    EXPECT_LT(gs, 1e-12);
    EXPECT_LT(gt, 1e-12);
    EXPECT_GT(flip, 1e-2);
}

TEST(RMatrix, UltralocalVacuumSampleNonTrivial) {
    const FieldSample vac{0.0, 0.0, 0.0};
    const auto a = spectral(1.4, unit), b = spectral(0.6, unit);
    for (Picture pic : {Picture::space, Picture::time}) {
        const auto r = ultralocal_check(pic, unit, vac, a, b, 0.01);
        EXPECT_GT(r.lhs_norm, 1e-3);
        EXPECT_LT(r.gap, 1e-12);
    }
}

TEST(RMatrix, LaxPartialsMatchDifferences) {
    const auto sp = spectral(1.7, unit);
    const double h = 1e-6, phi = 0.8;
    for (Picture pic : {Picture::space, Picture::time}) {
        const auto d = lax_partials(pic, unit, phi, sp);
        const FieldSample base = pic == Picture::space ? FieldSample{phi, 0.0, 0.4} : FieldSample{phi, -0.4, 0.0};
        FieldSample up = base, dn = base;
        up.phi += h;
        dn.phi -= h;
        const Mat2 fd = (lax_matrix(pic, unit, up, sp) - lax_matrix(pic, unit, dn, sp)) * (0.5 / h);
        EXPECT_LT(max_abs(d.d_phi - fd), 1e-8);
    }
}

TEST(RMatrix, TransitionBracketFirstOrder) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const auto a = spectral(1.5, unit), b = spectral(0.8, unit);
    const auto r400 = transition_bracket_check(Picture::time, f, 0.0, -5.0, 5.0, a, b, 400);
    const auto r800 = transition_bracket_check(Picture::time, f, 0.0, -5.0, 5.0, a, b, 800);
    EXPECT_NEAR(r800.gap / r400.gap, 0.5, 0.15);
    EXPECT_GT(r800.lhs_norm, 1e-2);
    const auto swapped = transition_bracket_check(Picture::time, f, 0.0, -5.0, 5.0, b, a, 800);
    EXPECT_NEAR(swapped.gap, r800.gap, 1e-10);
}

TEST(RMatrix, TransitionBracketVacuumBothSidesNonzero) {
    const auto a = spectral(1.5, unit), b = spectral(0.8, unit);
    const auto r = transition_bracket_check(Picture::time, make_vacuum(unit), 0.0, -5.0, 5.0, a, b, 800);
    EXPECT_GT(r.lhs_norm, 1e-2);
    EXPECT_LT(r.gap, 1e-5);
}

TEST(RMatrix, InvolutionVacuumIsZero) {
    const auto r = involution_check(Picture::time, make_vacuum(unit), 0.0, 30.0, spectral(1.5, unit),
                                    spectral(0.8, unit), 400);
    EXPECT_EQ(r.magnitude, 0.0);
    EXPECT_LT(std::abs(r.a_lambda - 1.0), 1e-12);
}

TEST(RMatrix, InvolutionKinkDecreasesUnderRefinement) {
    const auto f = make_kink(unit, 0.4, 0.0, 1);
    const auto a = spectral(1.5, unit), b = spectral(0.8, unit);
    double prev = 1e300;
    for (std::size_t n : {200u, 400u, 800u}) {
        const double m = involution_check(Picture::time, f, 0.0, 40.0, a, b, n).magnitude;
        EXPECT_LT(m, prev) << n;
        prev = m;
    }
    EXPECT_LT(prev, 5e-3);
}

TEST(RMatrix, InvolutionOnBothSidesOfDefect) {
    const DefectParams d{2.0};
    const auto seed = make_kink(unit, 0.4, 0.0, 1);
    const auto br = backlund_integrate(seed, d, 0.0, 0.0, 1.0, GridWindow{-2, 2, -40, 40, 401, 8001});
    const DefectPair pr{seed, br.field, unit, d};
    const auto a = spectral(1.5, unit), b = spectral(0.8, unit);
    double pr_right = 1e300, pr_left = 1e300;
    for (std::size_t n : {200u, 400u, 800u}) {
        const double r = involution_check(Picture::time, pr.right, 0.5, 39.0, a, b, n).magnitude;
        const double l = involution_check(Picture::time, pr.left, -0.5, 39.0, a, b, n).magnitude;
        EXPECT_LT(r, pr_right) << n;
        EXPECT_LT(l, pr_left) << n;
        pr_right = r;
        pr_left = l;
    }
    EXPECT_LT(pr_right, 5e-3);
    EXPECT_LT(pr_left, 5e-3);
}

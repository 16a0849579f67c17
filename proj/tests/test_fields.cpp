#include <gtest/gtest.h>

#include <random>

#include "sgdefect/fields.hpp"

using namespace sgdefect;

namespace {

const ModelParams unit{1.0, 1.0};

double kink_energy(const ModelParams& p, double v) { return 8.0 * p.m / (p.beta * p.beta) / std::sqrt(1.0 - v * v); }

} // namespace

TEST(Fields, ParamsValidate) {
    EXPECT_THROW(make_vacuum({0.0, 1.0}), ArgumentError);
    EXPECT_THROW(make_vacuum({1.0, 0.0}), ArgumentError);
    EXPECT_NO_THROW(make_vacuum({2.0, -0.5}));
}

TEST(Fields, VacuumIsZero) {
    const auto f = make_vacuum(unit);
    const auto s = f.sample(3.2, -1.1);
    EXPECT_EQ(s.phi, 0.0);
    EXPECT_EQ(s.phi_x, 0.0);
    EXPECT_EQ(s.phi_t, 0.0);
    EXPECT_EQ(sg_residual(f, 0.3, 0.7, 1e-3), 0.0);
    const auto q = topological_charges(f, 0.0, Picture::space);
    EXPECT_EQ(q.q_plus - q.q_minus, 0);
    EXPECT_EQ(hamiltonian_S(f, 0.0, GridWindow{}).value, 0.0);
    EXPECT_EQ(hamiltonian_T(f, 0.0, GridWindow{}).value, 0.0);
}

TEST(Fields, StaticKinkCentre) {
    EXPECT_NEAR(make_kink(unit, 0.0, 0.0, 1).sample(0.0, 0.0).phi, pi, 1e-15);
}

TEST(Fields, KinkRejectsLuminalSpeed) {
    EXPECT_THROW(make_kink(unit, 1.0, 0.0, 1), ArgumentError);
    EXPECT_THROW(make_kink(unit, -1.2, 0.0, 1), ArgumentError);
    EXPECT_THROW(make_kink(unit, 0.1, 0.0, 2), ArgumentError);
}

TEST(Fields, KinkSolvesSineGordon) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (double v : {0.0, 0.5, -0.7}) {
        const auto f = make_kink({1.3, 0.8}, v, 0.4, v < 0 ? -1 : 1);
        for (int k = 0; k < 20; ++k) EXPECT_LT(std::abs(sg_residual(f, u(rng), u(rng), 1e-4)), 1e-6);
    }
}

TEST(Fields, ResidualConvergesAtSecondOrder) {
    const auto f = make_kink(unit, 0.3, 0.0, 1);
    const double r1 = std::abs(sg_residual(f, 0.4, 0.2, 2e-2));
    const double r2 = std::abs(sg_residual(f, 0.4, 0.2, 1e-2));
    EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.1);
}

TEST(Fields, KinkDerivativesMatchFiniteDifferences) {
    const auto f = make_kink({1.0, 1.5}, -0.4, 0.2, -1);
    const double h = 1e-6, x = 0.3, t = -0.8;
    const auto s = f.sample(x, t);
    EXPECT_NEAR(s.phi_x, (f.sample(x + h, t).phi - f.sample(x - h, t).phi) / (2 * h), 1e-8);
    EXPECT_NEAR(s.phi_t, (f.sample(x, t + h).phi - f.sample(x, t - h).phi) / (2 * h), 1e-8);
    EXPECT_EQ(s.pi(), s.phi_t);
    EXPECT_EQ(s.Pi(), -s.phi_x);
}

TEST(Fields, KinkTopologicalCharges) {
    const auto k = make_kink(unit, 0.5, 0.0, 1);
    const auto qs = topological_charges(k, 0.0, Picture::space);
    EXPECT_EQ(qs.q_minus, 0);
    EXPECT_EQ(qs.q_plus, 1);
    const auto qt = topological_charges(k, 2.0, Picture::time);
    EXPECT_EQ(qt.q_minus, 1);
    EXPECT_EQ(qt.q_plus, 0);
    const auto anti = topological_charges(make_kink(unit, 0.0, 0.0, -1), 0.0, Picture::space);
    EXPECT_EQ(anti.q_plus - anti.q_minus, -1);
}

TEST(Fields, StaticKinkDoesNotDecayInTime) {
    EXPECT_THROW(topological_charges(make_kink(unit, 0.0, 0.0, 1), 0.0, Picture::time), NonDecayingFieldError);
}

TEST(Fields, HamiltonianSMatchesClosedFormEnergy) {
    const GridWindow w;
    for (double v : {0.0, 0.6}) {
        const auto h = hamiltonian_S(make_kink(unit, v, 0.0, 1), 0.0, w);
        EXPECT_NEAR(h.value, kink_energy(unit, v), v == 0.0 ? 1e-6 : 1e-5);
        EXPECT_FALSE(h.tail_warning);
    }
}

TEST(Fields, HamiltonianSLorentzFactor) {
    const GridWindow w;
    const double e0 = hamiltonian_S(make_kink(unit, 0.0, 0.0, 1), 0.0, w).value;
    for (double v : {0.2, 0.5, 0.8}) {
        const double e = hamiltonian_S(make_kink(unit, v, 0.0, 1), 0.0, w).value;
        EXPECT_NEAR(e / e0, 1.0 / std::sqrt(1.0 - v * v), 1e-5);
    }
}

TEST(Fields, HamiltonianSTimeInvariant) {
    const auto f = make_kink(unit, 0.5, 0.0, 1);
    const GridWindow w;
    const double a = hamiltonian_S(f, 0.0, w).value, b = hamiltonian_S(f, 3.0, w).value;
    EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-6);
}

TEST(Fields, HamiltonianTResolutionAndSymmetry) {
    const GridWindow fine{-40, 40, -80, 80, 16001, 32001}, coarse{-40, 40, -80, 80, 16001, 16001};
    const auto f = make_kink(unit, 0.6, 0.0, 1);
    const double a = hamiltonian_T(f, 0.0, fine).value, b = hamiltonian_T(f, 0.0, coarse).value;
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_NEAR(a, b, 1e-6);
    EXPECT_NEAR(hamiltonian_T(make_kink(unit, -0.6, 0.0, 1), 0.0, fine).value, a, 1e-6);
    EXPECT_LT(std::abs(hamiltonian_T(f, 1.5, fine).value - a) / std::abs(a), 1e-6);
}

TEST(Fields, HamiltonianTailWarning) {
    const auto h = hamiltonian_S(make_kink(unit, 0.0, 0.0, 1), 0.0, GridWindow{-5, 5, -5, 5, 1001, 1001});
    EXPECT_TRUE(h.tail_warning);
    EXPECT_GT(h.edge_density, 1e-12);
}

TEST(Fields, GridWindowValidation) {
    EXPECT_THROW(hamiltonian_S(make_vacuum(unit), 0.0, GridWindow{1, -1, -1, 1, 11, 11}), ArgumentError);
    EXPECT_THROW(hamiltonian_S(make_vacuum(unit), 0.0, GridWindow{-1, 1, -1, 1, 1, 11}), ArgumentError);
}

TEST(Fields, ScaledFieldIsOffShell) {
    const auto f = make_scaled(make_kink(unit, 0.2, 0.0, 1), 1.01);
    EXPECT_GT(std::abs(sg_residual(f, 0.3, 0.0, 1e-3)), 1e-3);
}

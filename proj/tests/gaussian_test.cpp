#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "branchspan/fock_oracle.hpp"
#include "branchspan/gaussian.hpp"
#include "test_support.hpp"

using namespace branchspan;
using branchspan::testing::Rng;

namespace {

GaussianPure vacuum() { return make_displaced_squeezed(ModeParams{}); }

fock::FockVector fock_of(const ModeParams& m, int cutoff = 60) {
    return fock::displaced_squeezed(m.x0, m.p0, m.r, m.theta, cutoff);
}

void expect_complex_near(Complex a, Complex b, double tol) {
    EXPECT_NEAR(a.real(), b.real(), tol);
    EXPECT_NEAR(a.imag(), b.imag(), tol);
}

// |<g1|g2>|^2 = exp(-1/2 dd^T (V1+V2)^{-1} dd) / sqrt(det(V1+V2))
double fidelity_identity(const GaussianPure& g1, const GaussianPure& g2) {
    const RealMatrix sum = g1.covariance() + g2.covariance();
    const RealVector dd = g1.mean() - g2.mean();
    return std::exp(-0.5 * dd.dot(sum.ldlt().solve(dd))) / std::sqrt(sum.determinant());
}

} // namespace

TEST(SymplecticForm, SquaresToMinusIdentity) {
    for (int n = 1; n <= 4; ++n) {
        const RealMatrix omega = linalg::symplectic_form(n);
        EXPECT_LT(linalg::max_abs(RealMatrix(omega * omega + RealMatrix::Identity(2 * n, 2 * n))), 1e-15);
        EXPECT_LT(linalg::max_abs(RealMatrix(omega.transpose() + omega)), 1e-15);
        EXPECT_EQ(omega(0, 1), 1.0);
        EXPECT_EQ(omega(1, 0), -1.0);
    }
}

TEST(MakeDisplacedSqueezed, Vacuum) {
    const GaussianPure g = vacuum();
    EXPECT_EQ(g.n_modes(), 1);
    EXPECT_EQ(g.mean().norm(), 0.0);
    EXPECT_LT(linalg::max_abs(RealMatrix(g.covariance() - 0.5 * RealMatrix::Identity(2, 2))), 1e-15);
}

TEST(MakeDisplacedSqueezed, SqueezedAlongX) {
    const GaussianPure g = make_displaced_squeezed(ModeParams{0.0, 0.0, 0.5, 0.0});
    EXPECT_NEAR(g.covariance()(0, 0), 0.5 * std::exp(-1.0), 1e-15);
    EXPECT_NEAR(g.covariance()(1, 1), 0.5 * std::exp(1.0), 1e-15);
    EXPECT_NEAR(g.covariance()(0, 1), 0.0, 1e-15);
}

TEST(MakeDisplacedSqueezed, MultimodeLayout) {
    const std::vector<ModeParams> modes{{1.0, 2.0, 0.1, 0.3}, {-3.0, 4.0, -0.2, 1.0}};
    const GaussianPure g = make_displaced_squeezed(modes);
    EXPECT_EQ(g.n_modes(), 2);
    EXPECT_EQ(g.mean()(0), 1.0);
    EXPECT_EQ(g.mean()(1), 2.0);
    EXPECT_EQ(g.mean()(2), -3.0);
    EXPECT_EQ(g.mean()(3), 4.0);
    EXPECT_EQ(g.covariance()(0, 2), 0.0);
    EXPECT_NEAR(g.covariance().determinant(), 1.0 / 16.0, 1e-14);
}

TEST(MakeDisplacedSqueezed, RejectsNonFinite) {
    EXPECT_THROW(make_displaced_squeezed(ModeParams{NAN, 0.0, 0.0, 0.0}), invalid_parameter);
    EXPECT_THROW(make_displaced_squeezed(ModeParams{0.0, 0.0, INFINITY, 0.0}), invalid_parameter);
}

TEST(MakeDisplacedSqueezed, OverlapsMatchFock) {
    const ModeParams m{1.0, 0.0, 0.3, pi / 4.0};
    const GaussianPure g = make_displaced_squeezed(m);
    const std::vector<ModeParams> others{{}, {0.5, -0.5, 0.0, 0.0}, {-1.0, 0.2, -0.3, 1.0}};
    for (const auto& o : others)
        expect_complex_near(overlap(g, make_displaced_squeezed(o)), fock::overlap(fock_of(m), fock_of(o)), 1e-8);
}

TEST(FromMoments, RejectsAsymmetric) {
    RealMatrix v = 0.5 * RealMatrix::Identity(2, 2);
    v(0, 1) = 1e-6;
    EXPECT_THROW(GaussianPure::from_moments(RealVector::Zero(2), v), unphysical_covariance);
}

TEST(FromMoments, RejectsUncertaintyViolation) {
    EXPECT_THROW(GaussianPure::from_moments(RealVector::Zero(2), 0.1 * RealMatrix::Identity(2, 2)),
                 unphysical_covariance);
}

TEST(FromMoments, RejectsMixedCovariance) {
    EXPECT_THROW(GaussianPure::from_moments(RealVector::Zero(2), RealMatrix::Identity(2, 2)), unphysical_covariance);
}

TEST(FromMoments, RejectsOddDimension) {
    EXPECT_THROW(GaussianPure::from_moments(RealVector::Zero(3), 0.5 * RealMatrix::Identity(3, 3)), error);
}

TEST(WavefunctionParams, Vacuum) {
    const auto w = wavefunction_params(vacuum());
    expect_complex_near(w.A(0, 0), 1.0, 1e-15);
    expect_complex_near(w.beta(0), 0.0, 1e-15);
    expect_complex_near(w.gamma, 0.0, 1e-15);
    EXPECT_NEAR(w.norm_prefactor, std::pow(pi, -0.25), 1e-15);
}

TEST(WavefunctionParams, SqueezedVacuum) {
    const double r = 0.7;
    const auto w = wavefunction_params(make_displaced_squeezed(ModeParams{0.0, 0.0, r, 0.0}));
    expect_complex_near(w.A(0, 0), std::exp(2.0 * r), 1e-13);
    expect_complex_near(w.beta(0), 0.0, 1e-15);
    expect_complex_near(w.gamma, 0.0, 1e-15);
}

TEST(WavefunctionParams, OverlapAgainstVacuumMatchesFock) {
    const ModeParams m{1.0, 2.0, 0.3, 0.7};
    expect_complex_near(overlap(make_displaced_squeezed(m), vacuum()), fock::overlap(fock_of(m), fock_of({})), 1e-8);
}

TEST(WavefunctionParams, IllConditionedPositionBlock) {
    const std::vector<ModeParams> modes{{0.0, 0.0, 17.0, 0.0}, {0.0, 0.0, -17.0, 0.0}};
    EXPECT_THROW(wavefunction_params(make_displaced_squeezed(modes)), degenerate_covariance);
}

TEST(WavefunctionParams, GaugeRoundTripProperty) {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const GaussianPure g = branchspan::testing::random_branch(rng, 1, 5.0 / std::sqrt(2.0), 2.0);
        const auto w = wavefunction_params(g);
        EXPECT_GT(w.A.real().minCoeff(), 0.0);
        const GaussianPure back = moments_from_wavefunction(w);
        ASSERT_LT((back.mean() - g.mean()).cwiseAbs().maxCoeff(), 1e-10) << "trial " << trial;
        ASSERT_LT(linalg::max_abs(RealMatrix(back.covariance() - g.covariance())), 1e-10)
            << "trial " << trial;
    }
}

TEST(Overlap, SelfOverlapIsOne) {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const GaussianPure g = branchspan::testing::random_branch(rng, 1 + trial % 3);
        expect_complex_near(overlap(g, g), 1.0, 1e-12);
    }
}

TEST(Overlap, DisplacedVacuaFidelityIdentity) {
    const GaussianPure g1 = make_displaced_squeezed(ModeParams{0.3, -1.2, 0.0, 0.0});
    const GaussianPure g2 = make_displaced_squeezed(ModeParams{-0.4, 0.9, 0.0, 0.0});
    EXPECT_NEAR(std::norm(overlap(g1, g2)), fidelity_identity(g1, g2), 1e-12);
    EXPECT_NEAR(overlap_fidelity(g1, g2), fidelity_identity(g1, g2), 1e-12);
}

TEST(Overlap, VacuumAgainstShiftedVacuum) {
    const GaussianPure g = make_displaced_squeezed(ModeParams{2.0, 0.0, 0.0, 0.0});
    expect_complex_near(overlap(vacuum(), g), std::exp(-1.0), 1e-14);
}

TEST(Overlap, SqueezedCatPairMatchesFockWithPhase) {
    const double alpha = 0.8;
    const ModeParams m1{std::sqrt(2.0) * alpha, 0.0, 0.2, 0.0};
    const ModeParams m2{-std::sqrt(2.0) * alpha, 0.0, 0.2, 0.0};
    const Complex lib = overlap(make_coherent_squeezed(alpha, 0.2), make_coherent_squeezed(-alpha, 0.2));
    expect_complex_near(lib, fock::overlap(fock_of(m1), fock_of(m2)), 1e-8);
}

TEST(Overlap, GenericPhaseMatchesFock) {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        const ModeParams m1 = branchspan::testing::random_mode(rng, 1.5, 0.5);
        const ModeParams m2 = branchspan::testing::random_mode(rng, 1.5, 0.5);
        expect_complex_near(overlap(make_displaced_squeezed(m1), make_displaced_squeezed(m2)),
                            fock::overlap(fock_of(m1, 80), fock_of(m2, 80)), 1e-8);
    }
}

TEST(Overlap, MultimodeFactorizes) {
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const GaussianPure a = branchspan::testing::random_branch(rng);
        const GaussianPure b = branchspan::testing::random_branch(rng);
        const GaussianPure c = branchspan::testing::random_branch(rng);
        const GaussianPure d = branchspan::testing::random_branch(rng);
        expect_complex_near(overlap(tensor_product(a, b), tensor_product(c, d)), overlap(a, c) * overlap(b, d),
                            1e-12);
    }
}

TEST(Overlap, ModeCountMismatch) {
    const std::vector<ModeParams> two(2);
    EXPECT_THROW(overlap(vacuum(), make_displaced_squeezed(two)), dimension_mismatch);
}

TEST(Overlap, SymmetryAndFidelityProperty) {
    Rng rng(15);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 3;
        const GaussianPure g1 = branchspan::testing::random_branch(rng, n);
        const GaussianPure g2 = branchspan::testing::random_branch(rng, n);
        const Complex g12 = overlap(g1, g2);
        const Complex g21 = overlap(g2, g1);
        ASSERT_LT(std::abs(g12 - std::conj(g21)), 1e-12) << "trial " << trial;
        const double f = fidelity_identity(g1, g2);
        ASSERT_LT(std::abs(std::norm(g12) - f), 1e-10 * f + 1e-300) << "trial " << trial;
    }
}

TEST(CrossCharacteristic, VacuumIsGaussian) {
    Rng rng(16);
    for (int trial = 0; trial < 50; ++trial) {
        RealVector xi(2);
        xi << branchspan::testing::uniform(rng, -3, 3), branchspan::testing::uniform(rng, -3, 3);
        expect_complex_near(cross_characteristic(vacuum(), vacuum(), xi), std::exp(-0.25 * xi.squaredNorm()), 1e-14);
    }
}

TEST(CrossCharacteristic, OriginIsOverlap) {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const GaussianPure g1 = branchspan::testing::random_branch(rng, 2);
        const GaussianPure g2 = branchspan::testing::random_branch(rng, 2);
        expect_complex_near(cross_characteristic(g1, g2, RealVector::Zero(4)), overlap(g1, g2), 1e-13);
    }
}

TEST(CrossCharacteristic, DisplacedVacuaMatchFock) {
    const ModeParams m1{0.9, 0.1, 0.0, 0.0};
    const ModeParams m2{-0.7, 0.3, 0.0, 0.0};
    RealVector xi(2);
    xi << 0.3, -0.2;
    const Complex ora = fock::overlap(fock_of(m1, 100), fock::weyl(fock_of(m2, 80), 0.3, -0.2, 100));
    expect_complex_near(cross_characteristic(make_displaced_squeezed(m1), make_displaced_squeezed(m2), xi), ora, 1e-7);
}

TEST(CrossCharacteristic, SqueezedPairMatchesFock) {
    const ModeParams m1{0.4, -0.3, 0.3, 0.5};
    const ModeParams m2{-0.2, 0.6, -0.2, 2.0};
    RealVector xi(2);
    xi << -0.5, 0.7;
    const Complex ora = fock::overlap(fock_of(m1, 100), fock::weyl(fock_of(m2, 80), -0.5, 0.7, 100));
    expect_complex_near(cross_characteristic(make_displaced_squeezed(m1), make_displaced_squeezed(m2), xi), ora, 1e-7);
}

TEST(CrossCharacteristic, HermiticityAndBoundProperty) {
    Rng rng(18);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + trial % 2;
        const GaussianPure g1 = branchspan::testing::random_branch(rng, n);
        const GaussianPure g2 = branchspan::testing::random_branch(rng, n);
        RealVector xi(2 * n);
        for (int k = 0; k < 2 * n; ++k) xi(k) = branchspan::testing::uniform(rng, -2.0, 2.0);
        const Complex chi12 = cross_characteristic(g1, g2, xi);
        const Complex chi21 = cross_characteristic(g2, g1, RealVector(-xi));
        ASSERT_LT(std::abs(std::conj(chi21) - chi12), 1e-10) << "trial " << trial;
        ASSERT_LE(std::abs(chi12), 1.0 + 1e-10) << "trial " << trial;
    }
}

TEST(CrossMoments, VacuumDiagonal) {
    const auto cm = cross_moments(vacuum(), vacuum());
    expect_complex_near(cm.overlap, 1.0, 1e-15);
    expect_complex_near(cm.r(0), 0.0, 1e-15);
    expect_complex_near(cm.r(1), 0.0, 1e-15);
    expect_complex_near(cm.M(0, 0), 0.5, 1e-14);
    expect_complex_near(cm.M(1, 1), 0.5, 1e-14);
    expect_complex_near(cm.M(0, 1), 0.0, 1e-14);
}

TEST(CrossMoments, DiagonalCaseReproducesMoments) {
    Rng rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        const GaussianPure g = branchspan::testing::random_branch(rng);
        const auto cm = cross_moments(g, g);
        const RealMatrix m = g.covariance() + g.mean() * g.mean().transpose();
        for (int i = 0; i < 2; ++i) {
            ASSERT_LT(std::abs(cm.r(i) - g.mean()(i)), 1e-10);
            for (int j = 0; j < 2; ++j) ASSERT_LT(std::abs(cm.M(i, j) - m(i, j)), 1e-10 * std::max(1.0, m.norm()));
        }
    }
}

TEST(CrossMoments, CatPairMatchesFock) {
    const ModeParams m1{std::sqrt(2.0) * 0.7, 0.0, 0.0, 0.0};
    const ModeParams m2{-std::sqrt(2.0) * 0.7, 0.0, 0.0, 0.0};
    const auto lib = cross_moments(make_displaced_squeezed(m1), make_displaced_squeezed(m2));
    const auto ora = fock::cross_moments(fock_of(m1), fock_of(m2));
    expect_complex_near(lib.overlap, ora.overlap, 1e-8);
    for (int i = 0; i < 2; ++i) {
        expect_complex_near(lib.r(i), ora.r(i), 1e-8);
        for (int j = 0; j < 2; ++j) expect_complex_near(lib.M(i, j), ora.M(i, j), 1e-8);
    }
}

TEST(CrossMoments, GenericPairsMatchFock) {
    Rng rng(20);
    for (int trial = 0; trial < 30; ++trial) {
        const ModeParams m1 = branchspan::testing::random_mode(rng, 1.5, 0.5);
        const ModeParams m2 = branchspan::testing::random_mode(rng, 1.5, 0.5);
        const auto lib = cross_moments(make_displaced_squeezed(m1), make_displaced_squeezed(m2));
        const auto ora = fock::cross_moments(fock_of(m1, 80), fock_of(m2, 80));
        expect_complex_near(lib.overlap, ora.overlap, 1e-7);
        for (int i = 0; i < 2; ++i) {
            expect_complex_near(lib.r(i), ora.r(i), 1e-7);
            for (int j = 0; j < 2; ++j) expect_complex_near(lib.M(i, j), ora.M(i, j), 1e-7);
        }
    }
}

TEST(CrossMoments, SwapConjugatesProperty) {
    Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        const GaussianPure g1 = branchspan::testing::random_branch(rng);
        const GaussianPure g2 = branchspan::testing::random_branch(rng);
        const auto a = cross_moments(g1, g2);
        const auto b = cross_moments(g2, g1);
        ASSERT_LT(std::abs(a.overlap - std::conj(b.overlap)), 1e-12);
        for (int i = 0; i < 2; ++i) {
            ASSERT_LT(std::abs(a.r(i) - std::conj(b.r(i))), 1e-10);
            for (int j = 0; j < 2; ++j) ASSERT_LT(std::abs(a.M(i, j) - std::conj(b.M(i, j))), 1e-10);
        }
    }
}

TEST(CrossMoments, MultimodeUnsupported) {
    const std::vector<ModeParams> two(2);
    const GaussianPure g = make_displaced_squeezed(two);
    EXPECT_THROW(cross_moments(g, g), unsupported_dimension);
}

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "branchspan/fock_oracle.hpp"
#include "test_support.hpp"
#include "verify_scenarios.hpp"

using namespace branchspan;
using branchspan::testing::Rng;

namespace {

fock::FockVector coherent(Complex alpha, int cutoff = 60) {
    return fock::displaced_squeezed(std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag(), 0.0, 0.0, cutoff);
}

} // namespace

TEST(FockDisplacedSqueezed, Vacuum) {
    const auto v = fock::displaced_squeezed(0.0, 0.0, 0.0, 0.0, 10);
    EXPECT_EQ(v.cutoff, 10);
    EXPECT_EQ(v.amplitudes.size(), 11);
    EXPECT_NEAR(std::abs(v.amplitudes(0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(v.amplitudes.tail(10).norm(), 0.0, 1e-15);
    EXPECT_NEAR(v.deficit, 0.0, 1e-15);
}

TEST(FockDisplacedSqueezed, CoherentPoisson) {
    const Complex alpha(0.9, -0.4);
    const auto v = coherent(alpha);
    double factorial = 1.0;
    for (int n = 0; n <= 30; ++n) {
        if (n > 0) factorial *= n;
        const double expected = std::exp(-std::norm(alpha)) * std::pow(std::norm(alpha), n) / factorial;
        EXPECT_NEAR(std::norm(v.amplitudes(n)), expected, 1e-14) << "n=" << n;
    }
}

TEST(FockDisplacedSqueezed, SqueezedCoherentOverlapMatchesClosedForm) {
    const double alpha = 0.8;
    const auto lib = overlap(make_coherent_squeezed(alpha, 0.4), make_coherent_squeezed(0.0));
    const auto ora = fock::overlap(fock::displaced_squeezed(std::sqrt(2.0) * alpha, 0.0, 0.4, 0.0, 60), coherent(0.0));
    EXPECT_NEAR(std::abs(lib - ora), 0.0, 1e-8);
}

TEST(FockDisplacedSqueezed, InsufficientCutoff) {
    try {
        fock::displaced_squeezed(4.0, 0.0, 0.0, 0.0, 5);
        FAIL() << "expected insufficient_cutoff";
    } catch (const fock::insufficient_cutoff& e) {
        EXPECT_GT(e.deficit(), 1e-10);
    }
    EXPECT_NO_THROW(fock::displaced_squeezed(4.0, 0.0, 0.0, 0.0, 5, 1.0));
    EXPECT_THROW(fock::displaced_squeezed(0.0, 0.0, 0.0, 0.0, 0), invalid_parameter);
}

TEST(FockDisplacedSqueezed, DeficitIsReported) {
    const auto v = fock::displaced_squeezed(2.0, 0.0, 0.0, 0.0, 12, 1.0);
    EXPECT_NEAR(v.deficit, 1.0 - v.amplitudes.squaredNorm(), 1e-15);
    EXPECT_GT(v.deficit, 0.0);
}

TEST(FockOverlap, CoherentAgainstVacuum) {
    EXPECT_NEAR(std::abs(fock::overlap(coherent(1.0), coherent(0.0)) - std::exp(-0.5)), 0.0, 1e-12);
}

TEST(FockEntropy, PureVectorIsZero) {
    const std::vector<fock::FockVector> states{fock::displaced_squeezed(0.5, 0.3, 0.2, 0.1, 60)};
    const std::vector<double> w{1.0};
    EXPECT_NEAR(fock::entropy(fock::density(states, w)), 0.0, 1e-12);
}

TEST(FockNegativity, ProductStateIsZero) {
    const auto prod = fock::product(coherent(0.5, 20), fock::displaced_squeezed(0.0, 0.0, 0.3, 0.0, 20));
    const std::vector<fock::FockVector> states{prod};
    const std::vector<double> w{1.0};
    EXPECT_NEAR(fock::negativity(fock::density(states, w), 21, 21), 0.0, 1e-10);
}

TEST(FockDisplace, CompositionPhase) {
    const Complex a(0.4, 0.3);
    const Complex b(-0.2, 0.5);
    const auto vac = coherent(0.0, 40);
    const auto lhs = fock::displace(fock::displace(vac, b, 60), a, 60);
    auto rhs = fock::displace(vac, a + b, 60);
    rhs.amplitudes *= std::polar(1.0, (a * std::conj(b)).imag());
    EXPECT_LT((lhs.amplitudes - rhs.amplitudes).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(FockDisplace, MatchesRecurrence) {
    const Complex alpha(0.6, -0.2);
    const auto shifted = fock::displace(coherent(0.0, 40), alpha, 60);
    EXPECT_LT((shifted.amplitudes - coherent(alpha).amplitudes).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FockOracle, CutoffDoublingStability) {
    using namespace branchspan::cli;
    auto run = [](int cutoff) {
        std::vector<double> out;
        const std::vector<ModeParams> modes{{1.1, -0.4, 0.3, 0.7}, {-0.5, 0.9, -0.2, 2.1}};
        const auto f0 = fock::displaced_squeezed(modes[0].x0, modes[0].p0, modes[0].r, modes[0].theta, cutoff);
        const auto f1 = fock::displaced_squeezed(modes[1].x0, modes[1].p0, modes[1].r, modes[1].theta, cutoff);
        const Complex g = fock::overlap(f0, f1);
        out.push_back(g.real());
        out.push_back(g.imag());
        const auto cm = fock::cross_moments(f0, f1);
        for (int i = 0; i < 2; ++i) {
            out.push_back(std::abs(cm.r(i)));
            for (int j = 0; j < 2; ++j) out.push_back(std::abs(cm.M(i, j)));
        }
        const auto [rho, moments] = scenarios::fock_cat({1.0, 0.2, 0.8, 0.3}, cutoff);
        out.push_back(fock::entropy(rho));
        out.push_back(fock::gaussian_entropy(moments.V));
        return out;
    };
    const auto a = run(50);
    const auto b = run(100);
    EXPECT_LT(branchspan::testing::max_abs_diff(a, b), 1e-9);
    EXPECT_NEAR(scenarios::fock_bell_negativity({0.5, 0.1, 0.3, 0.2}, 20),
                scenarios::fock_bell_negativity({0.5, 0.1, 0.3, 0.2}, 40), 1e-9);
}

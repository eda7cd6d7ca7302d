#pragma once

// Spectral entropies, superposition moments, Gaussian reference entropy and
// relative-entropy non-Gaussianity. Entropies are in nats.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "branchspan/errors.hpp"
#include "branchspan/gaussian.hpp"
#include "branchspan/linalg.hpp"
#include "branchspan/manifold.hpp"

namespace branchspan {

/// -sum lambda log lambda with 0 log 0 = 0. Expects a clamped spectrum.
inline double von_neumann_entropy(std::span<const double> spectrum) {
    double s = 0.0;
    for (double lambda : spectrum)
        if (lambda > 0.0) s -= lambda * std::log(lambda);
    return std::max(s, 0.0);
}

inline double von_neumann_entropy(const EffectiveState& state) {
    return von_neumann_entropy(state.spectrum());
}

inline double renyi_entropy(std::span<const double> spectrum, double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha == 1.0)
        throw invalid_parameter("Renyi order must be positive and different from 1");
    double acc = 0.0;
    for (double lambda : spectrum)
        if (lambda > 0.0) acc += std::pow(lambda, alpha);
    return std::log(acc) / (1.0 - alpha);
}

inline double renyi_entropy(const EffectiveState& state, double alpha) {
    return renyi_entropy(state.spectrum(), alpha);
}

inline constexpr double symplectic_tolerance = 1e-9;

/// Symplectic eigenvalues of V: moduli of the +-nu pairs of i Omega V, sorted descending.
inline std::vector<double> symplectic_eigenvalues(const RealMatrix& covariance) {
    const auto dim = covariance.rows();
    if (dim == 0 || dim % 2 != 0 || covariance.cols() != dim)
        throw dimension_mismatch("covariance must be 2n x 2n");
    const RealMatrix omega = linalg::symplectic_form(static_cast<int>(dim / 2));
    // Omega V has eigenvalues +-i nu; i Omega V therefore has the real pairs +-nu.
    Eigen::EigenSolver<RealMatrix> solver(omega * covariance, false);
    if (solver.info() != Eigen::Success)
        throw unphysical_covariance("eigenvalue solver failed on Omega V");
    std::vector<double> moduli;
    moduli.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) moduli.push_back(std::abs(solver.eigenvalues()(k)));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());

    std::vector<double> nu;
    nu.reserve(static_cast<std::size_t>(dim / 2));
    for (std::size_t k = 0; k + 1 < moduli.size(); k += 2) {
        if (std::abs(moduli[k] - moduli[k + 1]) > 1e-10 * std::max(1.0, moduli[k]))
            throw unphysical_covariance("spectrum of i Omega V is not paired");
        nu.push_back(0.5 * (moduli[k] + moduli[k + 1]));
    }
    return nu;
}

/// First moments, raw and central second moments of a (generally non-Gaussian) state.
struct MomentSummary {
    RealVector d;
    RealMatrix M;  ///< <{R, R^T}> / 2
    RealMatrix V;  ///< M - d d^T
    std::vector<double> symplectic_eigenvalues;

    static MomentSummary from_raw(RealVector d, RealMatrix m) {
        m = 0.5 * (m + m.transpose()).eval();
        RealMatrix v = m - d * d.transpose();
        auto nu = branchspan::symplectic_eigenvalues(v);
        for (double x : nu)
            if (x < 0.5 - symplectic_tolerance)
                throw unphysical_covariance("symplectic eigenvalue " + format_number(x) + " below 1/2");
        return MomentSummary{std::move(d), std::move(m), std::move(v), std::move(nu)};
    }
};

inline constexpr double destructive_interference_tolerance = 1e-12;

/// Moments of (c1|g1> + c2|g2>)/sqrt(Z), single mode, canonical-gauge kets.
inline MomentSummary superposition_moments(const GaussianPure& g1, const GaussianPure& g2, Complex c1, Complex c2) {
    if (g1.n_modes() != 1 || g2.n_modes() != 1)
        throw unsupported_dimension("superposition moments are implemented for single-mode branches only");
    if (std::abs(c1) == 0.0 && std::abs(c2) == 0.0)
        throw invalid_parameter("superposition coefficients are both zero");

    const CrossMomentData x = cross_moments(g1, g2);
    const double w1 = std::norm(c1);
    const double w2 = std::norm(c2);
    const Complex c12 = std::conj(c1) * c2;

    const double z = w1 + w2 + 2.0 * (c12 * x.overlap).real();
    if (z <= destructive_interference_tolerance)
        throw degenerate_state("superposition annihilates (Z = " + format_number(z) + ")");

    const Eigen::Vector2d d1 = g1.mean();
    const Eigen::Vector2d d2 = g2.mean();
    const Eigen::Matrix2d m1 = g1.covariance() + d1 * d1.transpose();
    const Eigen::Matrix2d m2 = g2.covariance() + d2 * d2.transpose();

    const Eigen::Vector2d d = (w1 * d1 + w2 * d2 + 2.0 * (c12 * x.r).real()) / z;
    const Eigen::Matrix2d m = (w1 * m1 + w2 * m2 + 2.0 * (c12 * x.M).real()) / z;
    return MomentSummary::from_raw(d, m);
}

/// Entropy of the Gaussian state with the given symplectic eigenvalues.
inline double gaussian_entropy(std::span<const double> nu) {
    double s = 0.0;
    for (double v : nu) {
        if (v < 0.5 - symplectic_tolerance)
            throw unphysical_covariance("symplectic eigenvalue " + format_number(v) + " below 1/2");
        const double hi = std::max(v, 0.5) + 0.5;
        const double lo = std::max(v, 0.5) - 0.5;
        s += hi * std::log(hi);
        if (lo > 0.0) s -= lo * std::log(lo);
    }
    return s;
}

/// S(tau): entropy of the Gaussian reference state with the same moments.
inline double gaussian_reference_entropy(const MomentSummary& ms) {
    return gaussian_entropy(ms.symplectic_eigenvalues);
}

/// Two single-mode branches mixed as (1-p)|psi+><psi+| + p|psi-><psi-|,
/// psi+- proportional to |g1> +- kappa |g2>. The relative phase of |g2> is fixed
/// so that <g1|g2> is real and nonnegative.
class TwoBranchMixSpec {
public:
    static TwoBranchMixSpec create(GaussianPure g1, GaussianPure g2, double kappa, double p) {
        if (g1.n_modes() != 1 || g2.n_modes() != 1)
            throw unsupported_dimension("two-branch mixtures are single-mode");
        if (!std::isfinite(kappa) || kappa < 0.0)
            throw invalid_parameter("kappa must be finite and nonnegative");
        if (!std::isfinite(p) || p < 0.0 || p > 1.0)
            throw invalid_parameter("p must lie in [0, 1]");
        const Complex raw = branchspan::overlap(g1, g2);
        const double g = std::abs(raw);
        const Complex phase = g > 0.0 ? std::conj(raw) / g : Complex(1.0, 0.0);
        return TwoBranchMixSpec(std::move(g1), std::move(g2), kappa, p, std::min(g, 1.0), phase);
    }

    [[nodiscard]] const GaussianPure& g1() const noexcept { return g1_; }
    [[nodiscard]] const GaussianPure& g2() const noexcept { return g2_; }
    [[nodiscard]] double kappa() const noexcept { return kappa_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    /// Gauge-fixed overlap g = |<g1|g2>|.
    [[nodiscard]] double overlap() const noexcept { return g_; }
    /// Phase multiplying the canonical-gauge |g2> to make the overlap real.
    [[nodiscard]] Complex gauge_phase() const noexcept { return phase_; }

private:
    TwoBranchMixSpec(GaussianPure g1, GaussianPure g2, double kappa, double p, double g, Complex phase)
        : g1_(std::move(g1)), g2_(std::move(g2)), kappa_(kappa), p_(p), g_(g), phase_(phase) {}

    GaussianPure g1_;
    GaussianPure g2_;
    double kappa_;
    double p_;
    double g_;
    Complex phase_;
};

inline constexpr double max_branch_overlap = 1.0 - 1e-12;

/// det rho = 4 p (1-p) kappa^2 (1-g^2) / ((1+kappa^2)^2 - (2 kappa g)^2).
inline double two_branch_detrho(double kappa, double p, double g) {
    if (!std::isfinite(kappa) || kappa < 0.0 || !std::isfinite(p) || p < 0.0 || p > 1.0 || !std::isfinite(g)
        || g < 0.0)
        throw invalid_parameter("two-branch parameters out of range");
    if (kappa == 0.0) return 0.0; // single branch, pure for any g
    if (g >= max_branch_overlap)
        throw near_dependence("branch overlap too close to 1", 1.0 - g);
    const double k2 = kappa * kappa;
    const double num = 4.0 * p * (1.0 - p) * k2 * (1.0 - g * g);
    const double den = (1.0 + k2) * (1.0 + k2) - 4.0 * k2 * g * g;
    return num / den;
}

inline double two_branch_detrho(const TwoBranchMixSpec& spec) {
    return two_branch_detrho(spec.kappa(), spec.p(), spec.overlap());
}

/// (lambda+, lambda-) = (1 +- sqrt(1 - 4 det)) / 2.
inline std::vector<double> two_by_two_spectrum(double det) {
    const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * det));
    return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

/// The mixture assembled numerically on the two-branch manifold with Gram [[1, g], [g, 1]].
inline EffectiveState two_branch_effective(double kappa, double p, double g, const GramOptions& opts = {}) {
    if (g >= max_branch_overlap)
        throw near_dependence("branch overlap too close to 1", 1.0 - g);
    ComplexMatrix gram(2, 2);
    gram << 1.0, g, g, 1.0;
    const BranchManifold m = BranchManifold::from_gram(gram, opts);
    std::vector<ComplexVector> coeffs{ComplexVector(2), ComplexVector(2)};
    coeffs[0] << 1.0, kappa;
    coeffs[1] << 1.0, -kappa;
    return effective_density(m, SupportedMixture::create(std::move(coeffs), {1.0 - p, p}));
}

inline EffectiveState two_branch_effective(const TwoBranchMixSpec& spec, const GramOptions& opts = {}) {
    return two_branch_effective(spec.kappa(), spec.p(), spec.overlap(), opts);
}

/// Moments of the dephased mixture: raw moments combine linearly, V is recomputed last.
inline MomentSummary two_branch_moments(const TwoBranchMixSpec& spec) {
    const Complex c2 = spec.kappa() * spec.gauge_phase();
    RealVector d = RealVector::Zero(2);
    RealMatrix m = RealMatrix::Zero(2, 2);
    if (spec.p() < 1.0) {
        const MomentSummary plus = superposition_moments(spec.g1(), spec.g2(), 1.0, c2);
        d += (1.0 - spec.p()) * plus.d;
        m += (1.0 - spec.p()) * plus.M;
    }
    if (spec.p() > 0.0) {
        const MomentSummary minus = superposition_moments(spec.g1(), spec.g2(), 1.0, -c2);
        d += spec.p() * minus.d;
        m += spec.p() * minus.M;
    }
    return MomentSummary::from_raw(std::move(d), std::move(m));
}

struct NonGaussianityReport {
    double state_entropy = 0.0;     ///< S(rho)
    double reference_entropy = 0.0; ///< S(tau(rho))
    double delta = 0.0;             ///< S(tau) - S(rho), clamped at 0
    MomentSummary moments;
};

inline NonGaussianityReport non_gaussianity_report(const TwoBranchMixSpec& spec) {
    const auto spectrum = two_by_two_spectrum(two_branch_detrho(spec));
    NonGaussianityReport out;
    out.state_entropy = von_neumann_entropy(spectrum);
    out.moments = two_branch_moments(spec);
    out.reference_entropy = gaussian_reference_entropy(out.moments);
    const double delta = out.reference_entropy - out.state_entropy;
    if (delta < -1e-10)
        throw invalid_state("negative non-Gaussianity " + format_number(delta));
    out.delta = std::max(delta, 0.0);
    return out;
}

/// delta_nG = S(tau(rho)) - S(rho) for the two-branch dephased mixture.
inline double non_gaussianity(const TwoBranchMixSpec& spec) {
    return non_gaussianity_report(spec).delta;
}

} // namespace branchspan

#pragma once

// Gram matrices of branch families, Loewdin (symmetric) orthogonalization, and
// effective D x D density matrices of states supported on the branch span.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "branchspan/errors.hpp"
#include "branchspan/gaussian.hpp"
#include "branchspan/linalg.hpp"

namespace branchspan {

/// Gram conditioning policy.
///
/// By default the manifold is rejected when min eig(G) <= 1e-10 * D. Setting
/// `pseudo_inverse_cutoff` switches to a regularized mode that drops eigen-directions
/// below the cutoff instead of throwing.
struct GramOptions {
    std::optional<double> threshold;
    std::optional<double> pseudo_inverse_cutoff;

    [[nodiscard]] double threshold_for(Eigen::Index dim) const {
        return threshold.value_or(1e-10 * static_cast<double>(dim));
    }
};

inline constexpr double negative_eigenvalue_clamp = 1e-10;

/// Sorted-descending spectrum with [-1e-10, 0) clamped to zero; more negative entries throw.
inline std::vector<double> clamp_spectrum(std::vector<double> ev) {
    std::sort(ev.begin(), ev.end(), std::greater<>());
    for (double& x : ev) {
        if (x < -negative_eigenvalue_clamp)
            throw invalid_state("density matrix has eigenvalue " + format_number(x));
        if (x < 0.0) x = 0.0;
    }
    return ev;
}

class BranchManifold {
public:
    /// Gram matrix from closed-form overlaps, then its square roots.
    static BranchManifold build(std::vector<GaussianPure> branches, const GramOptions& opts = {}) {
        if (branches.empty())
            throw invalid_parameter("a branch manifold needs at least one branch");
        const auto dim = static_cast<Eigen::Index>(branches.size());
        ComplexMatrix gram(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            gram(i, i) = 1.0;
            for (Eigen::Index j = i + 1; j < dim; ++j) {
                gram(i, j) = overlap(branches[static_cast<std::size_t>(i)], branches[static_cast<std::size_t>(j)]);
                gram(j, i) = std::conj(gram(i, j));
            }
        }
        BranchManifold m = from_gram(std::move(gram), opts);
        m.branches_ = std::move(branches);
        return m;
    }

    /// Abstract manifold known only through its Gram matrix.
    static BranchManifold from_gram(ComplexMatrix gram, const GramOptions& opts = {}) {
        const Eigen::Index dim = gram.rows();
        if (dim == 0 || gram.cols() != dim)
            throw dimension_mismatch("Gram matrix must be square and non-empty");
        if (!gram.allFinite())
            throw invalid_parameter("non-finite Gram entries");
        if (linalg::max_abs(ComplexMatrix(gram - gram.adjoint())) > 1e-12)
            throw invalid_parameter("Gram matrix is not Hermitian");
        for (Eigen::Index i = 0; i < dim; ++i)
            if (std::abs(gram(i, i) - 1.0) > 1e-12)
                throw invalid_parameter("Gram matrix must have unit diagonal");
        gram = linalg::hermitian_part(gram);

        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram);
        const RealVector& ev = solver.eigenvalues();
        const ComplexMatrix& u = solver.eigenvectors();
        const double min_ev = ev.minCoeff();

        RealVector sqrt_ev(dim);
        RealVector inv_sqrt_ev(dim);
        if (opts.pseudo_inverse_cutoff) {
            const double cutoff = *opts.pseudo_inverse_cutoff;
            for (Eigen::Index k = 0; k < dim; ++k) {
                const bool kept = ev(k) > cutoff;
                sqrt_ev(k) = kept ? std::sqrt(ev(k)) : 0.0;
                inv_sqrt_ev(k) = kept ? 1.0 / std::sqrt(ev(k)) : 0.0;
            }
        } else {
            const double threshold = opts.threshold_for(dim);
            if (min_ev <= threshold)
                throw near_dependence("branches are nearly linearly dependent: min Gram eigenvalue "
                                          + format_number(min_ev),
                                      min_ev);
            for (Eigen::Index k = 0; k < dim; ++k) {
                const double lambda = std::max(ev(k), 0.0);
                sqrt_ev(k) = std::sqrt(lambda);
                inv_sqrt_ev(k) = 1.0 / std::sqrt(lambda);
            }
        }

        BranchManifold m;
        m.gram_ = std::move(gram);
        m.gram_sqrt_ = u * sqrt_ev.cast<Complex>().asDiagonal() * u.adjoint();
        m.gram_inv_sqrt_ = u * inv_sqrt_ev.cast<Complex>().asDiagonal() * u.adjoint();
        m.min_eigenvalue_ = min_ev;
        m.threshold_ = opts.pseudo_inverse_cutoff.value_or(opts.threshold_for(dim));
        m.id_ = fingerprint(m.gram_);
        return m;
    }

    [[nodiscard]] Eigen::Index dimension() const noexcept { return gram_.rows(); }
    [[nodiscard]] const std::vector<GaussianPure>& branches() const noexcept { return branches_; }
    [[nodiscard]] const ComplexMatrix& gram() const noexcept { return gram_; }
    [[nodiscard]] const ComplexMatrix& gram_sqrt() const noexcept { return gram_sqrt_; }
    [[nodiscard]] const ComplexMatrix& gram_inv_sqrt() const noexcept { return gram_inv_sqrt_; }
    [[nodiscard]] double min_gram_eigenvalue() const noexcept { return min_eigenvalue_; }
    [[nodiscard]] double threshold() const noexcept { return threshold_; }
    /// Content hash of the Gram matrix; identifies the manifold an EffectiveState lives on.
    [[nodiscard]] std::uint64_t id() const noexcept { return id_; }

private:
    BranchManifold() = default;

    static std::uint64_t fingerprint(const ComplexMatrix& g) {
        std::uint64_t h = 1469598103934665603ULL; // FNV-1a
        for (Eigen::Index k = 0; k < g.size(); ++k) {
            for (double part : {g.data()[k].real(), g.data()[k].imag()}) {
                h ^= std::bit_cast<std::uint64_t>(part);
                h *= 1099511628211ULL;
            }
        }
        return h;
    }

    std::vector<GaussianPure> branches_;
    ComplexMatrix gram_;
    ComplexMatrix gram_sqrt_;
    ComplexMatrix gram_inv_sqrt_;
    double min_eigenvalue_ = 0.0;
    double threshold_ = 0.0;
    std::uint64_t id_ = 0;
};

inline BranchManifold build_manifold(std::vector<GaussianPure> branches, const GramOptions& opts = {}) {
    return BranchManifold::build(std::move(branches), opts);
}

/// Eigenvalues of a circulant Gram matrix from its first row <g0|U^k|g0>, k = 0..D-1.
///
/// Output is indexed by the Fourier label m (not sorted).
inline std::vector<double> circulant_gram_spectrum(std::span<const Complex> first_row, double threshold = -1.0) {
    const auto dim = first_row.size();
    if (dim == 0)
        throw invalid_parameter("empty overlap sequence");
    if (std::abs(first_row[0] - 1.0) > 1e-12)
        throw invalid_parameter("first overlap <g0|g0> must equal 1");
    if (threshold < 0.0) threshold = 1e-10 * static_cast<double>(dim);

    std::vector<double> out(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < dim; ++k) {
            const double angle = -2.0 * pi * static_cast<double>((m * k) % dim) / static_cast<double>(dim);
            acc += first_row[k] * Complex(std::cos(angle), std::sin(angle));
        }
        if (std::abs(acc.imag()) > 1e-10)
            throw invalid_parameter("overlap sequence does not describe a Hermitian circulant Gram matrix");
        if (acc.real() <= threshold)
            throw near_dependence("circulant Gram eigenvalue " + format_number(acc.real()) + " below threshold",
                                  acc.real());
        out[m] = acc.real();
    }
    return out;
}

/// D x D Hermitian, unit-trace, positive semidefinite matrix in the Loewdin basis.
class EffectiveState {
public:
    static constexpr double hermitian_tolerance = 1e-12;
    static constexpr double trace_tolerance = 1e-10;

    static EffectiveState from_matrix(ComplexMatrix rho, std::uint64_t manifold_id = 0) {
        if (rho.rows() == 0 || rho.rows() != rho.cols())
            throw invalid_state("density matrix must be square and non-empty");
        if (!rho.allFinite())
            throw invalid_state("non-finite density matrix");
        if (linalg::max_abs(ComplexMatrix(rho - rho.adjoint())) > hermitian_tolerance)
            throw invalid_state("density matrix is not Hermitian");
        rho = linalg::hermitian_part(rho);
        if (std::abs(rho.trace() - 1.0) > trace_tolerance)
            throw invalid_state("density matrix trace is " + format_number(rho.trace().real()));
        auto ev = clamp_spectrum(linalg::hermitian_eigenvalues(rho));
        return EffectiveState(std::move(rho), std::move(ev), manifold_id);
    }

    [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return rho_; }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return rho_.rows(); }
    /// Clamped eigenvalues, sorted descending.
    [[nodiscard]] const std::vector<double>& spectrum() const noexcept { return spectrum_; }
    [[nodiscard]] std::uint64_t manifold_id() const noexcept { return manifold_id_; }

private:
    EffectiveState(ComplexMatrix rho, std::vector<double> spectrum, std::uint64_t id)
        : rho_(std::move(rho)), spectrum_(std::move(spectrum)), manifold_id_(id) {}

    ComplexMatrix rho_;
    std::vector<double> spectrum_;
    std::uint64_t manifold_id_;
};

/// Convex mixture of (unnormalized) branch superpositions Psi c^(mu).
class SupportedMixture {
public:
    static SupportedMixture create(std::vector<ComplexVector> coefficients, std::vector<double> weights) {
        if (coefficients.empty() || coefficients.size() != weights.size())
            throw invalid_parameter("mixture needs one weight per coefficient vector");
        const auto dim = coefficients.front().size();
        double total = 0.0;
        for (std::size_t mu = 0; mu < coefficients.size(); ++mu) {
            if (coefficients[mu].size() != dim)
                throw dimension_mismatch("coefficient vectors have different lengths");
            if (!coefficients[mu].allFinite() || coefficients[mu].norm() == 0.0)
                throw invalid_parameter("coefficient vectors must be finite and nonzero");
            if (!std::isfinite(weights[mu]) || weights[mu] < 0.0)
                throw invalid_parameter("mixture weights must be nonnegative");
            total += weights[mu];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw invalid_parameter("mixture weights must sum to 1");
        return SupportedMixture(std::move(coefficients), std::move(weights));
    }

    static SupportedMixture pure(ComplexVector c) {
        return create({std::move(c)}, {1.0});
    }

    [[nodiscard]] const std::vector<ComplexVector>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return coeffs_.front().size(); }

private:
    SupportedMixture(std::vector<ComplexVector> c, std::vector<double> w)
        : coeffs_(std::move(c)), weights_(std::move(w)) {}

    std::vector<ComplexVector> coeffs_;
    std::vector<double> weights_;
};

namespace detail {

inline double gram_norm2(const BranchManifold& m, const ComplexVector& c) {
    if (c.size() != m.dimension())
        throw dimension_mismatch("coefficient vector length differs from manifold dimension");
    const double z = c.dot(m.gram() * c).real();
    if (z <= m.threshold() * c.squaredNorm())
        throw near_dependence("superposition norm c^dag G c vanishes", z);
    return z;
}

// X = sum_mu p_mu c c^dag / (c^dag G c)
inline ComplexMatrix weighted_projector_sum(const BranchManifold& m, const SupportedMixture& mix) {
    if (mix.dimension() != m.dimension())
        throw dimension_mismatch("mixture dimension differs from manifold dimension");
    ComplexMatrix x = ComplexMatrix::Zero(m.dimension(), m.dimension());
    for (std::size_t mu = 0; mu < mix.weights().size(); ++mu) {
        const ComplexVector& c = mix.coefficients()[mu];
        x += (mix.weights()[mu] / gram_norm2(m, c)) * (c * c.adjoint());
    }
    return x;
}

} // namespace detail

/// G^{1/2} c / sqrt(c^dag G c): coefficients of the normalized state in the Loewdin basis.
inline ComplexVector lowdin_coefficients(const BranchManifold& m, const ComplexVector& c) {
    const double z = detail::gram_norm2(m, c);
    return m.gram_sqrt() * c / std::sqrt(z);
}

/// rho = G^{1/2} X G^{1/2}.
inline EffectiveState effective_density(const BranchManifold& m, const SupportedMixture& mix) {
    const ComplexMatrix x = detail::weighted_projector_sum(m, mix);
    return EffectiveState::from_matrix(m.gram_sqrt() * x * m.gram_sqrt(), m.id());
}

/// Eigenvalues of X G (generalized problem X G u = lambda u), sorted descending.
///
/// Works on the non-orthogonal branch basis directly, independent of G^{1/2}.
inline std::vector<double> generalized_spectrum(const BranchManifold& m, const SupportedMixture& mix) {
    const ComplexMatrix xg = detail::weighted_projector_sum(m, mix) * m.gram();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(xg, false);
    if (solver.info() != Eigen::Success)
        throw invalid_state("eigenvalue solver failed on XG");
    std::vector<double> ev;
    ev.reserve(static_cast<std::size_t>(xg.rows()));
    for (Eigen::Index k = 0; k < xg.rows(); ++k) ev.push_back(solver.eigenvalues()(k).real());
    return clamp_spectrum(std::move(ev));
}

} // namespace branchspan

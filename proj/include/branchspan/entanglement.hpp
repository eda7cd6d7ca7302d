#pragma once

// Bipartite two-branch encodings
//   |Psi_phi> ~ |g1A>|g1B> + e^{i phi} |g2A>|g2B>
// mixed with the incoherent product-branch mixture at weight p. Everything is
// represented on the 4-dimensional tensor product of the two local Loewdin bases,
// index (i, alpha) -> 2 i + alpha with i the A label and alpha the B label.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "branchspan/errors.hpp"
#include "branchspan/gaussian.hpp"
#include "branchspan/linalg.hpp"
#include "branchspan/manifold.hpp"

namespace branchspan {

/// Gauge-fixed scalar data of a two-branch Bell-like encoding: a, b in [0, 1], phase phi, dephasing p.
struct BellOverlaps {
    double a = 0.0;
    double b = 0.0;
    double phi = 0.0;
    double p = 0.0;

    void validate() const {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(phi) || !std::isfinite(p))
            throw invalid_parameter("non-finite Bell-state parameter");
        if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0)
            throw invalid_parameter("local overlaps must lie in [0, 1]");
        if (p < 0.0 || p > 1.0)
            throw invalid_parameter("dephasing weight must lie in [0, 1]");
    }

    /// Z_phi = 2 + 2 a b cos(phi).
    [[nodiscard]] double normalization() const { return 2.0 + 2.0 * a * b * std::cos(phi); }
};

class TwoBranchBellSpec {
public:
    /// Local overlaps are gauge-fixed by rephasing gA2 and gB2; phi keeps the physical phase.
    static TwoBranchBellSpec create(GaussianPure gA1, GaussianPure gA2, GaussianPure gB1, GaussianPure gB2,
                                    double phi, double p) {
        if (gA1.n_modes() != gA2.n_modes() || gB1.n_modes() != gB2.n_modes())
            throw dimension_mismatch("branches on one party have different mode counts");
        BellOverlaps s{std::min(std::abs(overlap(gA1, gA2)), 1.0), std::min(std::abs(overlap(gB1, gB2)), 1.0), phi, p};
        s.validate();
        return TwoBranchBellSpec(std::array{std::move(gA1), std::move(gA2)}, std::array{std::move(gB1), std::move(gB2)}, s);
    }

    [[nodiscard]] const std::array<GaussianPure, 2>& party_a() const noexcept { return a_; }
    [[nodiscard]] const std::array<GaussianPure, 2>& party_b() const noexcept { return b_; }
    [[nodiscard]] const BellOverlaps& overlaps() const noexcept { return s_; }

private:
    TwoBranchBellSpec(std::array<GaussianPure, 2> a, std::array<GaussianPure, 2> b, BellOverlaps s)
        : a_(std::move(a)), b_(std::move(b)), s_(s) {}

    std::array<GaussianPure, 2> a_;
    std::array<GaussianPure, 2> b_;
    BellOverlaps s_;
};

inline constexpr double min_bell_normalization = 1e-12;

/// N = sqrt((1-a^2)(1-b^2)) / (2 (1 + a b cos phi)) for the pure state (p ignored).
inline double negativity_closed_form(const BellOverlaps& s) {
    s.validate();
    const double z = s.normalization();
    if (z <= min_bell_normalization)
        throw degenerate_state("Bell-like superposition annihilates");
    return std::sqrt((1.0 - s.a * s.a) * (1.0 - s.b * s.b)) / z;
}

inline double negativity_closed_form(const TwoBranchBellSpec& spec) {
    return negativity_closed_form(spec.overlaps());
}

/// Schmidt spectrum (lambda1 >= lambda2) of the pure Bell-like state.
inline std::pair<double, double> schmidt_spectrum(const BellOverlaps& s) {
    const double n = negativity_closed_form(s);
    const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * n * n));
    return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

inline std::pair<double, double> schmidt_spectrum(const TwoBranchBellSpec& spec) {
    return schmidt_spectrum(spec.overlaps());
}

class BipartiteEffectiveState {
public:
    BipartiteEffectiveState(EffectiveState state, std::uint64_t manifold_a, std::uint64_t manifold_b)
        : state_(std::move(state)), manifold_a_(manifold_a), manifold_b_(manifold_b) {
        if (state_.dimension() != 4)
            throw dimension_mismatch("bipartite effective state must be 4 x 4");
    }

    [[nodiscard]] const ComplexMatrix& matrix() const noexcept { return state_.matrix(); }
    [[nodiscard]] const EffectiveState& state() const noexcept { return state_; }
    [[nodiscard]] std::uint64_t manifold_a() const noexcept { return manifold_a_; }
    [[nodiscard]] std::uint64_t manifold_b() const noexcept { return manifold_b_; }

private:
    EffectiveState state_;
    std::uint64_t manifold_a_;
    std::uint64_t manifold_b_;
};

/// (rho^{T_B})_{(i,alpha),(j,beta)} = rho_{(i,beta),(j,alpha)}.
inline ComplexMatrix partial_transpose_b(const ComplexMatrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw dimension_mismatch("partial transpose expects a 4 x 4 matrix");
    ComplexMatrix out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int alpha = 0; alpha < 2; ++alpha)
            for (int j = 0; j < 2; ++j)
                for (int beta = 0; beta < 2; ++beta)
                    out(2 * i + alpha, 2 * j + beta) = rho(2 * i + beta, 2 * j + alpha);
    return out;
}

inline ComplexMatrix partial_transpose_b(const BipartiteEffectiveState& s) {
    return partial_transpose_b(s.matrix());
}

/// Sum of |negative eigenvalues| of rho^{T_B}, i.e. (||rho^{T_B}||_1 - 1) / 2.
inline double negativity_numeric(const BipartiteEffectiveState& s) {
    double n = 0.0;
    for (double lambda : linalg::hermitian_eigenvalues(partial_transpose_b(s)))
        if (lambda < 0.0) n -= lambda;
    return n;
}

/// Reduced 2 x 2 state on A.
inline ComplexMatrix reduced_state_a(const BipartiteEffectiveState& s) {
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int alpha = 0; alpha < 2; ++alpha) out(i, j) += s.matrix()(2 * i + alpha, 2 * j + alpha);
    return out;
}

namespace detail {

inline BranchManifold two_branch_manifold(double overlap, const GramOptions& opts) {
    ComplexMatrix gram(2, 2);
    gram << 1.0, overlap, overlap, 1.0;
    return BranchManifold::from_gram(gram, opts);
}

} // namespace detail

/// rho_{p,phi} = (1-p) |Psi_phi><Psi_phi| + p (|Gamma1><Gamma1| + |Gamma2><Gamma2|)/2 on C^2 (x) C^2.
inline BipartiteEffectiveState build_bipartite_effective(const BellOverlaps& s, const GramOptions& opts = {}) {
    s.validate();
    const BranchManifold ma = detail::two_branch_manifold(s.a, opts);
    const BranchManifold mb = detail::two_branch_manifold(s.b, opts);
    const BranchManifold joint = BranchManifold::from_gram(linalg::kron(ma.gram(), mb.gram()), opts);

    std::vector<ComplexVector> coeffs;
    std::vector<double> weights;
    if (s.p < 1.0) {
        if (s.normalization() <= min_bell_normalization)
            throw degenerate_state("Bell-like superposition annihilates");
        ComplexVector coherent = ComplexVector::Zero(4);
        coherent(0) = 1.0;
        coherent(3) = std::polar(1.0, s.phi);
        coeffs.push_back(coherent);
        weights.push_back(1.0 - s.p);
    }
    if (s.p > 0.0) {
        for (int k : {0, 3}) {
            ComplexVector product = ComplexVector::Zero(4);
            product(k) = 1.0;
            coeffs.push_back(product);
            weights.push_back(0.5 * s.p);
        }
    }

    // Loewdin basis of the product manifold: G^{1/2} = G_A^{1/2} (x) G_B^{1/2}.
    const ComplexMatrix sqrt_ab = linalg::kron(ma.gram_sqrt(), mb.gram_sqrt());
    ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
    for (std::size_t mu = 0; mu < coeffs.size(); ++mu) {
        const double z = coeffs[mu].dot(joint.gram() * coeffs[mu]).real();
        const ComplexVector mapped = sqrt_ab * coeffs[mu] / std::sqrt(z);
        rho += weights[mu] * (mapped * mapped.adjoint());
    }
    BipartiteEffectiveState out(EffectiveState::from_matrix(rho, joint.id()), ma.id(), mb.id());

    if (s.p == 1.0) {
        // Fully dephased: separable by construction.
        for (double lambda : linalg::hermitian_eigenvalues(partial_transpose_b(out)))
            if (lambda < -1e-10)
                throw invalid_state("separable branch mixture has partial-transpose eigenvalue "
                                    + format_number(lambda));
    }
    return out;
}

inline BipartiteEffectiveState build_bipartite_effective(const TwoBranchBellSpec& spec, const GramOptions& opts = {}) {
    return build_bipartite_effective(spec.overlaps(), opts);
}

} // namespace branchspan

#pragma once

// Pure Gaussian branches and their closed-form Gaussian integrals.
//
// Conventions used throughout the library:
//   * quadratures are ordered (x1, p1, ..., xn, pn) with [x, p] = i (hbar = 1);
//   * the vacuum covariance is I/2;
//   * every branch ket carries the canonical position-space gauge, i.e. its
//     wavefunction is N exp(-x^T A x / 2 + beta^T x + gamma) with N > 0 real;
//   * the Weyl operator is D(xi) = exp(i xi^T Omega R), so D(eta, pi) acting on a
//     single mode equals exp(i(eta p - pi x)) and displaces phase space by -xi.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "branchspan/errors.hpp"
#include "branchspan/linalg.hpp"

namespace branchspan {

/// Per-mode parameters of a displaced squeezed vacuum.
struct ModeParams {
    double x0 = 0.0;
    double p0 = 0.0;
    double r = 0.0;     ///< squeezing; the x quadrature is squeezed by e^{-2r} at theta = 0
    double theta = 0.0; ///< squeezing-ellipse rotation angle
};

/// An n-mode pure Gaussian state given by first moments and covariance.
class GaussianPure {
public:
    static constexpr double symmetry_tolerance = 1e-12;
    static constexpr double uncertainty_tolerance = 1e-10;
    static constexpr double purity_tolerance = 1e-8;

    /// Validates (d, V). Throws unphysical_covariance, dimension_mismatch or invalid_parameter.
    static GaussianPure from_moments(RealVector mean, RealMatrix covariance) {
        if (mean.size() == 0 || mean.size() % 2 != 0)
            throw dimension_mismatch("first-moment vector must have even, positive length");
        if (covariance.rows() != mean.size() || covariance.cols() != mean.size())
            throw dimension_mismatch("covariance shape does not match first moments");
        if (!mean.allFinite() || !covariance.allFinite())
            throw invalid_parameter("non-finite Gaussian moments");

        const int n = static_cast<int>(mean.size() / 2);
        if (linalg::max_abs(RealMatrix(covariance - covariance.transpose())) > symmetry_tolerance)
            throw unphysical_covariance("covariance matrix is not symmetric");
        covariance = 0.5 * (covariance + covariance.transpose()).eval();

        ComplexMatrix uncertainty = covariance.cast<Complex>();
        uncertainty += Complex(0.0, 0.5) * linalg::symplectic_form(n).cast<Complex>();
        const double min_eig = linalg::hermitian_eigenvalues(uncertainty).back();
        if (min_eig < -uncertainty_tolerance)
            throw unphysical_covariance("covariance violates the uncertainty relation (min eigenvalue "
                                        + format_number(min_eig) + ")");

        const double pure_det = std::pow(2.0, -2.0 * n);
        const double det = covariance.determinant();
        if (std::abs(det - pure_det) > purity_tolerance * pure_det)
            throw unphysical_covariance("covariance is not that of a pure state (det V = "
                                        + format_number(det) + ")");

        return GaussianPure(std::move(mean), std::move(covariance));
    }

    [[nodiscard]] int n_modes() const noexcept { return static_cast<int>(mean_.size() / 2); }
    [[nodiscard]] const RealVector& mean() const noexcept { return mean_; }
    [[nodiscard]] const RealMatrix& covariance() const noexcept { return cov_; }

private:
    GaussianPure(RealVector mean, RealMatrix covariance)
        : mean_(std::move(mean)), cov_(std::move(covariance)) {}

    RealVector mean_;
    RealMatrix cov_;
};

/// Product of independent per-mode displaced squeezed vacua.
///
/// Mode k gets d = (x0, p0) and V = R(theta) diag(e^{-2r}, e^{2r}) R(theta)^T / 2.
inline GaussianPure make_displaced_squeezed(std::span<const ModeParams> modes) {
    if (modes.empty())
        throw invalid_parameter("at least one mode is required");
    const auto n = static_cast<Eigen::Index>(modes.size());
    RealVector d = RealVector::Zero(2 * n);
    RealMatrix v = RealMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const ModeParams& m = modes[static_cast<std::size_t>(k)];
        if (!std::isfinite(m.x0) || !std::isfinite(m.p0) || !std::isfinite(m.r) || !std::isfinite(m.theta))
            throw invalid_parameter("non-finite displaced-squeezed parameter in mode " + std::to_string(k));
        const double c = std::cos(m.theta);
        const double s = std::sin(m.theta);
        Eigen::Matrix2d rot;
        rot << c, -s, s, c;
        const Eigen::Matrix2d diag = Eigen::Vector2d(std::exp(-2.0 * m.r), std::exp(2.0 * m.r)).asDiagonal();
        v.block<2, 2>(2 * k, 2 * k) = 0.5 * rot * diag * rot.transpose();
        d(2 * k) = m.x0;
        d(2 * k + 1) = m.p0;
    }
    return GaussianPure::from_moments(std::move(d), std::move(v));
}

inline GaussianPure make_displaced_squeezed(const ModeParams& mode) {
    return make_displaced_squeezed(std::span<const ModeParams>(&mode, 1));
}

/// Single-mode D(alpha) S(r, theta)|0> with complex amplitude alpha, i.e. d = sqrt(2) (Re alpha, Im alpha).
inline GaussianPure make_coherent_squeezed(Complex alpha, double r = 0.0, double theta = 0.0) {
    return make_displaced_squeezed(ModeParams{std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag(), r, theta});
}

/// Joint state of independent parties: moments are direct sums.
inline GaussianPure tensor_product(const GaussianPure& a, const GaussianPure& b) {
    const auto na = a.mean().size();
    const auto nb = b.mean().size();
    RealVector d(na + nb);
    d << a.mean(), b.mean();
    RealMatrix v = RealMatrix::Zero(na + nb, na + nb);
    v.topLeftCorner(na, na) = a.covariance();
    v.bottomRightCorner(nb, nb) = b.covariance();
    return GaussianPure::from_moments(std::move(d), std::move(v));
}

/// Position-space wavefunction N exp(-x^T A x / 2 + beta^T x + gamma).
struct WavefunctionParams {
    ComplexMatrix A;
    ComplexVector beta;
    Complex gamma{0.0, 0.0};
    double norm_prefactor = 0.0;
};

namespace detail {

inline std::vector<int> x_indices(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) idx[static_cast<std::size_t>(k)] = 2 * k;
    return idx;
}

inline std::vector<int> p_indices(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) idx[static_cast<std::size_t>(k)] = 2 * k + 1;
    return idx;
}

} // namespace detail

inline constexpr double max_position_condition = 1e14;

inline WavefunctionParams wavefunction_params(const GaussianPure& g) {
    const int n = g.n_modes();
    const auto xi = detail::x_indices(n);
    const auto pi_idx = detail::p_indices(n);
    const RealMatrix& v = g.covariance();

    const RealMatrix vxx = v(xi, xi);
    const RealMatrix vxp = v(xi, pi_idx);
    const RealVector x0 = g.mean()(xi);
    const RealVector p0 = g.mean()(pi_idx);

    Eigen::SelfAdjointEigenSolver<RealMatrix> es(vxx, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo > max_position_condition)
        throw degenerate_covariance("position block of the covariance is numerically singular");

    const RealMatrix vxx_inv = vxx.inverse();
    WavefunctionParams out;
    out.A = vxx_inv.cast<Complex>()
            * (0.5 * ComplexMatrix::Identity(n, n) - Complex(0.0, 1.0) * vxp.cast<Complex>());
    out.A = 0.5 * (out.A + out.A.transpose()).eval();
    const ComplexVector x0c = x0.cast<Complex>();
    out.beta = out.A * x0c + Complex(0.0, 1.0) * p0.cast<Complex>();
    out.gamma = -0.5 * (x0c.transpose() * out.A * x0c)(0) - Complex(0.0, 0.5) * p0.dot(x0);
    out.norm_prefactor = std::pow((2.0 * pi * vxx).determinant(), -0.25);
    return out;
}

/// Inverts wavefunction_params: recovers (d, V) from (A, beta).
inline GaussianPure moments_from_wavefunction(const WavefunctionParams& w) {
    const auto n = w.A.rows();
    const RealMatrix ar = w.A.real();
    const RealMatrix ai = w.A.imag();
    const RealMatrix ar_inv = ar.inverse();

    const RealMatrix vxx = 0.5 * ar_inv;
    const RealMatrix vxp = -vxx * ai;
    const RealMatrix vpp = 0.5 * (ar + ai * ar_inv * ai);
    const RealVector x0 = ar_inv * w.beta.real();
    const RealVector p0 = w.beta.imag() - ai * x0;

    RealVector d(2 * n);
    RealMatrix v(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d(2 * i) = x0(i);
        d(2 * i + 1) = p0(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            v(2 * i, 2 * j) = vxx(i, j);
            v(2 * i, 2 * j + 1) = vxp(i, j);
            v(2 * i + 1, 2 * j) = vxp(j, i);
            v(2 * i + 1, 2 * j + 1) = vpp(i, j);
        }
    }
    v = 0.5 * (v + v.transpose()).eval();
    return GaussianPure::from_moments(std::move(d), std::move(v));
}

namespace detail {

inline void require_same_modes(const GaussianPure& g1, const GaussianPure& g2) {
    if (g1.n_modes() != g2.n_modes())
        throw dimension_mismatch("branches have different mode counts");
}

// <psi_1|psi_2> for two wavefunctions with the bra side conjugated.
inline Complex gaussian_pair_integral(const WavefunctionParams& w1, const ComplexVector& beta2,
                                      Complex gamma2, const WavefunctionParams& w2) {
    const auto n = w1.A.rows();
    const ComplexMatrix s = w1.A.conjugate() + w2.A;
    const ComplexVector b = w1.beta.conjugate() + beta2;
    Eigen::PartialPivLU<ComplexMatrix> lu(s);
    const ComplexVector sb = lu.solve(b);
    const Complex logdet = linalg::log_det_right_half_plane(s);
    const Complex exponent = std::conj(w1.gamma) + gamma2 + 0.5 * (b.transpose() * sb)(0)
                             + 0.5 * static_cast<double>(n) * std::log(2.0 * pi) - 0.5 * logdet;
    return w1.norm_prefactor * w2.norm_prefactor * std::exp(exponent);
}

} // namespace detail

/// <g1|g2> in the canonical gauge.
inline Complex overlap(const GaussianPure& g1, const GaussianPure& g2) {
    detail::require_same_modes(g1, g2);
    const auto w1 = wavefunction_params(g1);
    const auto w2 = wavefunction_params(g2);
    return detail::gaussian_pair_integral(w1, w2.beta, w2.gamma, w2);
}

/// |<g1|g2>|^2 from moments alone: exp(-dd^T (V1+V2)^{-1} dd / 2) / sqrt(det(V1+V2)).
inline double overlap_fidelity(const GaussianPure& g1, const GaussianPure& g2) {
    detail::require_same_modes(g1, g2);
    const RealMatrix sum = g1.covariance() + g2.covariance();
    const RealVector delta = g1.mean() - g2.mean();
    Eigen::LDLT<RealMatrix> ldlt(sum);
    return std::exp(-0.5 * delta.dot(ldlt.solve(delta))) / std::sqrt(sum.determinant());
}

/// <g1| D(xi) |g2> with xi = (eta1, pi1, ..., etan, pin).
inline Complex cross_characteristic(const GaussianPure& g1, const GaussianPure& g2, const RealVector& xi) {
    detail::require_same_modes(g1, g2);
    const int n = g1.n_modes();
    if (xi.size() != 2 * n)
        throw dimension_mismatch("xi must have length 2n");
    if (!xi.allFinite())
        throw invalid_parameter("non-finite xi");

    const auto w1 = wavefunction_params(g1);
    const auto w2 = wavefunction_params(g2);
    const ComplexVector eta = xi(detail::x_indices(n)).cast<Complex>();
    const ComplexVector mom = xi(detail::p_indices(n)).cast<Complex>();
    const Complex i{0.0, 1.0};

    // [D(xi) psi](x) = exp(-i pi^T (x + eta/2)) psi(x + eta)
    const ComplexVector beta = w2.beta - w2.A * eta - i * mom;
    const Complex gamma = w2.gamma + (w2.beta.transpose() * eta)(0)
                          - 0.5 * (eta.transpose() * w2.A * eta)(0) - 0.5 * i * (mom.transpose() * eta)(0);
    return detail::gaussian_pair_integral(w1, beta, gamma, w2);
}

/// Overlap plus single-mode first and symmetrized second cross moments.
struct CrossMomentData {
    Complex overlap{0.0, 0.0};
    Eigen::Vector2cd r;  ///< (<g1|x|g2>, <g1|p|g2>)
    Eigen::Matrix2cd M;  ///< <g1| {R, R^T} / 2 |g2>

    /// Same data for the ket |g2> multiplied by `phase`.
    [[nodiscard]] CrossMomentData rephased(Complex phase) const {
        return CrossMomentData{overlap * phase, r * phase, M * phase};
    }
};

inline CrossMomentData cross_moments(const GaussianPure& g1, const GaussianPure& g2) {
    detail::require_same_modes(g1, g2);
    if (g1.n_modes() != 1)
        throw unsupported_dimension("cross moments are implemented for single-mode branches only");

    const auto w1 = wavefunction_params(g1);
    const auto w2 = wavefunction_params(g2);
    const Complex a2 = w2.A(0, 0);
    const Complex b2 = w2.beta(0);
    const Complex s = std::conj(w1.A(0, 0)) + a2;
    if (s.real() <= 0.0)
        throw degenerate_pair("Re(A1* + A2) must be positive");
    const Complex b = std::conj(w1.beta(0)) + b2;
    const Complex mu = b / s;
    const Complex sigma = 1.0 / s;
    const Complex i{0.0, 1.0};

    const Complex g12 = detail::gaussian_pair_integral(w1, w2.beta, w2.gamma, w2);
    const Complex x2 = sigma + mu * mu;

    CrossMomentData out;
    out.overlap = g12;
    out.r << g12 * mu, g12 * (i * a2 * mu - i * b2);
    const Complex xx = g12 * x2;
    const Complex xp = g12 * (i * a2 * x2 - i * b2 * mu - 0.5 * i);
    const Complex pp = g12 * (a2 - a2 * a2 * x2 + 2.0 * a2 * b2 * mu - b2 * b2);
    out.M << xx, xp, xp, pp;
    return out;
}

} // namespace branchspan

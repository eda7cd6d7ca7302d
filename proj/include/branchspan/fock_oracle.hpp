#pragma once

// Truncated number-basis reference implementation. Only tests and the `verify`
// CLI command include this header; none of the closed-form code depends on it.
//
// Vectors are phase-aligned with the canonical position-space gauge used by
// gaussian.hpp: D(alpha) S(zeta)|0> has position prefactor
// pi^{-1/4} (cosh r - e^{i phi} sinh r)^{-1/2}, so the number-basis vector is
// multiplied by exp(i arg(cosh r - e^{i phi} sinh r) / 2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "branchspan/errors.hpp"
#include "branchspan/linalg.hpp"

namespace branchspan::fock {

/// Truncation left more weight outside the cutoff than the caller allows.
class insufficient_cutoff : public error {
public:
    insufficient_cutoff(const std::string& what, double deficit) : error(what), deficit_(deficit) {}
    [[nodiscard]] double deficit() const noexcept { return deficit_; }

private:
    double deficit_;
};

inline constexpr double default_deficit_tolerance = 1e-10;

struct FockVector {
    ComplexVector amplitudes; ///< length cutoff + 1
    int cutoff = 0;
    double deficit = 0.0;     ///< 1 - ||amplitudes||^2 for a state that is normalized before truncation
};

inline void check_deficit(double deficit, double tolerance) {
    if (deficit > tolerance)
        throw insufficient_cutoff("truncation deficit " + format_number(deficit) + " exceeds tolerance "
                                      + format_number(tolerance),
                                  deficit);
}

/// Gauge phase relating the number-basis D(alpha)S(r e^{2 i theta})|0> to the canonical ket.
inline Complex canonical_gauge_phase(double r, double theta) {
    const Complex e = std::polar(1.0, 2.0 * theta);
    return std::polar(1.0, 0.5 * std::arg(std::cosh(r) - e * std::sinh(r)));
}

/// D(alpha) S(zeta)|0> with alpha = (x0 + i p0)/sqrt(2), zeta = r e^{2 i theta}, via
/// (a - alpha) cosh r + (a^dag - alpha^*) e^{i phi} sinh r annihilating the state.
inline FockVector displaced_squeezed(double x0, double p0, double r, double theta, int cutoff,
                                     double tolerance = default_deficit_tolerance) {
    if (cutoff < 1)
        throw invalid_parameter("cutoff must be at least 1");
    if (!std::isfinite(x0) || !std::isfinite(p0) || !std::isfinite(r) || !std::isfinite(theta))
        throw invalid_parameter("non-finite Fock-state parameter");
    const Complex alpha(x0 / std::sqrt(2.0), p0 / std::sqrt(2.0));
    const Complex e = std::polar(1.0, 2.0 * theta);
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    const double th = std::tanh(r);

    ComplexVector c = ComplexVector::Zero(cutoff + 1);
    c(0) = std::exp(-0.5 * std::norm(alpha) - 0.5 * std::conj(alpha) * std::conj(alpha) * e * th) / std::sqrt(ch);
    const Complex drive = alpha * ch + std::conj(alpha) * e * sh;
    for (int n = 0; n < cutoff; ++n) {
        Complex next = drive * c(n);
        if (n > 0) next -= e * sh * std::sqrt(static_cast<double>(n)) * c(n - 1);
        c(n + 1) = next / (ch * std::sqrt(static_cast<double>(n + 1)));
    }
    c *= canonical_gauge_phase(r, theta);

    FockVector out{std::move(c), cutoff, 0.0};
    out.deficit = std::max(0.0, 1.0 - out.amplitudes.squaredNorm());
    check_deficit(out.deficit, tolerance);
    return out;
}

inline Complex overlap(const FockVector& a, const FockVector& b) {
    const auto n = std::min(a.amplitudes.size(), b.amplitudes.size());
    return a.amplitudes.head(n).dot(b.amplitudes.head(n));
}

/// D(alpha) v = e^{-|alpha|^2/2} e^{alpha a^dag} e^{-alpha^* a} v, truncated at out_cutoff.
inline FockVector displace(const FockVector& v, Complex alpha, int out_cutoff,
                           double tolerance = default_deficit_tolerance) {
    const int n_in = static_cast<int>(v.amplitudes.size());
    // e^{-alpha^* a}: finite series because a only lowers.
    ComplexVector lowered = v.amplitudes;
    ComplexVector term = v.amplitudes;
    for (int k = 1; k < n_in; ++k) {
        ComplexVector next = ComplexVector::Zero(n_in);
        for (int n = 0; n + 1 < n_in; ++n) next(n) = std::sqrt(static_cast<double>(n + 1)) * term(n + 1);
        term = next * (-std::conj(alpha) / static_cast<double>(k));
        lowered += term;
        if (term.norm() == 0.0) break;
    }
    // e^{alpha a^dag}: series truncated at out_cutoff.
    ComplexVector raised = ComplexVector::Zero(out_cutoff + 1);
    const auto keep = std::min<Eigen::Index>(lowered.size(), out_cutoff + 1);
    raised.head(keep) = lowered.head(keep);
    term = raised;
    for (int k = 1; k <= out_cutoff; ++k) {
        ComplexVector next = ComplexVector::Zero(out_cutoff + 1);
        for (int n = 0; n < out_cutoff; ++n) next(n + 1) = std::sqrt(static_cast<double>(n + 1)) * term(n);
        term = next * (alpha / static_cast<double>(k));
        raised += term;
        if (term.norm() < 1e-300) break;
    }
    FockVector out{raised * std::exp(-0.5 * std::norm(alpha)), out_cutoff, 0.0};
    out.deficit = std::max(0.0, v.amplitudes.squaredNorm() - out.amplitudes.squaredNorm());
    check_deficit(out.deficit, tolerance);
    return out;
}

/// Weyl operator D(xi) = exp(i(eta p - pi x)) = D(alpha) with alpha = -(eta + i pi)/sqrt(2).
inline FockVector weyl(const FockVector& v, double eta, double mom, int out_cutoff,
                       double tolerance = default_deficit_tolerance) {
    return displace(v, Complex(-eta, -mom) / std::sqrt(2.0), out_cutoff, tolerance);
}

/// Linear combination, renormalized in the truncated space.
inline FockVector superpose(std::span<const FockVector> branches, std::span<const Complex> coeffs) {
    if (branches.empty() || branches.size() != coeffs.size())
        throw invalid_parameter("one coefficient per branch is required");
    FockVector out{ComplexVector::Zero(branches.front().amplitudes.size()), branches.front().cutoff, 0.0};
    for (std::size_t k = 0; k < branches.size(); ++k) {
        if (branches[k].amplitudes.size() != out.amplitudes.size())
            throw dimension_mismatch("branches have different cutoffs");
        out.amplitudes += coeffs[k] * branches[k].amplitudes;
        out.deficit = std::max(out.deficit, branches[k].deficit);
    }
    const double norm = out.amplitudes.norm();
    if (norm < 1e-12)
        throw degenerate_state("Fock superposition vanishes");
    out.amplitudes /= norm;
    return out;
}

/// sum_mu w_mu |v_mu><v_mu| / ||v_mu||^2.
inline ComplexMatrix density(std::span<const FockVector> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size())
        throw invalid_parameter("one weight per state is required");
    const auto dim = states.front().amplitudes.size();
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < states.size(); ++k) {
        const ComplexVector& v = states[k].amplitudes;
        rho += weights[k] / v.squaredNorm() * (v * v.adjoint());
    }
    return rho;
}

inline std::vector<double> spectrum(const ComplexMatrix& rho) {
    auto ev = linalg::hermitian_eigenvalues(rho);
    for (double& x : ev) x = std::max(x, 0.0);
    return ev;
}

inline double entropy(const ComplexMatrix& rho) {
    double s = 0.0;
    for (double x : spectrum(rho))
        if (x > 0.0) s -= x * std::log(x);
    return std::max(s, 0.0);
}

namespace detail {

inline ComplexVector apply_a(const ComplexVector& v) {
    ComplexVector out = ComplexVector::Zero(v.size() + 1);
    for (Eigen::Index n = 0; n + 1 < v.size(); ++n) out(n) = std::sqrt(static_cast<double>(n + 1)) * v(n + 1);
    return out;
}

inline ComplexVector apply_adag(const ComplexVector& v) {
    ComplexVector out = ComplexVector::Zero(v.size() + 1);
    for (Eigen::Index n = 0; n < v.size(); ++n) out(n + 1) = std::sqrt(static_cast<double>(n + 1)) * v(n);
    return out;
}

} // namespace detail

/// <v1| R |v2> and <v1| {R, R^T}/2 |v2> for a single mode, exact on the truncated vectors.
struct CrossMoments {
    Complex overlap{0.0, 0.0};
    Eigen::Vector2cd r;
    Eigen::Matrix2cd M;
};

inline CrossMoments cross_moments(const FockVector& v1, const FockVector& v2) {
    if (v1.amplitudes.size() != v2.amplitudes.size())
        throw dimension_mismatch("vectors have different cutoffs");
    const double s2 = std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    auto x = [&](const ComplexVector& v) -> ComplexVector { return (detail::apply_a(v) + detail::apply_adag(v)) / s2; };
    auto p = [&](const ComplexVector& v) -> ComplexVector { return -i * (detail::apply_a(v) - detail::apply_adag(v)) / s2; };
    auto pad = [](const ComplexVector& v) -> ComplexVector {
        ComplexVector out = ComplexVector::Zero(v.size() + 1);
        out.head(v.size()) = v;
        return out;
    };

    const ComplexVector x1 = x(v1.amplitudes), x2 = x(v2.amplitudes);
    const ComplexVector p1 = p(v1.amplitudes), p2 = p(v2.amplitudes);
    const ComplexVector u1 = pad(v1.amplitudes), u2 = pad(v2.amplitudes);

    CrossMoments out;
    out.overlap = v1.amplitudes.dot(v2.amplitudes);
    out.r << u1.dot(x2), u1.dot(p2);
    const Complex xp = 0.5 * (x1.dot(p2) + p1.dot(x2));
    out.M << x1.dot(x2), xp, xp, p1.dot(p2);
    return out;
}

/// First moments and covariance of a single-mode density matrix given as a mixture.
struct Moments {
    Eigen::Vector2d d;
    Eigen::Matrix2d M;
    Eigen::Matrix2d V;
};

inline Moments mixture_moments(std::span<const FockVector> states, std::span<const double> weights) {
    Moments out{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
    for (std::size_t k = 0; k < states.size(); ++k) {
        const CrossMoments cm = cross_moments(states[k], states[k]);
        const double norm = cm.overlap.real();
        out.d += weights[k] * cm.r.real() / norm;
        out.M += weights[k] * cm.M.real() / norm;
    }
    out.V = out.M - out.d * out.d.transpose();
    return out;
}

/// Entropy of the single-mode Gaussian state with covariance V, nu = sqrt(det V).
inline double gaussian_entropy(const Eigen::Matrix2d& v) {
    const double nu = std::sqrt(v.determinant());
    const double hi = nu + 0.5;
    const double lo = nu - 0.5;
    return hi * std::log(hi) - (lo > 0.0 ? lo * std::log(lo) : 0.0);
}

/// Joint vector |a>|b>, index n_a * (cutoff_b + 1) + n_b.
inline FockVector product(const FockVector& a, const FockVector& b) {
    const auto da = a.amplitudes.size();
    const auto db = b.amplitudes.size();
    ComplexVector v(da * db);
    for (Eigen::Index i = 0; i < da; ++i) v.segment(i * db, db) = a.amplitudes(i) * b.amplitudes;
    return FockVector{std::move(v), a.cutoff, std::max(a.deficit, b.deficit)};
}

/// Partial transpose on the second factor of a (da*db) x (da*db) matrix.
inline ComplexMatrix partial_transpose_second(const ComplexMatrix& rho, Eigen::Index da, Eigen::Index db) {
    if (rho.rows() != da * db || rho.cols() != da * db)
        throw dimension_mismatch("matrix does not match the bipartite dimensions");
    ComplexMatrix out(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            for (Eigen::Index a = 0; a < db; ++a)
                for (Eigen::Index b = 0; b < db; ++b) out(i * db + a, j * db + b) = rho(i * db + b, j * db + a);
    return out;
}

/// Sum of |negative eigenvalues| of the partial transpose.
inline double negativity(const ComplexMatrix& rho, Eigen::Index da, Eigen::Index db) {
    double n = 0.0;
    for (double x : linalg::hermitian_eigenvalues(partial_transpose_second(rho, da, db)))
        if (x < 0.0) n -= x;
    return n;
}

} // namespace branchspan::fock

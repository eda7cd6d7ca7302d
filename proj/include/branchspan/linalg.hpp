#pragma once

// Small dense helpers shared by the library headers.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "branchspan/errors.hpp"

namespace branchspan {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

namespace linalg {

/// Symplectic form for n modes in (x1,p1,...,xn,pn) ordering: block diagonal [[0,1],[-1,0]].
inline RealMatrix symplectic_form(int n_modes) {
    RealMatrix omega = RealMatrix::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const RealMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
    const RealVector& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

/// f(M) for Hermitian M through its eigendecomposition.
template <typename Fn>
ComplexMatrix hermitian_function(const ComplexMatrix& m, Fn&& fn) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
    const ComplexMatrix& u = solver.eigenvectors();
    RealVector mapped = solver.eigenvalues().unaryExpr(std::forward<Fn>(fn));
    return u * mapped.cast<Complex>().asDiagonal() * u.adjoint();
}

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Log-determinant of a complex symmetric matrix with positive-definite real part.
///
/// The imaginary part is the sum of principal arguments of the eigenvalues. All
/// eigenvalues lie in the open right half plane, so this is the analytic
/// continuation of the real log-determinant and exp(-logdet/2) is the principal
/// branch of det^{-1/2} used by Gaussian integrals.
inline Complex log_det_right_half_plane(const ComplexMatrix& s) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(s, false);
    if (solver.info() != Eigen::Success)
        throw degenerate_pair("eigenvalue solver failed on pair matrix");
    Complex acc{0.0, 0.0};
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const Complex lambda = solver.eigenvalues()(k);
        if (std::abs(lambda) == 0.0 || !std::isfinite(std::abs(lambda)))
            throw degenerate_pair("pair matrix has a vanishing eigenvalue");
        acc += std::log(lambda);
    }
    return acc;
}

inline bool all_finite(const RealMatrix& m) {
    return m.allFinite();
}

} // namespace linalg
} // namespace branchspan

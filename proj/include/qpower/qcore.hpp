#pragma once

// Dense complex Hermitian linear algebra and the entropy primitives every
// other module builds on. All entropies are in nats.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qpower/error.hpp"

namespace qpower {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using cplx = std::complex<double>;

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double negative_eigenvalue = 1e-9;
inline constexpr double simplex_sum = 1e-10;
inline constexpr double simplex_entry = 1e-12;
}  // namespace tol

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }
inline double bits_to_nats(double bits) { return bits * std::numbers::ln2; }

/// Largest entry of |M - M^dagger|.
template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw Error(Errc::NonHermitian, "operator must be square and non-empty");
  if (!m.allFinite()) throw Error(Errc::NonHermitian, "operator has non-finite entries");
  if (hermitian_defect(m) > tol::hermitian)
    throw Error(Errc::NonHermitian, "operator differs from its adjoint beyond tolerance");
}

template <typename Real>
struct HermitianEigen {
  RVector<Real> values;    // ascending
  CMatrix<Real> vectors;   // columns are eigenvectors
};

/// Full eigendecomposition of a Hermitian operator (tridiagonal QL, deterministic).
template <typename Derived>
HermitianEigen<typename Derived::RealScalar> eig_hermitian(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  require_hermitian(m);
  CMatrix<Real> herm = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(herm);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues only, ascending. Qubit operators use the closed form; the hot
/// loops of the solvers are dominated by 2x2 spectra.
template <typename Derived>
RVector<typename Derived::RealScalar> hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  if (m.rows() == 2 && m.cols() == 2) {
    const Real a = std::real(m(0, 0));
    const Real d = std::real(m(1, 1));
    const Real mean = (a + d) / 2;
    const Real r = std::hypot((a - d) / 2, std::abs(m(1, 0)));
    RVector<Real> values(2);
    values << mean - r, mean + r;
    return values;
  }
  if (m.rows() == 1 && m.cols() == 1) return RVector<Real>::Constant(1, std::real(m(0, 0)));
  CMatrix<Real> herm = (m + m.adjoint()) / Real(2);
  return Eigen::SelfAdjointEigenSolver<CMatrix<Real>>(herm, Eigen::EigenvaluesOnly).eigenvalues();
}

/// -sum x ln x over a spectrum, with 0 ln 0 = 0. Values in [-1e-9, 0) are
/// treated as zero; anything more negative is rejected.
template <typename Derived>
typename Derived::Scalar entropy_of_spectrum(const Eigen::MatrixBase<Derived>& values) {
  using Real = typename Derived::Scalar;
  Real s = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Real x = values(i);
    if (x < -Real(tol::negative_eigenvalue))
      throw Error(Errc::NotDensity, "negative eigenvalue below tolerance");
    if (x > 0) s -= x * std::log(x);
  }
  return s;
}

template <typename Derived>
void require_density(const Eigen::MatrixBase<Derived>& rho) {
  require_hermitian(rho);
  if (std::abs(rho.trace() - typename Derived::Scalar(1)) > tol::trace)
    throw Error(Errc::NotDensity, "trace differs from one");
  if (hermitian_eigenvalues(rho).minCoeff() < -tol::negative_eigenvalue)
    throw Error(Errc::NotDensity, "operator is not positive semidefinite");
}

template <typename Derived>
bool is_density(const Eigen::MatrixBase<Derived>& rho) {
  try {
    require_density(rho);
  } catch (const Error&) {
    return false;
  }
  return true;
}

/// S(rho) = -Tr rho ln rho.
template <typename Derived>
typename Derived::RealScalar von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho) {
  require_hermitian(rho);
  if (std::abs(rho.trace() - typename Derived::Scalar(1)) > tol::trace)
    throw Error(Errc::NotDensity, "trace differs from one");
  return entropy_of_spectrum(hermitian_eigenvalues(rho));
}

/// Validates a probability vector and returns it with tiny negative weights
/// clamped to zero.
template <typename Derived>
RVector<typename Derived::Scalar> checked_simplex(const Eigen::MatrixBase<Derived>& p) {
  using Real = typename Derived::Scalar;
  if (p.size() == 0) throw Error(Errc::NotSimplex, "empty probability vector");
  if (!p.allFinite()) throw Error(Errc::NotSimplex, "non-finite weight");
  if (p.minCoeff() < -Real(tol::simplex_entry)) throw Error(Errc::NotSimplex, "negative weight");
  if (std::abs(p.sum() - Real(1)) > tol::simplex_sum)
    throw Error(Errc::NotSimplex, "weights do not sum to one");
  return p.cwiseMax(Real(0));
}

template <typename Derived>
typename Derived::Scalar shannon_entropy(const Eigen::MatrixBase<Derived>& p) {
  return entropy_of_spectrum(checked_simplex(p));
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::OutOfRange, "binary entropy needs p in [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

/// Re Tr(H rho); the imaginary residue of a Hermitian pair is discarded.
template <typename DerivedH, typename DerivedR>
typename DerivedH::RealScalar expectation(const Eigen::MatrixBase<DerivedH>& h,
                                          const Eigen::MatrixBase<DerivedR>& rho) {
  if (h.rows() != rho.rows() || h.cols() != rho.cols())
    throw Error(Errc::DimMismatch, "expectation: operator and state dimensions differ");
  return std::real(h.cwiseProduct(rho.transpose()).sum());
}

template <typename DerivedA, typename DerivedB>
CMatrix<typename DerivedA::RealScalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  CMatrix<typename DerivedA::RealScalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

enum class Subsystem { A, B };

/// Traces out one factor of a bipartite operator on C^{d_a} (x) C^{d_b},
/// returning the reduced operator on the kept factor.
template <typename Derived>
CMatrix<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& rho,
                                                    Eigen::Index dim_a, Eigen::Index dim_b,
                                                    Subsystem keep) {
  if (dim_a < 1 || dim_b < 1 || rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b)
    throw Error(Errc::DimMismatch, "partial_trace: dimension does not factor as d_a * d_b");
  using Real = typename Derived::RealScalar;
  if (keep == Subsystem::A) {
    CMatrix<Real> out = CMatrix<Real>::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k) out(i, j) += rho(i * dim_b + k, j * dim_b + k);
    return out;
  }
  CMatrix<Real> out = CMatrix<Real>::Zero(dim_b, dim_b);
  for (Eigen::Index k = 0; k < dim_a; ++k) out += rho.block(k * dim_b, k * dim_b, dim_b, dim_b);
  return out;
}

template <typename Derived>
CMatrix<typename Derived::RealScalar> projector(const Eigen::MatrixBase<Derived>& psi) {
  return psi * psi.adjoint();
}

namespace pauli {
inline ComplexMatrix identity(int d = 2) { return ComplexMatrix::Identity(d, d); }
inline ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

inline ComplexMatrix diagonal_operator(const RealVector& levels) {
  return levels.cast<cplx>().asDiagonal();
}

/// |psi(theta, phi)> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline ComplexVector bloch_ket(double theta, double phi) {
  ComplexVector psi(2);
  psi << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return psi;
}

}  // namespace qpower

#pragma once

// Dense linear algebra helpers shared by every module.
//
// Vectorization convention (project wide): column stacking,
//   vec(A X B) = (B^T kron A) vec(X),
// which is Eigen's native column-major storage order.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "tqms/errors.hpp"

namespace tqms {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVec vec(const CMat& x) {
  return Eigen::Map<const CVec>(x.data(), x.size());
}

inline CMat unvec(const CVec& v, Eigen::Index d) {
  if (v.size() != d * d) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const CMat>(v.data(), d, d);
}

/// Superoperator matrix of X -> A X B.
inline CMat sandwich_matrix(const CMat& a, const CMat& b) {
  return kron(b.transpose(), a);
}

inline CMat dagger(const CMat& a) { return a.adjoint(); }

inline double op_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

inline double max_abs(const CMat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMat& a, double tol) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

inline CMat hermitian_part(const CMat& a) { return 0.5 * (a + a.adjoint()); }

/// f(H) for Hermitian H via eigendecomposition.
inline CMat hermitian_function(const CMat& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h));
  if (es.info() != Eigen::Success)
    throw numerical_error("hermitian_function: eigensolver failed");
  RVec lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = f(lam(i));
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

inline RVec hermitian_eigenvalues(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("hermitian_eigenvalues: eigensolver failed");
  return es.eigenvalues();
}

/// Schatten-1 norm (sum of singular values).
inline double trace_norm(const CMat& a) {
  if (is_hermitian(a, 1e-13)) return hermitian_eigenvalues(a).cwiseAbs().sum();
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues().sum();
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  if (!m.allFinite()) throw numerical_error(what + ": non-finite result");
}

/// e^{M} by Pade scaling-and-squaring.
inline CMat expm(const CMat& m) {
  CMat out = m.exp();
  require_finite(out, "expm");
  return out;
}

inline RMat expm(const RMat& m) {
  RMat out = m.exp();
  if (!out.allFinite()) {
    throw numerical_error("expm: non-finite result (norm " +
                          std::to_string(m.lpNorm<Eigen::Infinity>()) + ")");
  }
  return out;
}

struct NullSpace {
  /// Orthonormal columns spanning the numerical kernel.
  CMat basis;
  /// Some singular value sits within three decades above the threshold.
  bool borderline = false;
};

/// Column count up to which null_space uses the Jacobi SVD.
inline Eigen::Index jacobi_svd_limit = 512;

namespace detail {

template <class Svd>
NullSpace null_space_from(const Svd& svd, Eigen::Index n, double tol) {
  NullSpace out;
  const RVec& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  const double thr = tol * scale;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) {
      ++rank;
      if (s(i) < 1e3 * thr) out.borderline = true;
    }
  }
  out.basis = svd.matrixV().rightCols(n - rank);
  return out;
}

}  // namespace detail

/// Kernel of m via SVD with relative threshold tol * max(1, sigma_max).
/// BDCSVD in Eigen 3.4 can break down on highly degenerate spectra, so it
/// is only used above jacobi_svd_limit columns, and its result is checked.
inline NullSpace null_space(const CMat& m, double tol = 1e-8) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) {
    NullSpace out;
    out.basis = CMat::Identity(n, n);
    return out;
  }
  if (n <= jacobi_svd_limit) {
    Eigen::JacobiSVD<CMat, Eigen::ColPivHouseholderQRPreconditioner> svd(m, Eigen::ComputeFullV);
    return detail::null_space_from(svd, n, tol);
  }
  Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeFullV);
  NullSpace out = detail::null_space_from(svd, n, tol);
  const double scale = std::max(1.0, svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0);
  if (out.basis.cols() > 0 && (m * out.basis).cwiseAbs().maxCoeff() > 1e2 * tol * scale)
    throw numerical_error("null_space: SVD residual check failed");
  return out;
}

inline CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMat pauli_y() {
  CMat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Haar-random pure state |psi><psi| of dimension d.
template <class Rng>
CMat random_pure_state(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> nd;
  CVec psi(d);
  for (Eigen::Index i = 0; i < d; ++i) psi(i) = cplx(nd(rng), nd(rng));
  psi.normalize();
  return psi * psi.adjoint();
}

/// Full-rank random density matrix G G^dagger / Tr, G Ginibre.
template <class Rng>
CMat random_density(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> nd;
  CMat g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

template <class Rng>
CMat random_matrix(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> nd;
  CMat g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  return g;
}

}  // namespace tqms

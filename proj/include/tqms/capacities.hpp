#pragma once

// Capacity sandwiches for transferred channels, entanglement-breaking times
// and reference formulas. All values in e-bits.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqms/classical.hpp"
#include "tqms/fixed_point.hpp"
#include "tqms/semigroup.hpp"

namespace tqms {

struct CapacityBounds {
  double lower = 0;
  double upper = 0;        // lower + log(1 + eps), capped at log d^2
  double upper_crude = 0;  // lower + eps
  bool strong_converse = true;
};

struct CapacityReport {
  double t = 0;
  double eps = 0;  // ||k_t - 1||_inf
  std::size_t dim = 0;
  CapacityBounds Q, P, Q2way, P2way, C, C_EA;
};

inline CapacityBounds sandwich_family(double lower, double eps, double cap) {
  CapacityBounds b;
  b.lower = lower;
  b.upper = std::min(lower + std::log1p(eps), cap);
  b.upper_crude = lower + eps;
  return b;
}

/// Sandwich from block data and eps = ||k_t - 1||_inf.
inline CapacityReport capacity_sandwich(const CommutantDecomposition& dec, double eps, double t) {
  if (!(eps >= 0)) throw std::invalid_argument("capacity_sandwich: eps must be nonnegative");
  CapacityReport r;
  r.t = t;
  r.eps = eps;
  for (const auto& b : dec.blocks) r.dim += b.n * b.d;
  const double cap = 2.0 * std::log(static_cast<double>(r.dim));
  const double qp = std::log(static_cast<double>(dec.max_n()));
  r.Q = sandwich_family(qp, eps, cap);
  r.P = r.Q;
  r.Q2way = r.Q;
  r.P2way = r.Q;
  r.C = sandwich_family(std::log(static_cast<double>(dec.sum_n())), eps, cap);
  r.C_EA = sandwich_family(std::log(static_cast<double>(dec.sum_n2())), eps, cap);
  return r;
}

inline CapacityReport capacity_sandwich(const CommutantDecomposition& dec, const ClassicalGenerator& gen, double t) {
  return capacity_sandwich(dec, kernel_norm(kernel_at(gen, t), kInf), t);
}

/// t_EB <= t(1/d) for a primitive chain.
inline double eb_time_bound(const ClassicalGenerator& gen, std::size_t d) {
  if (d < 1) throw std::invalid_argument("eb_time_bound: d >= 1 required");
  if (!is_primitive(gen))
    throw std::domain_error("eb_time_bound: chain is not primitive; the entanglement breaking time might be infinite");
  return t_eps(gen, 1.0 / static_cast<double>(d));
}

/// Same, additionally requiring a trivial fixed-point algebra.
inline double eb_time_bound(const ProjectiveRep& rep, const ClassicalGenerator& gen) {
  if (commutant_basis(rep).basis.size() != 1)
    throw std::domain_error(
        "eb_time_bound: fixed-point algebra is not trivial; the entanglement breaking time might be infinite");
  return eb_time_bound(gen, rep.dim);
}

struct PptResult {
  double time = kInf;  // first PPT time, +inf if never within t_max
  bool exact = false;  // PPT equals separability (qubit output)
  bool asymptotic_obstruction = false;
};

inline double ppt_t_max = 50.0;

inline double ppt_min_eigenvalue(const Superoperator& ch) {
  return hermitian_eigenvalues(partial_transpose_first(choi(ch), static_cast<Eigen::Index>(ch.dim))).minCoeff();
}

/// First time the Choi matrix of T_t has positive partial transpose.
///
/// Near-zero eigenvalues are settled by expanding T_t = E + e^{-t l1} P_1 + ...
/// around the limit: if the leading correction is indefinite on the kernel of
/// the limit's partial transpose, T_t stays NPT for all t.
inline PptResult ppt_eb_report(const Superoperator& lind, const ProjectiveRep& rep) {
  if (lind.kind != SuperKind::lindbladian) throw std::invalid_argument("ppt_eb_time: expects a lindbladian");
  if (rep.dim != lind.dim) throw std::invalid_argument("ppt_eb_time: dimension mismatch");
  PptResult out;
  out.exact = lind.dim <= 2;
  const Eigen::Index d = static_cast<Eigen::Index>(lind.dim);
  const QuantumPropagator prop(lind);
  constexpr double tau = 1e-12;
  auto is_ppt = [&](double t) { return ppt_min_eigenvalue(prop.channel(t)) >= -tau; };

  if (lind.selfadjoint_hs) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(lind.matrix));
    const RVec& ev = es.eigenvalues();
    CMat p0 = CMat::Zero(d * d, d * d), p1 = CMat::Zero(d * d, d * d);
    double l1 = kInf;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > zero_eigen_threshold) l1 = std::min(l1, ev(i));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const CMat proj = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      if (ev(i) <= zero_eigen_threshold) p0 += proj;
      else if (std::isfinite(l1) && ev(i) - l1 <= 1e-9) p1 += proj;
    }
    const CMat a0 = partial_transpose_first(choi({lind.dim, p0, SuperKind::channel, true}), d);
    Eigen::SelfAdjointEigenSolver<CMat> a0es(hermitian_part(a0));
    bool obstructed = a0es.eigenvalues().minCoeff() < -1e-9;
    if (!obstructed && std::isfinite(l1)) {
      std::vector<Eigen::Index> ker;
      for (Eigen::Index i = 0; i < a0es.eigenvalues().size(); ++i)
        if (std::abs(a0es.eigenvalues()(i)) <= 1e-9) ker.push_back(i);
      if (!ker.empty()) {
        CMat vk(d * d, static_cast<Eigen::Index>(ker.size()));
        for (std::size_t j = 0; j < ker.size(); ++j) vk.col(static_cast<Eigen::Index>(j)) = a0es.eigenvectors().col(ker[j]);
        const CMat a1 = partial_transpose_first(choi({lind.dim, p1, SuperKind::channel, true}), d);
        obstructed = hermitian_eigenvalues(vk.adjoint() * a1 * vk).minCoeff() < -1e-9;
      }
    }
    out.asymptotic_obstruction = obstructed;
  }

  // PPT is preserved by composing with T_r, so the PPT set of times is a half line.
  if (out.asymptotic_obstruction) return out;
  constexpr int kGrid = 256;
  double prev = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = ppt_t_max * i / kGrid;
    if (is_ppt(t)) {
      if (i == 0) {
        out.time = 0.0;
        return out;
      }
      double lo = prev, hi = t;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (is_ppt(mid) ? hi : lo) = mid;
      }
      out.time = hi;
      return out;
    }
    prev = t;
  }
  return out;
}

inline double ppt_eb_time(const Superoperator& lind, const ProjectiveRep& rep) {
  return ppt_eb_report(lind, rep).time;
}

struct MlsiBounds {
  double QP_bound = 0;
  double CEA_bound = 0;
  std::optional<double> C_bound;
  std::optional<double> alpha_c;
};

/// Q, P <= max log n_k + 2 e^{-a1 t} log d;  C_EA <= log sum n_k^2 + 2 e^{-a1 t} log d;
/// C <= e^{-ac t} log d + log sum n_k when a cMLS constant ac is known.
inline MlsiBounds mlsi_capacity_bounds(const CommutantDecomposition& dec, double alpha1, std::size_t d, double t,
                                       std::optional<double> alpha_c = std::nullopt) {
  if (!(alpha1 > 0)) throw std::domain_error("mlsi_capacity_bounds: alpha1 > 0 required");
  if (alpha_c && !(*alpha_c > 0)) throw std::domain_error("mlsi_capacity_bounds: alpha_c > 0 required");
  require_time(t);
  const double logd = std::log(static_cast<double>(d));
  MlsiBounds b;
  b.QP_bound = std::log(static_cast<double>(dec.max_n())) + 2.0 * std::exp(-alpha1 * t) * logd;
  b.CEA_bound = std::log(static_cast<double>(dec.sum_n2())) + 2.0 * std::exp(-alpha1 * t) * logd;
  if (alpha_c) {
    b.alpha_c = alpha_c;
    b.C_bound = std::exp(-*alpha_c * t) * logd + std::log(static_cast<double>(dec.sum_n()));
  }
  return b;
}

/// True when lind = id - E_fix, for which alpha_c >= 1.
inline bool is_simple_generator(const Superoperator& lind, const ProjectiveRep& rep, double tol = 1e-10) {
  const Superoperator e = conditional_expectation(rep);
  const CMat id = CMat::Identity(lind.matrix.rows(), lind.matrix.cols());
  return max_abs(lind.matrix - (id - e.matrix)) <= tol;
}

inline MlsiBounds mlsi_capacity_bounds(const CommutantDecomposition& dec, double alpha1, const Superoperator& lind,
                                       const ProjectiveRep& rep, double t) {
  std::optional<double> ac;
  if (is_simple_generator(lind, rep)) ac = 1.0;
  return mlsi_capacity_bounds(dec, alpha1, lind.dim, t, ac);
}

enum class ReferenceKind { dephasing_2way, depolarizing_2way };

inline double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

/// Dephasing: log n - S(e^{-t} + q, q, ..., q), q = (1 - e^{-t})/n.
/// Depolarizing: log n - H2(p) - p log(n-1), p = (n^2-1)/n^2 (1 - e^{-t}),
/// zero once t >= log(n+1).
inline double reference_exact(ReferenceKind kind, std::size_t n, double t) {
  if (n < 2) throw std::invalid_argument("reference_exact: n >= 2 required");
  require_time(t);
  const double x = static_cast<double>(n);
  const double e = std::exp(-t);
  switch (kind) {
    case ReferenceKind::dephasing_2way: {
      const double q = (1.0 - e) / x;
      const double s = -xlogx(e + q) - (x - 1.0) * xlogx(q);
      return std::max(0.0, std::log(x) - s);
    }
    case ReferenceKind::depolarizing_2way: {
      if (t >= std::log(x + 1.0)) return 0.0;
      const double p = (x * x - 1.0) / (x * x) * (1.0 - e);
      const double h2 = -xlogx(p) - xlogx(1.0 - p);
      return std::max(0.0, std::log(x) - h2 - p * std::log(x - 1.0));
    }
  }
  throw std::invalid_argument("reference_exact: unknown kind");
}

/// Rate at which the random-SWAP capacities approach their limit, for t > n log n.
inline double swap_convergence_rate(std::size_t n, double t) {
  const double x = static_cast<double>(n);
  if (n < 2) throw std::domain_error("swap_convergence_rate: n >= 2 required");
  if (!(t > x * std::log(x))) throw std::domain_error("swap_convergence_rate: t > n log n required");
  return std::exp(-(2.0 / (x - 1.0)) * (t - x * std::log(x)));
}

inline const char* capacity_csv_header() { return "t,eps,Q_lo,Q_hi,C_lo,C_hi,CEA_lo,CEA_hi,ref_exact"; }

}  // namespace tqms

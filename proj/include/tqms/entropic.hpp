#pragma once

// Schatten norms, relative entropy and sandwiched Renyi divergences (natural
// logarithm throughout), plus the entropy comparison for transferred channels.

#include <cmath>
#include <stdexcept>

#include "tqms/classical.hpp"
#include "tqms/semigroup.hpp"

namespace tqms {

inline double schatten_norm(const CMat& a, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("schatten_norm: p >= 1 required");
  const RVec s = is_hermitian(a, 1e-13) ? RVec(hermitian_eigenvalues(a).cwiseAbs())
                                        : RVec(Eigen::JacobiSVD<CMat>(a).singularValues());
  if (std::isinf(p)) return s.maxCoeff();
  return std::pow(s.array().pow(p).sum(), 1.0 / p);
}

enum class SupportPolicy {
  strict,   // ker(sigma) not inside ker(rho) gives +inf
  project,  // evaluate on the support of sigma regardless
};

inline double eigen_floor = 1e-14;

/// f applied to the eigenvalues of a PSD matrix above the floor; zero elsewhere.
inline CMat psd_function(const CMat& a, const std::function<double(double)>& f) {
  return hermitian_function(a, [&](double x) { return x > eigen_floor ? f(x) : 0.0; });
}

/// True when ker(sigma) is not contained in ker(rho).
inline bool support_violation(const CMat& rho, const CMat& sigma, double tol = 1e-12) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(sigma));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > tol * scale) continue;
    const CVec v = es.eigenvectors().col(i);
    if (std::abs((v.adjoint() * rho * v)(0, 0)) > tol) return true;
  }
  return false;
}

/// D(rho || sigma) = Tr rho (log rho - log sigma).
inline double relative_entropy(const CMat& rho, const CMat& sigma, SupportPolicy policy = SupportPolicy::strict) {
  if (rho.rows() != sigma.rows()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  if (policy == SupportPolicy::strict && support_violation(rho, sigma)) return kInf;
  double s = 0;
  const RVec ev = hermitian_eigenvalues(rho);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > eigen_floor) s += ev(i) * std::log(ev(i));
  const CMat logs = psd_function(sigma, [](double x) { return std::log(x); });
  return s - (rho * logs).trace().real();
}

struct DivergenceRequest {
  CMat rho;
  CMat sigma;
  double p = 1.0;
  SupportPolicy policy = SupportPolicy::strict;
};

/// Sandwiched Renyi divergence
///   D_p = 1/(p-1) log Tr[(sigma^{(1-p)/2p} rho sigma^{(1-p)/2p})^p],
/// D_1 the relative entropy and D_inf = log ||sigma^{-1/2} rho sigma^{-1/2}||_inf.
inline double renyi_divergence(const DivergenceRequest& req) {
  const double p = req.p;
  if (!(p >= 1.0)) throw std::invalid_argument("renyi_divergence: p >= 1 required");
  if (req.rho.rows() != req.sigma.rows()) throw std::invalid_argument("renyi_divergence: dimension mismatch");
  if (p == 1.0) return relative_entropy(req.rho, req.sigma, req.policy);
  if (req.policy == SupportPolicy::strict && support_violation(req.rho, req.sigma)) return kInf;
  if (std::isinf(p)) {
    const CMat s = psd_function(req.sigma, [](double x) { return 1.0 / std::sqrt(x); });
    return std::log(hermitian_eigenvalues(s * req.rho * s).maxCoeff());
  }
  const double a = (1.0 - p) / (2.0 * p);
  const CMat s = psd_function(req.sigma, [a](double x) { return std::pow(x, a); });
  const RVec ev = hermitian_eigenvalues(s * req.rho * s);
  double tr = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0) tr += std::pow(ev(i), p);
  return std::log(tr) / (p - 1.0);
}

inline double renyi_divergence(const CMat& rho, const CMat& sigma, double p,
                               SupportPolicy policy = SupportPolicy::strict) {
  return renyi_divergence({rho, sigma, p, policy});
}

/// D_N(rho) = D(rho || E_fix(rho)).
inline double d_nfix(const CMat& rho, const Superoperator& efix) {
  return relative_entropy(rho, efix.apply_adjoint(rho));
}

inline double d_nfix(const CMat& rho, const ProjectiveRep& rep) {
  check_density(rho, "d_nfix");
  return d_nfix(rho, conditional_expectation(rep));
}

/// Phi_k(rho) = (1/|G|) sum_g k(g) u(g)^dagger rho u(g). For k = k_t this is
/// the Schroedinger-picture transferred channel T_t^dagger.
inline CMat phi_kernel(const ProjectiveRep& rep, const RVec& k, const CMat& rho) {
  if (static_cast<std::size_t>(k.size()) != rep.group.order)
    throw std::invalid_argument("phi_kernel: kernel size differs from group order");
  CMat out = CMat::Zero(rho.rows(), rho.cols());
  for (std::size_t g = 0; g < rep.group.order; ++g)
    if (k(static_cast<Eigen::Index>(g)) != 0.0)
      out += k(static_cast<Eigen::Index>(g)) * co_representation(rep, rho, g);
  return out / static_cast<double>(rep.group.order);
}

struct ComparisonCheck {
  double lhs = 0;          // D_p(Phi_k rho || sigma)
  double rhs = 0;          // lower + kernel_term
  double slack = 0;        // rhs - lhs
  double lower = 0;        // D_p(E_fix rho || sigma)
  double lower_slack = 0;  // lhs - lower
  double kernel_term = 0;  // (p/(p-1)) log ||k||_p, or int k log k at p = 1
};

/// Entropy (p = 1) and Renyi comparison for a kernel k and sigma in N_fix.
inline ComparisonCheck entropy_comparison_check(const ProjectiveRep& rep, const KernelSlice& k, const CMat& rho,
                                                const CMat& sigma, double p = 1.0) {
  const Superoperator e = conditional_expectation(rep);
  if (max_abs(e.apply_adjoint(sigma) - sigma) > 1e-8)
    throw std::invalid_argument("entropy_comparison_check: sigma is not in the fixed-point algebra");
  if (hermitian_eigenvalues(sigma).minCoeff() <= 1e-12)
    throw std::invalid_argument("entropy_comparison_check: sigma must have full support");
  ComparisonCheck out;
  const CMat out_state = phi_kernel(rep, k.values, rho);
  out.lhs = renyi_divergence(out_state, sigma, p);
  out.lower = renyi_divergence(e.apply_adjoint(rho), sigma, p);
  if (p == 1.0)
    out.kernel_term = kernel_entropy(k);
  else if (std::isinf(p))
    out.kernel_term = std::log(kernel_lp(k, kInf));
  else
    out.kernel_term = p / (p - 1.0) * std::log(kernel_lp(k, p));
  out.rhs = out.lower + out.kernel_term;
  out.slack = out.rhs - out.lhs;
  out.lower_slack = out.lhs - out.lower;
  return out;
}

}  // namespace tqms

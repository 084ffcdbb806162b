#pragma once

// Quantum Markov semigroups T_t = e^{-tL} on B(C^d), Heisenberg picture,
// stored as d^2 x d^2 matrices acting on column-stacked operators.
//
// Transferred semigroup:  T_t(x) = sum_h P_t(e, h) u(h)^dagger x u(h),
// with P_t = e^{-tL} the classical transition matrix.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqms/classical.hpp"
#include "tqms/representation.hpp"

namespace tqms {

enum class SuperKind { lindbladian, channel, conditional_expectation };

struct Superoperator {
  std::size_t dim = 0;
  CMat matrix;
  SuperKind kind = SuperKind::lindbladian;
  bool selfadjoint_hs = false;

  CMat apply(const CMat& x) const { return unvec(matrix * vec(x), static_cast<Eigen::Index>(dim)); }

  /// Hilbert-Schmidt adjoint (Schroedinger picture).
  Superoperator adjoint() const { return {dim, matrix.adjoint(), kind, selfadjoint_hs}; }
  CMat apply_adjoint(const CMat& x) const {
    return unvec(matrix.adjoint() * vec(x), static_cast<Eigen::Index>(dim));
  }
};

inline double hermitian_tolerance = 1e-10;

inline Superoperator identity_superop(std::size_t d, SuperKind kind = SuperKind::channel) {
  return {d, CMat::Identity(d * d, d * d), kind, true};
}

/// Throws std::invalid_argument unless rho is a density matrix.
inline void check_density(const CMat& rho, const char* who = "density") {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": not square");
  if (!is_hermitian(rho, 1e-12)) throw std::invalid_argument(std::string(who) + ": not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) throw std::invalid_argument(std::string(who) + ": trace != 1");
  if (hermitian_eigenvalues(rho).minCoeff() < -1e-10)
    throw std::invalid_argument(std::string(who) + ": not positive semidefinite");
}

/// Superoperator of x -> u^dagger x u.
inline CMat conjugation_matrix(const CMat& u) { return sandwich_matrix(u.adjoint(), u); }

/// L(x) = sum_g c_g (x - u(g)^dagger x u(g)).
inline Superoperator transferred_lindbladian(const ProjectiveRep& rep, const ClassicalGenerator& gen) {
  if (!(rep.group == gen.group))
    throw std::invalid_argument("transferred_lindbladian: representation and chain use different groups");
  const std::size_t d = rep.dim;
  CMat m = CMat::Zero(d * d, d * d);
  const CMat id = CMat::Identity(d * d, d * d);
  for (std::size_t g = 0; g < gen.order(); ++g) {
    if (gen.rates[g] == 0.0) continue;
    m += gen.rates[g] * (id - conjugation_matrix(rep.unitaries[g]));
  }
  const bool sa = gen.reversible || is_hermitian(m, hermitian_tolerance);
  return {d, m, SuperKind::lindbladian, sa};
}

enum class DiffusiveNormalization {
  standard,  // sum a^2 x + x a^2 - 2 a x a
  half,      // sum (a^2 x + x a^2)/2 - a x a
};

inline Superoperator diffusive_lindbladian(const std::vector<CMat>& ops,
                                           DiffusiveNormalization norm = DiffusiveNormalization::standard) {
  if (ops.empty()) throw std::invalid_argument("diffusive_lindbladian: no operators");
  const Eigen::Index d = ops.front().rows();
  const CMat id = CMat::Identity(d, d);
  CMat m = CMat::Zero(d * d, d * d);
  const double w = norm == DiffusiveNormalization::standard ? 1.0 : 0.5;
  for (const CMat& a : ops) {
    if (a.rows() != d || a.cols() != d) throw std::invalid_argument("diffusive_lindbladian: shape mismatch");
    if (!is_hermitian(a, 1e-10)) throw std::invalid_argument("diffusive_lindbladian: operator not Hermitian");
    const CMat a2 = a * a;
    m += w * (sandwich_matrix(a2, id) + sandwich_matrix(id, a2)) - 2.0 * w * sandwich_matrix(a, a);
  }
  return {static_cast<std::size_t>(d), m, SuperKind::lindbladian, true};
}

/// sigma^{(n)} = sum_i I^{(x)i-1} (x) sigma (x) I^{(x)n-i}.
inline CMat collective_operator(const CMat& sigma, std::size_t n) {
  if (n < 1) throw std::invalid_argument("collective_operator: n >= 1 required");
  checked_power(2, n, max_rep_dim, "collective_operator");
  const Eigen::Index q = sigma.rows();
  Eigen::Index dim = 1;
  for (std::size_t i = 0; i < n; ++i) dim *= q;
  CMat out = CMat::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    CMat term = CMat::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) term = kron(term, k == i ? sigma : CMat(CMat::Identity(q, q)));
    out += term;
  }
  return out;
}

/// Weak collective decoherence, (1/2)(Z^2 x + x Z^2) - Z x Z with Z = sigma_z^{(n)}.
inline Superoperator wcd_lindbladian(std::size_t n) {
  return diffusive_lindbladian({collective_operator(pauli_z(), n)}, DiffusiveNormalization::half);
}

/// Strong collective decoherence: the same with all three collective Paulis.
inline Superoperator scd_lindbladian(std::size_t n) {
  return diffusive_lindbladian({collective_operator(pauli_x(), n), collective_operator(pauli_y(), n),
                                collective_operator(pauli_z(), n)},
                               DiffusiveNormalization::half);
}

/// Choi matrix of the Schroedinger-picture map: sum_ij E_ij (x) Phi^dagger(E_ij).
inline CMat choi(const Superoperator& s) {
  const Eigen::Index d = static_cast<Eigen::Index>(s.dim);
  const CMat sd = s.matrix.adjoint();
  CMat c(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      // vec(E_ij) is the unit vector at j*d + i.
      const CMat y = unvec(sd.col(j * d + i), d);
      c.block(i * d, j * d, d, d) = y;
    }
  return c;
}

/// Transpose on the first tensor factor of a (d x d) bipartite matrix.
inline CMat partial_transpose_first(const CMat& c, Eigen::Index d) {
  CMat out(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out.block(i * d, j * d, d, d) = c.block(j * d, i * d, d, d);
  return out;
}

inline double choi_floor = -1e-9;
inline std::size_t cp_check_max_dim = 16;

struct ChannelCheck {
  double unitality_error = 0;
  double choi_min_eigenvalue = 0;
  bool cp_checked = false;
};

inline ChannelCheck inspect_channel(const Superoperator& ch, bool force_cp = false) {
  ChannelCheck out;
  const Eigen::Index d = static_cast<Eigen::Index>(ch.dim);
  const CMat id = CMat::Identity(d, d);
  out.unitality_error = max_abs(ch.apply(id) - id);
  if (force_cp || ch.dim <= cp_check_max_dim) {
    out.cp_checked = true;
    out.choi_min_eigenvalue = hermitian_eigenvalues(choi(ch)).minCoeff();
  }
  return out;
}

/// Eigen-decomposes a self-adjoint generator once; exponentiates otherwise.
class QuantumPropagator {
public:
  explicit QuantumPropagator(const Superoperator& lind) : lind_(lind) {
    if (lind.kind != SuperKind::lindbladian) throw std::invalid_argument("QuantumPropagator: not a lindbladian");
    if (lind.selfadjoint_hs) {
      Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(lind.matrix));
      if (es.info() != Eigen::Success) throw numerical_error("QuantumPropagator: eigensolver failed");
      vecs_ = es.eigenvectors();
      vals_ = es.eigenvalues();
    }
  }

  Superoperator channel(double t) const {
    require_time(t);
    CMat m;
    if (vals_.size() > 0) {
      RVec w = (-t * vals_).array().exp();
      m = vecs_ * w.asDiagonal() * vecs_.adjoint();
    } else {
      m = expm(CMat(-t * lind_.matrix));
    }
    return {lind_.dim, m, SuperKind::channel, lind_.selfadjoint_hs};
  }

  const Superoperator& generator() const { return lind_; }

private:
  Superoperator lind_;
  CMat vecs_;
  RVec vals_;
};

/// T_t = e^{-tL}; unitality and (for d^2 <= 256) complete positivity checked.
inline Superoperator channel_at(const Superoperator& lind, double t, bool force_cp = false) {
  if (lind.kind != SuperKind::lindbladian) throw std::invalid_argument("channel_at: expects a lindbladian");
  require_time(t);
  Superoperator ch{lind.dim, expm(CMat(-t * lind.matrix)), SuperKind::channel, lind.selfadjoint_hs};
  const auto chk = inspect_channel(ch, force_cp);
  if (chk.unitality_error > 1e-9) throw numerical_error("channel_at: result is not unital");
  if (chk.cp_checked && chk.choi_min_eigenvalue < choi_floor)
    throw numerical_error("channel_at: Choi matrix not positive (" + std::to_string(chk.choi_min_eigenvalue) + ")");
  return ch;
}

/// E_fix(x) = (1/|G|) sum_g u(g)^dagger x u(g).
inline Superoperator conditional_expectation(const ProjectiveRep& rep) {
  const std::size_t d = rep.dim;
  CMat m = CMat::Zero(d * d, d * d);
  for (const CMat& u : rep.unitaries) m += conjugation_matrix(u);
  m /= static_cast<double>(rep.group.order);
  return {d, m, SuperKind::conditional_expectation, is_hermitian(m, 1e-10)};
}

/// Smallest eigenvalue above zero_tol of a self-adjoint generator.
inline double quantum_spectral_gap(const Superoperator& lind, double zero_tol = zero_eigen_threshold) {
  if (lind.kind != SuperKind::lindbladian) throw std::invalid_argument("quantum_spectral_gap: not a lindbladian");
  if (!lind.selfadjoint_hs)
    throw std::domain_error("quantum_spectral_gap: generator is not HS self-adjoint (use the symmetrized gap)");
  const RVec ev = hermitian_eigenvalues(lind.matrix);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > zero_tol) return ev(i);
  return 0.0;
}

/// Gap of (L + L^dagger)/2, for generators flagged non-self-adjoint.
inline double symmetrized_quantum_gap(const Superoperator& lind, double zero_tol = zero_eigen_threshold) {
  Superoperator s = lind;
  s.matrix = hermitian_part(lind.matrix);
  s.selfadjoint_hs = true;
  return quantum_spectral_gap(s, zero_tol);
}

/// Residual of u(g)^dagger T_t(x) u(g) = sum_h P_t(g, h) u(h)^dagger x u(h).
class FactorizationCheck {
public:
  FactorizationCheck(const ProjectiveRep& rep, const ClassicalGenerator& gen, double t)
      : rep_(&rep),
        channel_(QuantumPropagator(transferred_lindbladian(rep, gen)).channel(t)),
        p_(KernelPropagator(gen).transition(t)) {}

  double residual(const CMat& x, std::size_t g) const {
    const CMat lhs = co_representation(*rep_, channel_.apply(x), g);
    CMat rhs = CMat::Zero(x.rows(), x.cols());
    for (std::size_t h = 0; h < rep_->group.order; ++h) {
      if (p_(g, h) == 0.0) continue;
      rhs += p_(g, h) * co_representation(*rep_, x, h);
    }
    return op_norm(lhs - rhs);
  }

private:
  const ProjectiveRep* rep_;
  Superoperator channel_;
  RMat p_;
};

inline double check_factorization(const ProjectiveRep& rep, const ClassicalGenerator& gen, double t,
                                  const CMat& x, std::size_t g) {
  if (g >= rep.group.order) throw std::invalid_argument("check_factorization: element out of range");
  return FactorizationCheck(rep, gen, t).residual(x, g);
}

/// ||T_t^dagger(rho) - E_fix^dagger(rho)||_1.
inline double trace_distance_to_fix(const Superoperator& channel, const Superoperator& efix, const CMat& rho) {
  return trace_norm(channel.apply_adjoint(rho) - efix.apply_adjoint(rho));
}

inline double trace_distance_to_fix(const Superoperator& lind, const ProjectiveRep& rep, double t, const CMat& rho) {
  check_density(rho, "trace_distance_to_fix");
  if (rho.rows() != static_cast<Eigen::Index>(lind.dim) || rep.dim != lind.dim)
    throw std::invalid_argument("trace_distance_to_fix: dimension mismatch");
  return trace_distance_to_fix(QuantumPropagator(lind).channel(t), conditional_expectation(rep), rho);
}

/// First t with ||T_t^dagger(rho) - E^dagger(rho)||_1 <= eps for one state.
inline double decoherence_time_for(const QuantumPropagator& prop, const Superoperator& efix, const CMat& rho,
                                   double eps, double t_scale = 1.0) {
  auto f = [&](double t) { return trace_distance_to_fix(prop.channel(t), efix, rho); };
  return first_passage_time(f, eps, t_scale);
}

struct UcInputs {
  double C = 1;
  double lambda = 1;
  double p = 1;
  double q = kInf;
};

struct DecoInputs {
  const ClassicalGenerator* gen = nullptr;
  std::optional<double> lambda;   // spectral gap for the Poincare route
  std::optional<double> x_norm2;  // ||x||_2 budget for the Poincare route
  std::optional<UcInputs> uc;
};

struct DecoBounds {
  std::optional<double> via_mixing;
  std::optional<double> via_gap;
  std::optional<double> via_uc;
};

/// 1 + (1/lambda)(ln C + ln(1/eps)/(1/p - 1/q)).
inline double uc_time_bound(const UcInputs& uc, double eps) {
  if (!(uc.lambda > 0) || !(uc.C > 0) || !(eps > 0)) throw std::domain_error("uc_time_bound: positive inputs required");
  const double r = 1.0 / uc.p - (std::isinf(uc.q) ? 0.0 : 1.0 / uc.q);
  if (!(r > 0)) throw std::domain_error("uc_time_bound: p < q required");
  return 1.0 + (std::log(uc.C) + std::log(1.0 / eps) / r) / uc.lambda;
}

inline DecoBounds deco_bounds(const DecoInputs& in, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("deco_bounds: eps must be positive");
  if (!in.gen && !in.lambda && !in.uc) throw std::invalid_argument("deco_bounds: no inputs supplied");
  DecoBounds out;
  if (in.gen) out.via_mixing = mixing_time(*in.gen, eps);
  if (in.lambda) {
    if (!in.x_norm2) throw std::invalid_argument("deco_bounds: gap route needs an L2 budget");
    if (!(*in.lambda > 0)) throw std::domain_error("deco_bounds: gap must be positive");
    out.via_gap = std::max(0.0, std::log(*in.x_norm2 / eps) / *in.lambda);
  }
  if (in.uc) out.via_uc = uc_time_bound(*in.uc, eps);
  return out;
}

// ---- Monte Carlo unravelling -----------------------------------------------

/// Counter-based SplitMix64 stream.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t state) : s_(state) {}
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t next() {
    s_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in (0, 1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  static SplitMix64 for_trajectory(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed ^ mix(index + 1)));
  }

private:
  std::uint64_t s_;
};

/// Final group element of one jump trajectory started at the identity.
inline std::size_t simulate_walk(const ClassicalGenerator& gen, double t, SplitMix64& rng) {
  const double total = gen.total_rate();
  std::size_t g = gen.group.identity;
  if (total <= 0) return g;
  double s = 0;
  while (true) {
    s += -std::log(rng.uniform()) / total;
    if (s > t) return g;
    double target = rng.uniform() * total, acc = 0;
    std::size_t pick = gen.order();
    for (std::size_t h = 0; h < gen.order(); ++h) {
      if (gen.rates[h] <= 0) continue;
      acc += gen.rates[h];
      pick = h;
      if (target < acc) break;
    }
    g = gen.group.op(pick, g);
  }
}

struct MonteCarloEstimate {
  CMat mean;
  RMat stderr_;  // entrywise standard error of the complex mean
  std::vector<std::uint64_t> counts;  // trajectories ending at each element
};

/// Averages u(g_t)^dagger x u(g_t) over n_samples jump trajectories. Samples
/// are tallied by endpoint, so the result does not depend on evaluation order.
inline MonteCarloEstimate monte_carlo_unravel(const ProjectiveRep& rep, const ClassicalGenerator& gen, double t,
                                              const CMat& x, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("monte_carlo_unravel: n_samples must be positive");
  if (!(rep.group == gen.group)) throw std::invalid_argument("monte_carlo_unravel: group mismatch");
  require_time(t);
  for (double c : gen.rates)
    if (!std::isfinite(c)) throw std::invalid_argument("monte_carlo_unravel: rates must be finite");
  MonteCarloEstimate out;
  out.counts.assign(gen.order(), 0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    SplitMix64 rng = SplitMix64::for_trajectory(seed, i);
    ++out.counts[simulate_walk(gen, t, rng)];
  }
  const double n = static_cast<double>(n_samples);
  const Eigen::Index d = x.rows();
  out.mean = CMat::Zero(d, x.cols());
  std::vector<CMat> samples(gen.order());
  for (std::size_t g = 0; g < gen.order(); ++g) {
    if (out.counts[g] == 0) continue;
    samples[g] = co_representation(rep, x, g);
    out.mean += (static_cast<double>(out.counts[g]) / n) * samples[g];
  }
  RMat var = RMat::Zero(d, x.cols());
  for (std::size_t g = 0; g < gen.order(); ++g) {
    if (out.counts[g] == 0) continue;
    var += static_cast<double>(out.counts[g]) * (samples[g] - out.mean).cwiseAbs2();
  }
  const double denom = n > 1 ? (n - 1) * n : 1.0;
  out.stderr_ = (var / denom).cwiseSqrt();
  return out;
}

}  // namespace tqms

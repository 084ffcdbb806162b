#pragma once

// Right-invariant Markov semigroups S_t = e^{-tL} on finite groups.
//
//   (L f)(g) = sum_h c_h [f(g) - f(hg)],   k_t(g) = |G| e^{-tL}(g, e).
//
// Norms of k_t - 1 are taken in L_p of the normalized counting measure.

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqms/group.hpp"
#include "tqms/linalg.hpp"

namespace tqms {

inline std::size_t max_generator_order = 256;

struct ClassicalGenerator {
  FiniteGroup group;
  std::vector<double> rates;  // c_g, zero at the identity
  RMat matrix;
  bool reversible = true;

  std::size_t order() const { return group.order; }
  double total_rate() const {
    double s = 0;
    for (double c : rates) s += c;
    return s;
  }
};

/// Rates are indexed by element; the identity entry is ignored.
inline ClassicalGenerator build_generator(const FiniteGroup& group, std::vector<double> rates) {
  const std::size_t n = group.order;
  if (rates.size() != n) throw std::invalid_argument("build_generator: one rate per element");
  if (n > max_generator_order) throw resource_limit_error("build_generator: group order exceeds cap");
  for (double c : rates)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("build_generator: rates must be finite and nonnegative");
  rates[group.identity] = 0.0;

  ClassicalGenerator gen;
  gen.group = group;
  gen.matrix = RMat::Zero(n, n);
  for (std::size_t h = 0; h < n; ++h) {
    const double c = rates[h];
    if (c == 0.0) continue;
    for (std::size_t g = 0; g < n; ++g) {
      gen.matrix(g, g) += c;
      gen.matrix(g, group.op(h, g)) -= c;
    }
  }
  double scale = 0;
  for (double c : rates) scale = std::max(scale, c);
  gen.reversible = true;
  for (std::size_t h = 0; h < n; ++h)
    if (std::abs(rates[h] - rates[group.inv[h]]) > 1e-14 * std::max(1.0, scale))
      gen.reversible = false;
  gen.rates = std::move(rates);
  return gen;
}

// ---- standard chains --------------------------------------------------------

/// Uniform walk: rate 1/|G| to every other element, L = I - J/|G|.
inline ClassicalGenerator uniform_walk(const FiniteGroup& g) {
  return build_generator(g, std::vector<double>(g.order, 1.0 / static_cast<double>(g.order)));
}

inline ClassicalGenerator complete_chain(std::size_t m) { return uniform_walk(make_cyclic(m)); }

/// Z_2^n, jumps along each coordinate at rate 1/(n+1).
inline ClassicalGenerator hypercube_chain(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hypercube_chain: n must be positive");
  if (n > 8) throw resource_limit_error("hypercube_chain: n exceeds cap");
  const FiniteGroup g = make_power(make_cyclic(2), n);
  std::vector<double> rates(g.order, 0.0);
  for (std::size_t i = 0; i < n; ++i) rates[std::size_t{1} << i] = 1.0 / static_cast<double>(n + 1);
  return build_generator(g, rates);
}

/// Simple walk on Z_m, steps +-1 with rate 1/2 each.
inline ClassicalGenerator circle_chain(std::size_t m) {
  if (m < 3) throw std::invalid_argument("circle_chain: m >= 3 required");
  const FiniteGroup g = make_cyclic(m);
  std::vector<double> rates(m, 0.0);
  rates[1] = 0.5;
  rates[m - 1] = 0.5;
  return build_generator(g, rates);
}

/// Random transpositions on S_n, rate 2/(n(n-1)) per transposition.
inline ClassicalGenerator transposition_chain(std::size_t n) {
  if (n < 2) throw std::invalid_argument("transposition_chain: n >= 2 required");
  const FiniteGroup g = make_symmetric(n);
  std::vector<double> rates(g.order, 0.0);
  const double c = 2.0 / static_cast<double>(n * (n - 1));
  for (std::size_t k : transpositions(n)) rates[k] = c;
  return build_generator(g, rates);
}

// ---- kernels ---------------------------------------------------------------

struct KernelSlice {
  double t = 0;
  RVec values;  // k_t(g), g = 0..|G|-1
};

inline void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be finite and nonnegative");
}

inline RMat transition_at(const ClassicalGenerator& gen, double t) {
  require_time(t);
  return expm(RMat(-t * gen.matrix));
}

inline KernelSlice kernel_at(const ClassicalGenerator& gen, double t) {
  const RMat p = transition_at(gen, t);
  return {t, static_cast<double>(gen.order()) * p.col(gen.group.identity)};
}

/// Reuses one eigendecomposition when L is symmetric; otherwise one
/// exponential per query.
class KernelPropagator {
public:
  explicit KernelPropagator(const ClassicalGenerator& gen) : gen_(&gen) {
    if (gen.reversible) {
      Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (gen.matrix + gen.matrix.transpose()));
      if (es.info() != Eigen::Success) throw numerical_error("KernelPropagator: eigensolver failed");
      vecs_ = es.eigenvectors();
      vals_ = es.eigenvalues();
      row_e_ = vecs_.row(gen.group.identity).transpose();
    }
  }

  bool spectral() const { return vals_.size() > 0; }

  KernelSlice kernel(double t) const {
    require_time(t);
    if (!spectral()) return kernel_at(*gen_, t);
    RVec w = (-t * vals_).array().exp().matrix().cwiseProduct(row_e_);
    return {t, static_cast<double>(gen_->order()) * (vecs_ * w)};
  }

  RMat transition(double t) const {
    require_time(t);
    if (!spectral()) return transition_at(*gen_, t);
    RVec w = (-t * vals_).array().exp();
    return vecs_ * w.asDiagonal() * vecs_.transpose();
  }

private:
  const ClassicalGenerator* gen_;
  RMat vecs_;
  RVec vals_;
  RVec row_e_;
};

/// ||k - 1||_p over the normalized counting measure; p = kInf allowed.
inline double kernel_norm(const KernelSlice& k, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("kernel_norm: p >= 1 required");
  const RVec d = (k.values.array() - 1.0).abs();
  if (std::isinf(p)) return d.maxCoeff();
  const double n = static_cast<double>(d.size());
  if (p == 1.0) return d.sum() / n;
  if (p == 2.0) return std::sqrt(d.squaredNorm() / n);
  return std::pow(d.array().pow(p).sum() / n, 1.0 / p);
}

inline double kernel_norm(const ClassicalGenerator& gen, double t, double p) {
  return kernel_norm(kernel_at(gen, t), p);
}

/// ||k||_p (not centred), used by the Renyi comparison.
inline double kernel_lp(const KernelSlice& k, double p) {
  const RVec a = k.values.cwiseAbs();
  if (std::isinf(p)) return a.maxCoeff();
  return std::pow(a.array().pow(p).sum() / static_cast<double>(a.size()), 1.0 / p);
}

/// sup_g |k_t(g)| = ||S_t : L_1 -> L_inf||.
inline double kernel_sup(const KernelSlice& k) { return k.values.cwiseAbs().maxCoeff(); }

/// int k log k dmu.
inline double kernel_entropy(const KernelSlice& k) {
  double s = 0;
  for (Eigen::Index i = 0; i < k.values.size(); ++i) {
    const double v = k.values(i);
    if (v > 0) s += v * std::log(v);
  }
  return s / static_cast<double>(k.values.size());
}

/// (a * b)(g) = (1/|G|) sum_x a(g x^-1) b(x), so k_t * k_s = k_{t+s}.
inline RVec convolve(const FiniteGroup& g, const RVec& a, const RVec& b) {
  const std::size_t n = g.order;
  RVec out = RVec::Zero(n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t xi = g.inv[x];
    for (std::size_t y = 0; y < n; ++y) out(y) += a(g.op(y, xi)) * b(x);
  }
  return out / static_cast<double>(n);
}

// ---- spectral data -----------------------------------------------------------

inline double zero_eigen_threshold = 1e-10;

struct GapReport {
  double gap = 0;
  bool symmetrized = false;  // computed from (L + L^T)/2
};

inline GapReport spectral_gap_report(const ClassicalGenerator& gen,
                                     double zero_tol = zero_eigen_threshold) {
  const RMat s = 0.5 * (gen.matrix + gen.matrix.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numerical_error("spectral_gap: eigensolver failed");
  GapReport r;
  r.symmetrized = !gen.reversible;
  r.gap = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > zero_tol) {
      r.gap = v;
      break;
    }
  }
  return r;
}

inline double spectral_gap(const ClassicalGenerator& gen) { return spectral_gap_report(gen).gap; }

/// Every element reachable from the identity through positive-rate jumps.
inline bool is_primitive(const ClassicalGenerator& gen) {
  const std::size_t n = gen.order();
  std::vector<char> seen(n, 0);
  std::deque<std::size_t> queue{gen.group.identity};
  seen[gen.group.identity] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    const std::size_t g = queue.front();
    queue.pop_front();
    for (std::size_t h = 0; h < n; ++h) {
      if (gen.rates[h] <= 0) continue;
      const std::size_t x = gen.group.op(h, g);
      if (!seen[x]) {
        seen[x] = 1;
        ++count;
        queue.push_back(x);
      }
    }
  }
  return count == n;
}

/// Smallest t with f(t) <= eps, assuming f eventually stays below eps.
/// Brackets by doubling, takes the last crossing on a 64-point grid, then
/// bisects 60 times.
template <class F>
double first_passage_time(F&& f, double eps, double t_scale) {
  if (f(0.0) <= eps) return 0.0;
  double hi = std::max(t_scale, 1e-3);
  while (f(hi) > eps) {
    hi *= 2;
    if (hi > 1e8) throw numerical_error("first_passage_time: no crossing below t = 1e8");
  }
  constexpr int kGrid = 64;
  double lo = 0.0;
  for (int i = kGrid - 1; i >= 0; --i) {
    const double ti = hi * i / kGrid;
    if (f(ti) > eps) {
      lo = ti;
      hi = hi * (i + 1) / kGrid;
      break;
    }
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > eps ? lo : hi) = mid;
  }
  return hi;
}

namespace detail {
inline double threshold_time(const ClassicalGenerator& gen, double eps, double p, const char* who) {
  if (!(eps > 0)) throw std::invalid_argument(std::string(who) + ": eps must be positive");
  if (!is_primitive(gen)) throw std::domain_error(std::string(who) + ": chain is not primitive");
  const KernelPropagator prop(gen);
  const double gap = spectral_gap(gen);
  auto f = [&](double t) { return kernel_norm(prop.kernel(t), p); };
  return first_passage_time(f, eps, gap > 0 ? 1.0 / gap : 1.0);
}
}  // namespace detail

/// inf{t : ||k_t - 1||_1 <= eps}.
inline double mixing_time(const ClassicalGenerator& gen, double eps) {
  return detail::threshold_time(gen, eps, 1.0, "mixing_time");
}

/// t(eps) = inf{t : ||k_t - 1||_inf <= eps}.
inline double t_eps(const ClassicalGenerator& gen, double eps) {
  return detail::threshold_time(gen, eps, kInf, "t_eps");
}

// ---- constants and closed-form bounds ----------------------------------------

enum class NamedChain { hypercube, circle, complete, transpositions };

struct NamedConstants {
  double gap = 0;
  std::optional<double> logsob_c;  // empty when not known in closed form
  std::string source;
};

inline NamedConstants named_constants(NamedChain chain, std::size_t param) {
  const double x = static_cast<double>(param);
  switch (chain) {
    case NamedChain::hypercube:
      if (param < 2) throw std::domain_error("hypercube: n >= 2 required");
      return {1.0 / (x + 1.0), x + 1.0, "hypercube Z_2^n, 1/c = gap = 1/(n+1)"};
    case NamedChain::circle:
      if (param < 4) throw std::domain_error("circle: m >= 4 required");
      return {1.0 - std::cos(2.0 * M_PI / x), std::nullopt, "circle Z_m, log-Sobolev constant unavailable"};
    case NamedChain::complete:
      if (param < 4) throw std::domain_error("complete: m >= 4 required");
      return {1.0 - 1.0 / x, std::log(x - 1.0) / (2.0 - 4.0 / x), "complete graph, c = log(m-1)/(2-4/m)"};
    case NamedChain::transpositions:
      if (param < 3) throw std::domain_error("transpositions: n >= 3 required");
      return {2.0 / (x - 1.0), std::nullopt, "random transpositions, log-Sobolev constant unavailable"};
  }
  throw std::invalid_argument("named_constants: unknown chain");
}

enum class LieGroup { torus1, torus_n, semisimple };

/// Upper bounds on sup_g ||k_t(g .^-1) - 1||_2 for heat kernels.
inline double lie_group_bound(LieGroup kind, double t, std::size_t n = 1) {
  if (!(t > 0)) throw std::domain_error("lie_group_bound: t > 0 required");
  const double x = static_cast<double>(n);
  switch (kind) {
    case LieGroup::torus1:
      return std::sqrt(2.0 + std::sqrt(M_PI / (2.0 * t))) * std::exp(-t);
    case LieGroup::torus_n:
      if (n < 2) throw std::domain_error("torus_n: n > 1 required");
      return std::exp(-t + 0.5 * std::log(0.5 * x * std::log(x)) + 6.0);
    case LieGroup::semisimple: {
      if (n < 3) throw std::domain_error("semisimple: n >= 3 required");
      const double lam = x / (8.0 * (x - 1.0));
      return std::exp(1.0 + lam * (-t + 16.0 / x + 2.0 * std::log(1.0 + 0.5 * x * std::log(x / 4.0))));
    }
  }
  throw std::invalid_argument("lie_group_bound: unknown kind");
}

struct UcCertificate {
  double C = 0;
  bool holds = true;
  std::vector<double> times;
};

/// C = max over 64 log-spaced t in [t0/1000, t0] of sup_g k_t(g) t^{alpha/2}.
inline UcCertificate uc_certificate(const ClassicalGenerator& gen, double t0, double alpha,
                                    int points = 64) {
  if (!(t0 > 0) || !(alpha >= 0)) throw std::domain_error("uc_certificate: t0 > 0, alpha >= 0");
  if (!is_primitive(gen)) throw std::domain_error("uc_certificate: chain is not primitive");
  const KernelPropagator prop(gen);
  UcCertificate out;
  const double a = std::log(t0 * 1e-3), b = std::log(t0);
  for (int i = 0; i < points; ++i) {
    const double t = std::exp(points == 1 ? b : a + (b - a) * i / (points - 1));
    out.times.push_back(t);
    out.C = std::max(out.C, kernel_sup(prop.kernel(t)) * std::pow(t, alpha / 2.0));
  }
  return out;
}

/// (1/lambda)(lambda t0 + ln M + 1).
inline double hc_transfer_constant(double lambda, double t0, double M) {
  if (!(lambda > 0)) throw std::domain_error("hc_transfer_constant: lambda > 0 required");
  if (!(M > 0)) throw std::domain_error("hc_transfer_constant: M > 0 required");
  return (lambda * t0 + std::log(M) + 1.0) / lambda;
}

/// c' <= 2/lambda + (c/2) ln ln |G|.
inline double logsob_transfer(double c, double lambda, std::size_t order) {
  if (!(lambda > 0)) throw std::domain_error("logsob_transfer: lambda > 0 required");
  if (order < 2) throw std::domain_error("logsob_transfer: |G| >= 2 required");
  return 2.0 / lambda + 0.5 * c * std::log(std::log(static_cast<double>(order)));
}

/// Time (c/2) ln ln |G| + gamma/lambda at which ||k_t - 1||_2 <= e^{1-gamma}.
inline double kernel_estimate_time(double c, double lambda, std::size_t order, double gamma) {
  if (order <= 3) throw std::domain_error("kernel estimate: |G| > 3 required");
  if (!(lambda > 0) || !(gamma > 0)) throw std::domain_error("kernel estimate: lambda, gamma > 0");
  return 0.5 * c * std::log(std::log(static_cast<double>(order))) + gamma / lambda;
}

inline double kernel_estimate_bound(double gamma) { return std::exp(1.0 - gamma); }

/// Mixing-time bound for the uniform walk on m points:
/// m(1 - ln eps)/(m-1) + m ln(m-1)/(2(m-2)) ln ln m.
inline double uniform_walk_mixing_bound(std::size_t m, double eps) {
  if (m < 3) throw std::domain_error("uniform_walk_mixing_bound: m >= 3 required");
  if (!(eps > 0)) throw std::invalid_argument("uniform_walk_mixing_bound: eps > 0");
  const double x = static_cast<double>(m);
  return x * (1.0 - std::log(eps)) / (x - 1.0) +
         x * std::log(x - 1.0) / (2.0 * (x - 2.0)) * std::log(std::log(x));
}

}  // namespace tqms

#pragma once

// Property suites over the example channels. Each check reports a slack
// (>= 0 means the property holds) rather than a bare boolean.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqms/capacities.hpp"
#include "tqms/entropic.hpp"

namespace tqms {

struct CheckRecord {
  std::string suite;
  std::string name;
  bool passed = false;
  double slack = 0;
  std::string detail;
};

struct ExampleSetup {
  std::string name;
  ProjectiveRep rep;
  ClassicalGenerator gen;
};

/// Representations paired with the walks that transfer to the paper's examples.
inline std::vector<ExampleSetup> example_setups() {
  std::vector<ExampleSetup> out;
  for (std::size_t n : {2, 3}) {
    auto rep = weyl_rep(n);
    out.push_back({"depolarizing(" + std::to_string(n) + ")", rep, uniform_walk(rep.group)});
  }
  for (std::size_t n : {2, 3, 4}) {
    auto rep = char_rep(n);
    out.push_back({"dephasing(" + std::to_string(n) + ")", rep, uniform_walk(rep.group)});
  }
  {
    auto rep = tensor_power(weyl_rep(2), 2);
    out.push_back({"collective_pauli(2)", rep, uniform_walk(rep.group)});
  }
  {
    auto rep = perm_rep(3, 2);
    out.push_back({"swap(3,2)", rep, transposition_chain(3)});
  }
  return out;
}

/// Symmetric random rates c_g = c_{g^-1}, about a quarter of them zero.
template <class Rng>
ClassicalGenerator random_reversible_generator(const FiniteGroup& g, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> rates(g.order, 0.0);
  for (std::size_t h = 0; h < g.order; ++h) {
    if (h == g.identity || g.inv[h] < h) continue;
    const double c = u(rng) < 0.25 ? 0.0 : u(rng);
    rates[h] = c;
    rates[g.inv[h]] = c;
  }
  return build_generator(g, rates);
}

/// Mixture of Haar-pure and Ginibre states.
template <class Rng>
CMat random_state(Eigen::Index d, Rng& rng, std::size_t i) {
  return i % 2 == 0 ? random_pure_state(d, rng) : random_density(d, rng);
}

class CheckLog {
public:
  explicit CheckLog(std::string suite) : suite_(std::move(suite)) {}

  void add(const std::string& name, double slack, const std::string& detail = "") {
    records_.push_back({suite_, name, slack >= 0.0 && !std::isnan(slack), slack, detail});
  }

  /// Keeps the minimum slack of a family of comparisons under one name.
  class Min {
  public:
    void operator()(double s) { value = std::min(value, std::isnan(s) ? -kInf : s); }
    double value = kInf;
  };

  std::vector<CheckRecord>& records() { return records_; }

private:
  std::string suite_;
  std::vector<CheckRecord> records_;
};

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

inline std::vector<CheckRecord> verify_transference(std::uint64_t seed) {
  CheckLog log("transference");
  std::mt19937_64 rng(seed);
  const auto setups = example_setups();

  // Exact generator identities.
  {
    CheckLog::Min m;
    for (std::size_t n = 2; n <= 5; ++n) {
      const auto rep = weyl_rep(n);
      const auto lind = transferred_lindbladian(rep, uniform_walk(rep.group));
      const CMat want = CMat::Identity(n * n, n * n) - vec(CMat::Identity(n, n)) * vec(CMat::Identity(n, n)).adjoint() / double(n);
      m(1e-10 - max_abs(lind.matrix - want));
    }
    log.add("depolarizing_identity", m.value, "L = id - Tr(.)I/n, n = 2..5");
  }
  {
    CheckLog::Min m;
    for (std::size_t n = 2; n <= 6; ++n) {
      const auto rep = char_rep(n);
      const auto lind = transferred_lindbladian(rep, uniform_walk(rep.group));
      CMat ediag = CMat::Zero(n * n, n * n);
      for (std::size_t j = 0; j < n; ++j) ediag(j * n + j, j * n + j) = 1.0;
      m(1e-10 - max_abs(lind.matrix - (CMat::Identity(n * n, n * n) - ediag)));
    }
    log.add("dephasing_identity", m.value, "L = id - E_diag, n = 2..6");
  }

  // Spectral gap transference over random reversible rates.
  {
    CheckLog::Min m;
    int count = 0;
    for (int round = 0; round < 4; ++round)
      for (const auto& s : setups) {
        const auto gen = random_reversible_generator(s.rep.group, rng);
        const double cl = spectral_gap(gen);
        const double q = quantum_spectral_gap(transferred_lindbladian(s.rep, gen));
        m(q - cl + 1e-8);
        ++count;
      }
    log.add("gap_transference", m.value, std::to_string(count) + " random reversible rate vectors");
  }
  {
    CheckLog::Min m;
    for (std::size_t n = 2; n <= 5; ++n) m(1e-8 - std::abs(quantum_spectral_gap(wcd_lindbladian(n)) - 2.0));
    log.add("wcd_gap_is_2", m.value, "n = 2..5");
  }

  // Factorization lemma.
  {
    CheckLog::Min m;
    for (const auto& s : setups)
      for (double t : {0.1, 1.0, 10.0}) {
        const FactorizationCheck fc(s.rep, s.gen, t);
        for (int k = 0; k < 10; ++k) {
          const CMat x = random_matrix(s.rep.dim, rng);
          for (std::size_t g = 0; g < s.rep.group.order; ++g) m(1e-9 - fc.residual(x, g));
        }
      }
    log.add("factorization", m.value, "all setups, all g, t in {0.1, 1, 10}");
  }

  // Trace-norm transference and kernel identities.
  {
    CheckLog::Min m, kid, semi, ds;
    for (const auto& s : setups) {
      const QuantumPropagator qp(transferred_lindbladian(s.rep, s.gen));
      const KernelPropagator kp(s.gen);
      const Superoperator e = conditional_expectation(s.rep);
      const std::size_t d = s.rep.dim;
      for (double t : {0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const Superoperator ch = qp.channel(t);
        const double l1 = kernel_norm(kp.kernel(t), 1.0);
        for (std::size_t i = 0; i < 100; ++i) {
          const CMat rho = random_state(d, rng, i);
          m(l1 + 1e-8 - trace_distance_to_fix(ch, e, rho));
        }
        if (s.gen.reversible) {
          const double n2 = kernel_norm(kp.kernel(t), 2.0);
          kid(1e-9 - std::abs(n2 * n2 - (kp.kernel(2 * t).values(s.gen.group.identity) - 1.0)));
        }
        const CMat mixed = CMat::Identity(d, d) / double(d);
        ds(1e-12 - max_abs(ch.apply_adjoint(mixed) - mixed));
        const RVec conv = convolve(s.gen.group, kernel_at(s.gen, t).values, kernel_at(s.gen, 0.5).values);
        semi(1e-9 - (conv - kernel_at(s.gen, t + 0.5).values).cwiseAbs().maxCoeff());
        semi(1e-9 - max_abs(qp.channel(t + 0.5).matrix - ch.matrix * qp.channel(0.5).matrix));
      }
    }
    log.add("trace_norm_transference", m.value, "100 states per setup per t");
    log.add("kernel_l2_identity", kid.value, "||k_t-1||_2^2 = k_2t(e) - 1");
    log.add("semigroup_property", semi.value, "classical convolution and channel composition");
    log.add("doubly_stochastic", ds.value, "T_t(I/d) = I/d");
  }

  // Decoherence times of random pure states never exceed the mixing time.
  {
    CheckLog::Min m;
    for (const auto& s : setups) {
      if (s.name.rfind("depolarizing", 0) != 0 && s.name.rfind("dephasing", 0) != 0) continue;
      const QuantumPropagator qp(transferred_lindbladian(s.rep, s.gen));
      const Superoperator e = conditional_expectation(s.rep);
      for (double eps : {0.5, 0.1, 0.01}) {
        const double tmix = mixing_time(s.gen, eps);
        double worst = 0;
        for (int i = 0; i < 200; ++i)
          worst = std::max(worst, decoherence_time_for(qp, e, random_pure_state(s.rep.dim, rng), eps, tmix));
        m(tmix + 1e-9 - worst);
      }
    }
    log.add("decoherence_below_mixing_time", m.value, "max over 200 pure states, eps in {0.5, 0.1, 0.01}");
  }

  // Kernel estimate from the log-Sobolev constant on the complete graph.
  {
    CheckLog::Min m;
    for (std::size_t mm : {5, 9, 16}) {
      const auto nc = named_constants(NamedChain::complete, mm);
      const auto gen = complete_chain(mm);
      for (double gamma : {1.0, 2.0, 4.0}) {
        const double t = kernel_estimate_time(*nc.logsob_c, nc.gap, mm, gamma);
        m(kernel_estimate_bound(gamma) - kernel_norm(gen, t, 2.0));
      }
    }
    log.add("kernel_estimate_complete_graph", m.value, "||k_t-1||_2 <= e^(1-gamma), m in {5,9,16}");
  }
  return log.records();
}

inline std::vector<CheckRecord> verify_entropy(std::uint64_t seed) {
  CheckLog log("entropy");
  std::mt19937_64 rng(seed);
  const auto setups = example_setups();

  {
    CheckLog::Min m;
    for (const auto& s : setups) {
      const Superoperator e = conditional_expectation(s.rep);
      const KernelPropagator kp(s.gen);
      for (double t : {0.1, 0.5, 2.0}) {
        const KernelSlice k = kp.kernel(t);
        for (std::size_t i = 0; i < 100; ++i) {
          const CMat rho = random_state(s.rep.dim, rng, i);
          const CMat sigma = e.apply_adjoint(random_density(s.rep.dim, rng));
          m(entropy_comparison_check(s.rep, k, rho, sigma).slack + 1e-8);
        }
      }
    }
    log.add("entropy_comparison", m.value, "D(Phi_k rho||sigma) <= D(E rho||sigma) + int k log k");
  }

  {
    CheckLog::Min lo, hi, gap, klogk;
    for (const auto& s : setups) {
      const Superoperator e = conditional_expectation(s.rep);
      for (double eps : {1.0, 0.1}) {
        const double t = t_eps(s.gen, eps);
        const KernelSlice k = kernel_at(s.gen, t);
        klogk(std::log1p(eps) + 1e-8 - kernel_entropy(k));
        for (double p : {1.0, 1.5, 2.0, kInf})
          for (std::size_t i = 0; i < 20; ++i) {
            const CMat rho = random_state(s.rep.dim, rng, i);
            const CMat sigma = e.apply_adjoint(random_density(s.rep.dim, rng));
            const auto c = entropy_comparison_check(s.rep, k, rho, sigma, p);
            lo(c.lower_slack + 1e-8);
            hi(c.slack + 1e-8);
            gap(std::log1p(eps) + 1e-8 - c.kernel_term);
          }
      }
    }
    log.add("renyi_lower", lo.value, "D_p(T rho||sigma) >= D_p(E rho||sigma), p in {1,1.5,2,inf}");
    log.add("renyi_upper", hi.value, "D_p(T rho||sigma) <= D_p(E rho||sigma) + p/(p-1) log||k||_p");
    log.add("renyi_gap_log1p_eps", gap.value, "upper gap <= log(1+eps) at t(eps)");
    log.add("kernel_entropy_log1p_eps", klogk.value, "int k log k <= log(1+eps) at t(eps)");
  }

  {
    CheckLog::Min dp, pin;
    for (const auto& s : setups) {
      const Superoperator e = conditional_expectation(s.rep);
      for (std::size_t i = 0; i < 50; ++i) {
        const CMat rho = random_density(s.rep.dim, rng), sigma = random_density(s.rep.dim, rng);
        const double d = relative_entropy(rho, sigma);
        dp(d - relative_entropy(e.apply_adjoint(rho), e.apply_adjoint(sigma)) + 1e-8);
        const double tn = trace_norm(rho - sigma);
        pin(2 * d - tn * tn + 1e-12);
      }
    }
    log.add("data_processing", dp.value, "D(E rho||E sigma) <= D(rho||sigma)");
    log.add("pinsker", pin.value, "||rho-sigma||_1^2 <= 2 D(rho||sigma)");
  }

  {
    CheckLog::Min m;
    for (const auto& s : setups) {
      const QuantumPropagator qp(transferred_lindbladian(s.rep, s.gen));
      const Superoperator e = conditional_expectation(s.rep);
      for (double eps : {0.5, 0.1, 0.01}) {
        const Superoperator ch = qp.channel(mixing_time(s.gen, eps));
        for (std::size_t i = 0; i < 50; ++i) m(eps + 1e-8 - d_nfix(ch.apply_adjoint(random_state(s.rep.dim, rng, i)), e));
      }
    }
    log.add("entropic_decay_at_mixing_time", m.value, "D_N(T_t rho) <= eps at t_mix(eps)");
  }
  return log.records();
}

inline std::vector<CheckRecord> verify_capacities(std::uint64_t seed) {
  CheckLog log("capacities");
  std::mt19937_64 rng(seed);

  {
    CheckLog::Min m;
    for (std::size_t n : {2, 3, 4}) {
      const auto rep = char_rep(n);
      const auto gen = uniform_walk(rep.group);
      const auto dec = block_decomposition(rep, seed);
      const KernelPropagator kp(gen);
      for (int i = 0; i < 64; ++i) {
        const double t = 10.0 * i / 63.0;
        const auto r = capacity_sandwich(dec, kernel_norm(kp.kernel(t), kInf), t);
        m(r.Q2way.upper - reference_exact(ReferenceKind::dephasing_2way, n, t) + 1e-8);
      }
    }
    log.add("dephasing_two_way_sandwich", m.value, "exact Q<-> below sandwich upper bound, 64 times");
  }
  {
    CheckLog::Min m;
    for (std::size_t n : {2, 3}) {
      const auto rep = weyl_rep(n);
      const auto gen = uniform_walk(rep.group);
      const auto dec = block_decomposition(rep, seed);
      const KernelPropagator kp(gen);
      for (int i = 0; i < 64; ++i) {
        const double t = 10.0 * i / 63.0;
        const auto r = capacity_sandwich(dec, kernel_norm(kp.kernel(t), kInf), t);
        m(r.Q2way.upper - reference_exact(ReferenceKind::depolarizing_2way, n, t) + 1e-8);
      }
    }
    log.add("depolarizing_two_way_reference", m.value, "reference below sandwich upper bound");
  }
  {
    CheckLog::Min m;
    struct Want {
      ProjectiveRep rep;
      double q, c, cea;
    };
    const std::vector<Want> wants = {
        {weyl_rep(2), 0.0, 0.0, 0.0},
        {weyl_rep(3), 0.0, 0.0, 0.0},
        {char_rep(3), 0.0, std::log(3.0), std::log(3.0)},
        {char_rep(4), 0.0, std::log(4.0), std::log(4.0)},
        {perm_rep(2, 2), std::log(3.0), std::log(4.0), std::log(10.0)},
        {perm_rep(3, 2), std::log(4.0), std::log(6.0), std::log(20.0)},
    };
    for (const auto& w : wants) {
      const auto r = capacity_sandwich(block_decomposition(w.rep, seed), 0.0, kInf);
      m(1e-12 - std::max({std::abs(r.Q.lower - w.q), std::abs(r.C.lower - w.c), std::abs(r.C_EA.lower - w.cea),
                          std::abs(r.Q.upper - r.Q.lower)}));
    }
    log.add("limiting_values", m.value, "max log n_k, log sum n_k, log sum n_k^2");
  }
  {
    CheckLog::Min order, mono, range;
    for (const auto& s : example_setups()) {
      const auto dec = block_decomposition(s.rep, seed);
      const KernelPropagator kp(s.gen);
      const double cap = 2.0 * std::log(double(s.rep.dim));
      CapacityReport prev;
      for (int i = 0; i < 32; ++i) {
        const double t = 8.0 * i / 31.0;
        const auto r = capacity_sandwich(dec, kernel_norm(kp.kernel(t), kInf), t);
        for (const auto* f : {&r.Q, &r.P, &r.Q2way, &r.P2way, &r.C, &r.C_EA}) {
          order(f->upper - f->lower);
          order(std::log1p(r.eps) + 1e-12 - (f->upper - f->lower));
          range(std::min(f->lower, cap - f->upper));
        }
        order(r.P.lower - r.Q.lower);
        order(r.P2way.lower - r.P.lower);
        order(r.P.upper - r.Q.upper);
        order(r.P2way.upper - r.P.upper);
        if (i > 0)
          for (auto [a, b] : {std::pair{&prev.Q, &r.Q}, {&prev.C, &r.C}, {&prev.C_EA, &r.C_EA}})
            mono(a->upper - b->upper + 1e-12);
        prev = r;
      }
    }
    log.add("sandwich_ordering", order.value, "lower <= upper <= lower + log(1+eps), Q <= P <= P2way");
    log.add("upper_monotone_in_t", mono.value, "upper bounds nonincreasing");
    log.add("capacity_range", range.value, "0 <= value <= log d^2");
  }
  {
    const auto rep = weyl_rep(2);
    const auto gen = uniform_walk(rep.group);
    const auto lind = transferred_lindbladian(rep, gen);
    const auto ppt = ppt_eb_report(lind, rep);
    log.add("ppt_qubit_depolarizing", 1e-6 - std::abs(ppt.time - std::log(3.0)),
            "t_PPT = " + fmt(ppt.time) + " vs ln 3");
    const double eb = eb_time_bound(rep, gen);
    log.add("eb_bound_dominates_ppt", eb - ppt.time, "t(1/2) = " + fmt(eb));
    const auto crep = char_rep(2);
    const auto deph = transferred_lindbladian(crep, uniform_walk(crep.group));
    const double tp = ppt_eb_time(deph, crep);
    log.add("dephasing_never_ppt", std::isinf(tp) ? 0.0 : -1.0, "t_PPT = " + fmt(tp));
    bool threw = false;
    try {
      eb_time_bound(crep, uniform_walk(crep.group));
    } catch (const std::domain_error&) {
      threw = true;
    }
    log.add("dephasing_eb_bound_rejected", threw ? 0.0 : -1.0, "non-primitive semigroup");
    const auto q3 = weyl_rep(3);
    const auto g3 = uniform_walk(q3.group);
    const double t3 = ppt_eb_time(transferred_lindbladian(q3, g3), q3);
    log.add("ppt_below_eb_bound_qutrit", eb_time_bound(q3, g3) - t3, "PPT time is a lower bound on t_EB");
  }
  {
    CheckLog::Min m;
    for (std::size_t n : {2, 3}) {
      const auto rep = weyl_rep(n);
      const auto dec = block_decomposition(rep, seed);
      const auto lind = transferred_lindbladian(rep, uniform_walk(rep.group));
      for (double t : {0.0, 0.5, 1.0, 3.0}) {
        const auto b = mlsi_capacity_bounds(dec, 1.0, lind, rep, t);
        m(1e-12 - std::abs(b.QP_bound - 2.0 * std::exp(-t) * std::log(double(n))));
        m(b.alpha_c.value_or(0.0) - 1.0);
        m(b.QP_bound - reference_exact(ReferenceKind::depolarizing_2way, n, t) + 1e-8);
      }
    }
    log.add("mlsi_depolarizing", m.value, "Q <= 2 e^-t log n, alpha_c = 1 for id - E");
  }
  (void)rng;
  return log.records();
}

inline std::vector<CheckRecord> verify_montecarlo(std::uint64_t seed) {
  CheckLog log("montecarlo");
  struct Case {
    std::string name;
    ProjectiveRep rep;
    CMat x;
  };
  const std::vector<Case> cases = {{"dephasing_sigma_x", char_rep(2), pauli_x()},
                                   {"depolarizing_sigma_z", weyl_rep(2), pauli_z()}};
  for (const auto& c : cases) {
    const auto gen = uniform_walk(c.rep.group);
    const auto ch = QuantumPropagator(transferred_lindbladian(c.rep, gen)).channel(1.0);
    const CMat exact = ch.apply(c.x);
    const auto est = monte_carlo_unravel(c.rep, gen, 1.0, c.x, 10000, seed);
    double slack = kInf;
    for (Eigen::Index i = 0; i < exact.rows(); ++i)
      for (Eigen::Index j = 0; j < exact.cols(); ++j)
        slack = std::min(slack, 4.0 * est.stderr_(i, j) + 1e-12 - std::abs(est.mean(i, j) - exact(i, j)));
    log.add(c.name, slack, "10^4 trajectories within 4 standard errors at t = 1");
    const auto again = monte_carlo_unravel(c.rep, gen, 1.0, c.x, 10000, seed);
    log.add(c.name + "_deterministic", again.mean == est.mean ? 0.0 : -1.0, "identical rerun");
    const auto zero = monte_carlo_unravel(c.rep, gen, 0.0, c.x, 100, seed);
    log.add(c.name + "_t0_exact", 0.0 - max_abs(zero.mean - c.x), "no jumps at t = 0");
  }
  return log.records();
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"transference", "entropy", "capacities", "montecarlo"};
  return names;
}

inline std::vector<CheckRecord> run_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "transference") return verify_transference(seed);
  if (suite == "entropy") return verify_entropy(seed);
  if (suite == "capacities") return verify_capacities(seed);
  if (suite == "montecarlo") return verify_montecarlo(seed);
  if (suite == "all") {
    std::vector<CheckRecord> all;
    for (const auto& s : suite_names()) {
      auto r = run_suite(s, seed);
      all.insert(all.end(), r.begin(), r.end());
    }
    return all;
  }
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

inline nlohmann::json to_json(const CheckRecord& r) {
  nlohmann::json j = {{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}};
  if (std::isfinite(r.slack)) j["slack"] = r.slack;
  else j["slack"] = r.slack > 0 ? "inf" : "-inf";
  return j;
}

}  // namespace tqms

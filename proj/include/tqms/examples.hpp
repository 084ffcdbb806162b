#pragma once

// Tables for the worked examples. Rows are computed in parallel and stored in
// grid order. Capacity-valued cells are in e-bits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tqms/capacities.hpp"
#include "tqms/entropic.hpp"
#include "tqms/errors.hpp"

namespace tqms {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct TimeGrid {
  double start = 0.0;
  double stop = 10.0;
  std::size_t points = 21;
  bool log_spacing = false;

  void validate() const {
    if (!(start >= 0) || !std::isfinite(start)) throw std::invalid_argument("time grid: start must be >= 0");
    if (!(stop >= start) || !std::isfinite(stop)) throw std::invalid_argument("time grid: stop must be >= start");
    if (points < 1) throw std::invalid_argument("time grid: points must be >= 1");
    if (log_spacing && !(start > 0)) throw std::invalid_argument("time grid: log spacing needs start > 0");
  }

  std::vector<double> values() const {
    validate();
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
      out[i] = log_spacing ? start * std::pow(stop / start, f) : start + f * (stop - start);
    }
    return out;
  }
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<bool> is_capacity;
  std::vector<std::vector<double>> rows;
  nlohmann::json notes = nlohmann::json::object();
  std::vector<std::string> capacity_notes;  // note keys holding e-bit values

  void add_column(std::string c, bool capacity = false) {
    columns.push_back(std::move(c));
    is_capacity.push_back(capacity);
  }
};

struct ExampleParams {
  std::size_t n = 2;
  std::size_t d = 2;
  std::vector<double> eps = {0.1};
  std::uint64_t seed = 1;
  std::size_t probes = 8;
  TimeGrid grid;
};

/// Evaluates fn(i) for i < count on a small thread pool; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& fn) {
  std::vector<T> out(count);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline void require_range(bool ok, const std::string& what) {
  if (!ok) throw resource_limit_error(what);
}

inline void require_eps(const std::vector<double>& eps) {
  for (double e : eps)
    if (!(e > 0) || !std::isfinite(e)) throw std::invalid_argument("eps entries must be positive");
}

/// Basis state, uniform superposition, then seeded Haar-random pure states.
inline std::vector<CMat> probe_states(Eigen::Index d, std::size_t count, std::uint64_t seed) {
  std::vector<CMat> out;
  CMat e0 = CMat::Zero(d, d);
  e0(0, 0) = 1.0;
  out.push_back(e0);
  if (count > 1) out.push_back(CMat::Constant(d, d, 1.0 / static_cast<double>(d)));
  std::mt19937_64 rng(seed);
  while (out.size() < count) out.push_back(random_pure_state(d, rng));
  return out;
}

/// max over probes of ||Phi_{k_t}(rho) - Phi_1(rho)||_1, i.e. ||T_t^dagger rho - E^dagger rho||_1.
inline double max_trace_distance(const ProjectiveRep& rep, const KernelSlice& k, const std::vector<CMat>& probes) {
  const RVec ones = RVec::Ones(static_cast<Eigen::Index>(rep.group.order));
  double worst = 0;
  for (const CMat& rho : probes)
    worst = std::max(worst, trace_norm(phi_kernel(rep, k.values, rho) - phi_kernel(rep, ones, rho)));
  return worst;
}

/// ||rho_t - E rho||_1 <= sqrt(2 ln n) e^{-t/2}.
inline double mlsi_decay_bound(std::size_t n, double t) {
  return std::sqrt(2.0 * std::log(static_cast<double>(n))) * std::exp(-0.5 * t);
}

inline double mlsi_deco_time_bound(std::size_t n, double eps) {
  return std::max(0.0, 2.0 * std::log(std::sqrt(2.0 * std::log(static_cast<double>(n))) / eps));
}

/// (1/2) ln((1/2) n ln n) + 6 - ln eps.
inline double torus_deco_time_bound(std::size_t n, double eps) {
  const double x = static_cast<double>(n);
  return 0.5 * std::log(0.5 * x * std::log(x)) + 6.0 - std::log(eps);
}

/// 64/3 - (32/3) ln eps + 4 ln(1 + (3/2) ln(3/4)).
inline double scd_deco_time_bound(double eps) {
  return 64.0 / 3.0 - 32.0 / 3.0 * std::log(eps) + 4.0 * std::log(1.0 + 1.5 * std::log(0.75));
}

/// Collective decoherence bounds use the heat-kernel estimate at t/2.
inline double collective_bound(LieGroup kind, double t, std::size_t n) {
  return t > 0 ? lie_group_bound(kind, 0.5 * t, n) : kInf;
}

/// Spectral projector onto ker L for a self-adjoint generator.
inline Superoperator kernel_projector(const Superoperator& lind) {
  if (!lind.selfadjoint_hs) throw std::domain_error("kernel_projector: generator is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(lind.matrix));
  CMat p = CMat::Zero(lind.matrix.rows(), lind.matrix.cols());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= zero_eigen_threshold)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return {lind.dim, p, SuperKind::conditional_expectation, true};
}

namespace detail {

inline void add_capacity_columns(Table& tab) {
  tab.add_column("t");
  tab.add_column("eps");
  for (const char* c : {"Q_lo", "Q_hi", "C_lo", "C_hi", "CEA_lo", "CEA_hi", "ref_exact"}) tab.add_column(c, true);
}

inline void push_capacities(std::vector<double>& row, const CapacityReport& r, double ref) {
  row.insert(row.end(), {r.t, r.eps, r.Q.lower, r.Q.upper, r.C.lower, r.C.upper, r.C_EA.lower, r.C_EA.upper, ref});
}

inline void note_blocks(Table& tab, const CommutantDecomposition& dec) {
  tab.notes["blocks"] = to_json(dec)["blocks"];
  tab.notes["commutant_dim"] = dec.commutant_dim;
  tab.notes["limit_Q"] = std::log(static_cast<double>(dec.max_n()));
  tab.notes["limit_C"] = std::log(static_cast<double>(dec.sum_n()));
  tab.notes["limit_CEA"] = std::log(static_cast<double>(dec.sum_n2()));
  for (const char* k : {"limit_Q", "limit_C", "limit_CEA"}) tab.capacity_notes.push_back(k);
}

/// Depolarizing and discrete dephasing share one layout.
inline Table finite_channel_table(const std::string& name, const ProjectiveRep& rep, std::size_t n,
                                  ReferenceKind ref, const ExampleParams& p) {
  require_eps(p.eps);
  const auto gen = uniform_walk(rep.group);
  const auto dec = block_decomposition(rep, p.seed);
  const KernelPropagator kp(gen);
  const auto probes = probe_states(static_cast<Eigen::Index>(rep.dim), std::max<std::size_t>(p.probes, 1), p.seed);
  const auto lind = transferred_lindbladian(rep, gen);
  const double alpha1 = 1.0;

  Table tab;
  tab.name = name;
  add_capacity_columns(tab);
  tab.add_column("trace_distance");
  tab.add_column("l1_bound");
  tab.add_column("mlsi_decay_bound");
  tab.add_column("Q_mlsi", true);
  tab.add_column("CEA_mlsi", true);
  tab.add_column("C_mlsi", true);

  const auto times = p.grid.values();
  tab.rows = parallel_map<std::vector<double>>(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const KernelSlice k = kp.kernel(t);
    std::vector<double> row;
    push_capacities(row, capacity_sandwich(dec, kernel_norm(k, kInf), t), reference_exact(ref, n, t));
    row.push_back(max_trace_distance(rep, k, probes));
    row.push_back(kernel_norm(k, 1.0));
    row.push_back(mlsi_decay_bound(n, t));
    const auto m = mlsi_capacity_bounds(dec, alpha1, lind, rep, t);
    row.push_back(m.QP_bound);
    row.push_back(m.CEA_bound);
    row.push_back(m.C_bound.value_or(kMissing));
    return row;
  });

  note_blocks(tab, dec);
  tab.notes["n"] = n;
  tab.notes["group_order"] = rep.group.order;
  tab.notes["classical_gap"] = spectral_gap(gen);
  tab.notes["quantum_gap"] = quantum_spectral_gap(lind);
  nlohmann::json per_eps = nlohmann::json::array();
  for (double e : p.eps) {
    nlohmann::json j = {{"eps", e}, {"t_mix", mixing_time(gen, e)}, {"t_eps", t_eps(gen, e)},
                        {"mlsi_deco_bound", mlsi_deco_time_bound(n, e)}};
    if (rep.group.order >= 3) j["logsob_mixing_bound"] = uniform_walk_mixing_bound(rep.group.order, e);
    per_eps.push_back(j);
  }
  tab.notes["thresholds"] = per_eps;
  return tab;
}

}  // namespace detail

inline Table depolarizing_table(const ExampleParams& p) {
  require_range(p.n >= 2 && p.n <= 8, "depolarizing: n must be in [2, 8]");
  const auto rep = weyl_rep(p.n);
  Table tab = detail::finite_channel_table("depolarizing", rep, p.n, ReferenceKind::depolarizing_2way, p);
  const auto gen = uniform_walk(rep.group);
  tab.notes["eb_time_bound"] = eb_time_bound(rep, gen);
  if (p.n <= 4) tab.notes["ppt_time"] = ppt_eb_time(transferred_lindbladian(rep, gen), rep);
  return tab;
}

inline Table dephasing_discrete_table(const ExampleParams& p) {
  require_range(p.n >= 2 && p.n <= 16, "dephasing_discrete: n must be in [2, 16]");
  const auto rep = char_rep(p.n);
  Table tab = detail::finite_channel_table("dephasing_discrete", rep, p.n, ReferenceKind::dephasing_2way, p);
  tab.notes["eb_time_bound"] = "never: fixed-point algebra is not trivial";
  return tab;
}

inline Table dephasing_torus_bounds_table(const ExampleParams& p) {
  require_range(p.n >= 2 && p.n <= 4096, "dephasing_torus_bounds: n must be in [2, 4096]");
  require_eps(p.eps);
  Table tab;
  tab.name = "dephasing_torus_bounds";
  tab.add_column("t");
  tab.add_column("torus_kernel_bound");
  tab.add_column("mlsi_decay_bound");
  for (double t : p.grid.values())
    tab.rows.push_back({t, t > 0 ? lie_group_bound(LieGroup::torus_n, t, p.n) : kInf, mlsi_decay_bound(p.n, t)});
  nlohmann::json per_eps = nlohmann::json::array();
  for (double e : p.eps)
    per_eps.push_back({{"eps", e}, {"torus_deco_bound", torus_deco_time_bound(p.n, e)},
                       {"mlsi_deco_bound", mlsi_deco_time_bound(p.n, e)}});
  tab.notes["n"] = p.n;
  tab.notes["thresholds"] = per_eps;
  return tab;
}

inline Table wcd_table(const ExampleParams& p) {
  require_range(p.n >= 2 && p.n <= 5, "wcd: n must be in [2, 5]");
  const auto lind = wcd_lindbladian(p.n);
  const QuantumPropagator qp(lind);
  const Superoperator e = kernel_projector(lind);
  const auto probes = probe_states(static_cast<Eigen::Index>(lind.dim), std::max<std::size_t>(p.probes, 1), p.seed);
  Table tab;
  tab.name = "wcd";
  tab.add_column("t");
  tab.add_column("trace_distance");
  tab.add_column("deco_bound");
  const auto times = p.grid.values();
  tab.rows = parallel_map<std::vector<double>>(times.size(), [&](std::size_t i) {
    const Superoperator ch = qp.channel(times[i]);
    double worst = 0;
    for (const CMat& rho : probes) worst = std::max(worst, trace_distance_to_fix(ch, e, rho));
    return std::vector<double>{times[i], worst, collective_bound(LieGroup::torus1, times[i], 1)};
  });
  tab.notes["n"] = p.n;
  tab.notes["gap"] = quantum_spectral_gap(lind);
  tab.notes["fixed_point_dim"] = std::llround(e.matrix.trace().real());
  return tab;
}

inline Table scd_bounds_table(const ExampleParams& p) {
  require_eps(p.eps);
  Table tab;
  tab.name = "scd_bounds";
  tab.add_column("t");
  tab.add_column("deco_bound");
  for (double t : p.grid.values()) tab.rows.push_back({t, collective_bound(LieGroup::semisimple, t, 3)});
  nlohmann::json per_eps = nlohmann::json::array();
  for (double e : p.eps) per_eps.push_back({{"eps", e}, {"deco_time_bound", scd_deco_time_bound(e)}});
  tab.notes["thresholds"] = per_eps;
  return tab;
}

inline Table swap_table(const ExampleParams& p) {
  require_range(p.n >= 2 && p.n <= symmetric_cap, "swap: n must be in [2, 6]");
  require_range(p.d >= 2, "swap: d must be >= 2");
  std::size_t dim = 1;
  for (std::size_t i = 0; i < p.n; ++i) {
    dim *= p.d;
    require_range(dim <= 64, "swap: d^n must be <= 64");
  }
  require_eps(p.eps);
  const auto rep = perm_rep(p.n, p.d);
  const auto gen = transposition_chain(p.n);
  const auto dec = block_decomposition(rep, p.seed);
  const KernelPropagator kp(gen);
  const auto probes = probe_states(static_cast<Eigen::Index>(rep.dim), std::max<std::size_t>(p.probes, 1), p.seed);
  const double nlogn = static_cast<double>(p.n) * std::log(static_cast<double>(p.n));

  Table tab;
  tab.name = "swap";
  detail::add_capacity_columns(tab);
  tab.add_column("trace_distance");
  tab.add_column("l1_bound");
  tab.add_column("convergence_rate");
  const auto times = p.grid.values();
  tab.rows = parallel_map<std::vector<double>>(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const KernelSlice k = kp.kernel(t);
    std::vector<double> row;
    detail::push_capacities(row, capacity_sandwich(dec, kernel_norm(k, kInf), t), kMissing);
    row.push_back(max_trace_distance(rep, k, probes));
    row.push_back(kernel_norm(k, 1.0));
    row.push_back(t > nlogn ? swap_convergence_rate(p.n, t) : kMissing);
    return row;
  });
  detail::note_blocks(tab, dec);
  tab.notes["n"] = p.n;
  tab.notes["d"] = p.d;
  tab.notes["classical_gap"] = spectral_gap(gen);
  nlohmann::json per_eps = nlohmann::json::array();
  for (double e : p.eps) per_eps.push_back({{"eps", e}, {"t_eps", t_eps(gen, e)}, {"t_mix", mixing_time(gen, e)}});
  tab.notes["thresholds"] = per_eps;
  return tab;
}

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = {"depolarizing", "dephasing_discrete", "dephasing_torus_bounds",
                                                 "wcd",          "scd_bounds",         "swap"};
  return names;
}

inline Table example_table(const std::string& name, const ExampleParams& p) {
  if (name == "depolarizing") return depolarizing_table(p);
  if (name == "dephasing_discrete") return dephasing_discrete_table(p);
  if (name == "dephasing_torus_bounds") return dephasing_torus_bounds_table(p);
  if (name == "wcd") return wcd_table(p);
  if (name == "scd_bounds") return scd_bounds_table(p);
  if (name == "swap") return swap_table(p);
  throw std::invalid_argument("unknown example '" + name + "'");
}

/// ||k_t - 1||_p for p = 1, 2, inf along the grid.
inline Table kernel_table(const ClassicalGenerator& gen, const TimeGrid& grid) {
  const KernelPropagator kp(gen);
  Table tab;
  tab.name = "kernel";
  for (const char* c : {"t", "norm_p1", "norm_p2", "norm_inf"}) tab.add_column(c);
  const auto times = grid.values();
  tab.rows = parallel_map<std::vector<double>>(times.size(), [&](std::size_t i) {
    const KernelSlice k = kp.kernel(times[i]);
    return std::vector<double>{times[i], kernel_norm(k, 1.0), kernel_norm(k, 2.0), kernel_norm(k, kInf)};
  });
  tab.notes["group"] = gen.group.label;
  tab.notes["order"] = gen.group.order;
  tab.notes["gap"] = spectral_gap(gen);
  tab.notes["reversible"] = gen.reversible;
  return tab;
}

}  // namespace tqms

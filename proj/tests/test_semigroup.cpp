#include <catch_amalgamated.hpp>

#include <random>

#include "tqms/semigroup.hpp"

using namespace tqms;
using Catch::Matchers::WithinAbs;

namespace {

CMat e_diag_matrix(std::size_t n) {
  CMat m = CMat::Zero(n * n, n * n);
  for (std::size_t j = 0; j < n; ++j) m(j * n + j, j * n + j) = 1.0;
  return m;
}

ProjectiveRep trivial_rep(const FiniteGroup& g, std::size_t d) {
  ProjectiveRep r;
  r.group = g;
  r.dim = d;
  r.unitaries.assign(g.order, CMat::Identity(d, d));
  return r;
}

}  // namespace

TEST_CASE("column-stacking conventions", "[semigroup]") {
  std::mt19937_64 rng(1);
  const CMat a = random_matrix(3, rng), b = random_matrix(3, rng), x = random_matrix(3, rng);
  CHECK(max_abs(unvec(sandwich_matrix(a, b) * vec(x), 3) - a * x * b) < 1e-13);
  const CMat u = weyl_rep(3)(4);
  CHECK(max_abs(unvec(conjugation_matrix(u) * vec(x), 3) - u.adjoint() * x * u) < 1e-13);
}

TEST_CASE("depolarizing generator", "[semigroup]") {
  std::mt19937_64 rng(2);
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto rep = weyl_rep(n);
    const auto lind = transferred_lindbladian(rep, uniform_walk(rep.group));
    CHECK(lind.selfadjoint_hs);
    const CMat rho = random_density(n, rng);
    CHECK(max_abs(lind.apply(rho) - (rho - CMat::Identity(n, n) / double(n))) < 1e-12);
    const QuantumPropagator qp(lind);
    for (double t : {0.0, 0.4, 2.0}) {
      const CMat want = std::exp(-t) * rho + (1 - std::exp(-t)) * CMat::Identity(n, n) / double(n);
      CHECK(max_abs(qp.channel(t).apply(rho) - want) < 1e-12);
    }
    CHECK_THAT(quantum_spectral_gap(lind), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("dephasing generator", "[semigroup]") {
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto rep = char_rep(n);
    const auto lind = transferred_lindbladian(rep, uniform_walk(rep.group));
    CHECK(max_abs(lind.matrix - (CMat::Identity(n * n, n * n) - e_diag_matrix(n))) < 1e-12);
    CHECK(max_abs(conditional_expectation(rep).matrix - e_diag_matrix(n)) < 1e-12);
  }
}

TEST_CASE("self-adjointness flag", "[semigroup]") {
  const auto directed = build_generator(make_cyclic(3), {0.0, 1.0, 0.0});
  const auto lind = transferred_lindbladian(char_rep(3), directed);
  CHECK_FALSE(lind.selfadjoint_hs);
  CHECK_THROWS_AS(quantum_spectral_gap(lind), std::domain_error);
  CHECK(symmetrized_quantum_gap(lind) > 0);
  // A trivial representation gives L = 0, Hermitian even for a directed chain.
  CHECK(transferred_lindbladian(trivial_rep(make_cyclic(3), 2), directed).selfadjoint_hs);
  CHECK_THROWS_AS(transferred_lindbladian(char_rep(3), uniform_walk(make_cyclic(4))), std::invalid_argument);
}

TEST_CASE("non-self-adjoint channel through the exponential route", "[semigroup]") {
  const auto gen = build_generator(make_cyclic(3), {0.0, 0.8, 0.1});
  const auto rep = char_rep(3);
  const auto lind = transferred_lindbladian(rep, gen);
  const auto ch = channel_at(lind, 1.3, true);
  const auto p = transition_at(gen, 1.3);
  std::mt19937_64 rng(4);
  const CMat x = random_matrix(3, rng);
  CMat want = CMat::Zero(3, 3);
  for (std::size_t h = 0; h < 3; ++h) want += p(0, h) * co_representation(rep, x, h);
  CHECK(max_abs(ch.apply(x) - want) < 1e-12);
}

TEST_CASE("Choi matrix conventions", "[semigroup]") {
  const auto id = identity_superop(2);
  const CMat c = choi(id);
  // sum_ij E_ij (x) E_ij: rank one, unnormalized maximally entangled
  CMat omega = CMat::Zero(4, 4);
  for (int i : {0, 3})
    for (int j : {0, 3}) omega(i, j) = 1.0;
  CHECK(max_abs(c - omega) < 1e-15);
  // Partial transpose of that is the swap, eigenvalue -1.
  CHECK_THAT(hermitian_eigenvalues(partial_transpose_first(c, 2)).minCoeff(), WithinAbs(-1.0, 1e-14));
  const auto rep = weyl_rep(2);
  const auto chk = inspect_channel(QuantumPropagator(transferred_lindbladian(rep, uniform_walk(rep.group))).channel(0.5));
  CHECK(chk.cp_checked);
  CHECK(chk.choi_min_eigenvalue >= -1e-12);
  CHECK(chk.unitality_error < 1e-12);
}

TEST_CASE("diffusive normalizations", "[semigroup]") {
  const CMat z = pauli_z();
  const auto standard = diffusive_lindbladian({z});
  const auto half = diffusive_lindbladian({z}, DiffusiveNormalization::half);
  CHECK(max_abs(standard.matrix - 2.0 * half.matrix) < 1e-14);
  // qubit sigma_z: half form is 2 * (id - E_diag)
  CHECK(max_abs(half.matrix - 2.0 * (CMat::Identity(4, 4) - e_diag_matrix(2))) < 1e-14);
  CHECK_THROWS_AS(diffusive_lindbladian({CMat(CMat::Identity(2, 2) * cplx(0, 1))}), std::invalid_argument);
}

TEST_CASE("collective decoherence", "[semigroup]") {
  const CMat sz2 = collective_operator(pauli_z(), 2);
  CMat want = CMat::Zero(4, 4);
  want(0, 0) = 2;
  want(3, 3) = -2;
  CHECK(max_abs(sz2 - want) < 1e-15);
  for (std::size_t n = 2; n <= 5; ++n) CHECK_THAT(quantum_spectral_gap(wcd_lindbladian(n)), WithinAbs(2.0, 1e-8));
  // The full mixed state is invariant.
  const auto scd = scd_lindbladian(3);
  CHECK(max_abs(scd.apply(CMat::Identity(8, 8))) < 1e-12);
  CHECK(scd.selfadjoint_hs);
  CHECK_THROWS_AS(collective_operator(pauli_z(), 7), resource_limit_error);
}

TEST_CASE("factorization across representations", "[semigroup]") {
  std::mt19937_64 rng(6);
  const std::vector<std::pair<ProjectiveRep, ClassicalGenerator>> cases = {
      {weyl_rep(3), build_generator(make_product(make_cyclic(3), make_cyclic(3)),
                                    {0, 0.2, 0.5, 0.1, 0, 0, 0.3, 0.7, 0})},
      {perm_rep(3, 2), build_generator(make_symmetric(3), {0, 0.1, 0.4, 0.9, 0.0, 0.3})},
  };
  for (const auto& [rep, gen] : cases)
    for (double t : {0.1, 1.0, 10.0}) {
      const FactorizationCheck fc(rep, gen, t);
      for (int k = 0; k < 3; ++k) {
        const CMat x = random_matrix(rep.dim, rng);
        for (std::size_t g = 0; g < rep.group.order; ++g) CHECK(fc.residual(x, g) < 1e-9);
      }
    }
  CHECK_THROWS_AS(check_factorization(char_rep(3), uniform_walk(make_cyclic(3)), 1.0, CMat::Identity(3, 3), 5),
                  std::invalid_argument);
}

TEST_CASE("trace distance against the L1 kernel bound", "[semigroup]") {
  std::mt19937_64 rng(8);
  const auto rep = perm_rep(3, 2);
  const auto gen = transposition_chain(3);
  const auto lind = transferred_lindbladian(rep, gen);
  for (double t : {0.0, 0.3, 1.0, 3.0}) {
    const double l1 = kernel_norm(gen, t, 1.0);
    for (int i = 0; i < 10; ++i) CHECK(trace_distance_to_fix(lind, rep, t, random_pure_state(8, rng)) <= l1 + 1e-8);
  }
  CHECK_THROWS_AS(trace_distance_to_fix(lind, rep, 1.0, CMat::Identity(8, 8)), std::invalid_argument);
}

TEST_CASE("decoherence time of the qubit dephasing |+>", "[semigroup]") {
  // ||T_t(|+><+|) - E(|+><+|)||_1 = e^{-t}
  const auto rep = char_rep(2);
  const QuantumPropagator qp(transferred_lindbladian(rep, uniform_walk(rep.group)));
  const CMat plus = CMat::Constant(2, 2, 0.5);
  CHECK_THAT(decoherence_time_for(qp, conditional_expectation(rep), plus, 0.1), WithinAbs(std::log(10.0), 1e-9));
}

TEST_CASE("decoherence bounds", "[semigroup]") {
  const auto gen = complete_chain(4);
  DecoInputs in;
  in.gen = &gen;
  in.lambda = 1.0;
  in.x_norm2 = 2.0;
  in.uc = UcInputs{std::exp(1.0), 0.5, 1.0, kInf};
  const auto b = deco_bounds(in, 0.1);
  CHECK_THAT(*b.via_mixing, WithinAbs(mixing_time(gen, 0.1), 1e-12));
  CHECK_THAT(*b.via_gap, WithinAbs(std::log(20.0), 1e-12));
  CHECK_THAT(*b.via_uc, WithinAbs(1 + (1 + std::log(10.0)) / 0.5, 1e-12));
  CHECK_THROWS_AS(deco_bounds(DecoInputs{}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(uc_time_bound({1.0, 1.0, 2.0, 2.0}, 0.1), std::domain_error);
}

TEST_CASE("Monte Carlo unravelling", "[semigroup]") {
  const auto rep = char_rep(2);
  const auto gen = uniform_walk(rep.group);
  const auto est = monte_carlo_unravel(rep, gen, 1.0, pauli_x(), 10000, 42);
  // exact: e^{-t} sigma_x
  CHECK(std::abs(est.mean(0, 1) - std::exp(-1.0)) < 4 * est.stderr_(0, 1));
  const auto again = monte_carlo_unravel(rep, gen, 1.0, pauli_x(), 10000, 42);
  CHECK(again.counts == est.counts);
  CHECK(monte_carlo_unravel(rep, gen, 1.0, pauli_x(), 10000, 43).counts != est.counts);
  CHECK_THROWS_AS(monte_carlo_unravel(rep, gen, 1.0, pauli_x(), 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_unravel(weyl_rep(2), gen, 1.0, pauli_x(), 10, 1), std::invalid_argument);
}

TEST_CASE("property: transferred channels are unital, CP and trace preserving", "[semigroup][property]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<ProjectiveRep> reps = {weyl_rep(2), weyl_rep(3), char_rep(4), perm_rep(3, 2)};
  for (const auto& rep : reps)
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> rates(rep.group.order);
      for (auto& r : rates) r = u(rng) < 0.3 ? 0.0 : u(rng);
      const auto gen = build_generator(rep.group, rates);
      const auto lind = transferred_lindbladian(rep, gen);
      for (double t : {0.2, 2.0}) {
        const auto ch = channel_at(lind, t, true);
        const CMat rho = random_density(rep.dim, rng);
        CHECK_THAT(ch.apply_adjoint(rho).trace().real(), WithinAbs(1.0, 1e-12));
        CHECK(hermitian_eigenvalues(ch.apply_adjoint(rho)).minCoeff() > -1e-12);
      }
    }
}

#include <catch_amalgamated.hpp>

#include <random>

#include "tqms/fixed_point.hpp"
#include "tqms/semigroup.hpp"

using namespace tqms;

namespace {

std::vector<std::pair<std::size_t, std::size_t>> shapes(const CommutantDecomposition& dec) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& b : dec.blocks) out.emplace_back(b.n, b.d);
  return out;
}

}  // namespace

TEST_CASE("irreducible Weyl system has trivial commutant", "[fixed_point]") {
  for (std::size_t n : {2, 3, 5}) {
    const auto dec = block_decomposition(weyl_rep(n));
    CHECK(dec.commutant_dim == 1);
    CHECK(shapes(dec) == std::vector<std::pair<std::size_t, std::size_t>>{{1, n}});
  }
}

TEST_CASE("diagonal commutant of the clock representation", "[fixed_point]") {
  const auto dec = block_decomposition(char_rep(4));
  CHECK(dec.commutant_dim == 4);
  CHECK(shapes(dec) == std::vector<std::pair<std::size_t, std::size_t>>(4, {1, 1}));
}

TEST_CASE("Schur-Weyl blocks of the permutation representation", "[fixed_point]") {
  // (C^2)^{(x)2}: symmetric (dim 3) + antisymmetric (dim 1); commutant M_3 + M_1.
  CHECK(shapes(block_decomposition(perm_rep(2, 2))) ==
        std::vector<std::pair<std::size_t, std::size_t>>{{3, 1}, {1, 1}});
  // (C^2)^{(x)3}: spin 3/2 (dim 4, S3-trivial) and spin 1/2 (dim 2, 2-dim S3 irrep)
  CHECK(shapes(block_decomposition(perm_rep(3, 2))) ==
        std::vector<std::pair<std::size_t, std::size_t>>{{4, 1}, {2, 2}});
  // (C^3)^{(x)2}: Sym^2 (dim 6) + Alt^2 (dim 3)
  CHECK(shapes(block_decomposition(perm_rep(2, 3))) ==
        std::vector<std::pair<std::size_t, std::size_t>>{{6, 1}, {3, 1}});
}

TEST_CASE("collective Paulis on two qubits", "[fixed_point]") {
  const auto dec = block_decomposition(tensor_power(weyl_rep(2), 2));
  CHECK(dec.commutant_dim == 4);
  CHECK(shapes(dec) == std::vector<std::pair<std::size_t, std::size_t>>(4, {1, 1}));
}

TEST_CASE("generating sets", "[fixed_point]") {
  CHECK(generating_set(make_cyclic(7)).size() == 1);
  CHECK(generating_set(make_power(make_cyclic(2), 3)).size() == 3);
  CHECK(generating_set(make_symmetric(4)).size() <= 3);
}

TEST_CASE("commutant equals the range of the group average", "[fixed_point]") {
  for (const auto& rep : {weyl_rep(3), char_rep(3), perm_rep(3, 2), tensor_power(weyl_rep(2), 2)}) {
    const auto cb = commutant_basis(rep);
    CHECK(range_mismatch(conditional_expectation(rep).matrix, cb) < 1e-10);
  }
}

TEST_CASE("decomposition JSON", "[fixed_point]") {
  const auto j = to_json(block_decomposition(perm_rep(3, 2)));
  CHECK(j["commutant_dim"] == 20);
  CHECK(j["blocks"][1][0] == 2);
  CHECK_THROWS_AS(decompose_commutant(CommutantBasis{}, 2, 1), std::invalid_argument);
}

TEST_CASE("property: block invariants and block form", "[fixed_point][property]") {
  std::mt19937_64 rng(9);
  const std::vector<ProjectiveRep> reps = {weyl_rep(2),     weyl_rep(4),     char_rep(6),
                                           perm_rep(2, 2),  perm_rep(3, 2),  perm_rep(4, 2),
                                           tensor_power(weyl_rep(2), 3),     tensor_power(char_rep(2), 3)};
  for (const auto& rep : reps) {
    INFO(rep.label);
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto dec = block_decomposition(rep, seed);
      std::size_t sum_nd = 0;
      for (const auto& b : dec.blocks) sum_nd += b.n * b.d;
      CHECK(sum_nd == rep.dim);
      CHECK(dec.sum_n2() == dec.commutant_dim);
      CHECK(dec.residual < 1e-8);
      const CMat& w = dec.basis_change;
      CHECK(max_abs(w.adjoint() * w - CMat::Identity(rep.dim, rep.dim)) < 1e-10);
      // u(g) lives in (+) I_{n_k} (x) M_{d_k}: its rotation commutes with every rotated commutant element
      const auto cb = commutant_basis(rep);
      for (std::size_t g = 0; g < rep.group.order; g += std::max<std::size_t>(1, rep.group.order / 5)) {
        const CMat ug = w.adjoint() * rep(g) * w;
        for (const CMat& b : cb.basis) {
          const CMat bb = w.adjoint() * b * w;
          CHECK(max_abs(ug * bb - bb * ug) < 1e-9);
        }
      }
    }
  }
}

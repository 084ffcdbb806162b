#include <catch_amalgamated.hpp>

#include "tqms/capacities.hpp"

using namespace tqms;
using Catch::Matchers::WithinAbs;

TEST_CASE("depolarizing sandwich has zero limit", "[capacities]") {
  for (std::size_t n : {2, 3}) {
    const auto rep = weyl_rep(n);
    const auto r = capacity_sandwich(block_decomposition(rep), uniform_walk(rep.group), 2.0);
    const double eps = (double(n * n) - 1) * std::exp(-2.0);
    CHECK_THAT(r.eps, WithinAbs(eps, 1e-10));
    for (const auto* f : {&r.Q, &r.P, &r.Q2way, &r.P2way, &r.C, &r.C_EA}) {
      CHECK(f->lower == 0.0);
      CHECK_THAT(f->upper, WithinAbs(std::log1p(eps), 1e-10));
      CHECK_THAT(f->upper_crude, WithinAbs(eps, 1e-10));
      CHECK(f->strong_converse);
    }
  }
}

TEST_CASE("limits follow the block data", "[capacities]") {
  const auto r = capacity_sandwich(block_decomposition(perm_rep(3, 2)), 0.0, kInf);
  CHECK_THAT(r.Q.lower, WithinAbs(std::log(4.0), 1e-15));
  CHECK_THAT(r.C.lower, WithinAbs(std::log(6.0), 1e-15));
  CHECK_THAT(r.C_EA.lower, WithinAbs(std::log(20.0), 1e-15));
  CHECK(r.dim == 8);
  // at t = 0 the upper bound is capped at log d^2
  const auto r0 = capacity_sandwich(block_decomposition(char_rep(3)), uniform_walk(make_cyclic(3)), 0.0);
  CHECK_THAT(r0.C.upper, WithinAbs(2 * std::log(3.0), 1e-12));
  CHECK_THROWS_AS(capacity_sandwich(block_decomposition(char_rep(3)), -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("reference formulas", "[capacities]") {
  for (std::size_t n : {2, 3, 4}) {
    const double x = double(n);
    CHECK_THAT(reference_exact(ReferenceKind::dephasing_2way, n, 0.0), WithinAbs(std::log(x), 1e-12));
    CHECK(reference_exact(ReferenceKind::dephasing_2way, n, 40.0) < 1e-12);
    CHECK_THAT(reference_exact(ReferenceKind::depolarizing_2way, n, 0.0), WithinAbs(std::log(x), 1e-12));
    CHECK(reference_exact(ReferenceKind::depolarizing_2way, n, std::log(x + 1)) == 0.0);
    // continuous at the clip point
    CHECK(reference_exact(ReferenceKind::depolarizing_2way, n, std::log(x + 1) - 1e-9) < 1e-6);
  }
  // qubit dephasing: 1 - h((1 + e^-t)/2) in e-bits
  const double t = 0.7, p = (1 + std::exp(-t)) / 2;
  CHECK_THAT(reference_exact(ReferenceKind::dephasing_2way, 2, t),
             WithinAbs(std::log(2.0) + p * std::log(p) + (1 - p) * std::log(1 - p), 1e-12));
  CHECK_THROWS_AS(reference_exact(ReferenceKind::dephasing_2way, 1, 0.0), std::invalid_argument);
}

TEST_CASE("PPT times of depolarizing channels", "[capacities]") {
  // e^{-t} rho + (1-e^{-t}) I/d is PPT iff e^{-t} <= 1/(d+1)
  for (std::size_t d : {2, 3}) {
    const auto rep = weyl_rep(d);
    const auto res = ppt_eb_report(transferred_lindbladian(rep, uniform_walk(rep.group)), rep);
    CHECK_THAT(res.time, WithinAbs(std::log(double(d) + 1), 1e-6));
    CHECK(res.exact == (d == 2));
    CHECK_FALSE(res.asymptotic_obstruction);
    CHECK(eb_time_bound(rep, uniform_walk(rep.group)) >= res.time);
  }
  CHECK_THAT(eb_time_bound(weyl_rep(2), uniform_walk(weyl_rep(2).group)), WithinAbs(std::log(6.0), 1e-9));
}

TEST_CASE("dephasing is never entanglement breaking", "[capacities]") {
  for (std::size_t n : {2, 3}) {
    const auto rep = char_rep(n);
    const auto res = ppt_eb_report(transferred_lindbladian(rep, uniform_walk(rep.group)), rep);
    CHECK(std::isinf(res.time));
    CHECK(res.asymptotic_obstruction);
    CHECK_THROWS_AS(eb_time_bound(rep, uniform_walk(rep.group)), std::domain_error);
  }
  CHECK_THROWS_AS(eb_time_bound(build_generator(make_cyclic(4), {0, 0, 1, 0}), 2), std::domain_error);
}

TEST_CASE("MLSI bounds", "[capacities]") {
  const auto rep = char_rep(3);
  const auto dec = block_decomposition(rep);
  const auto lind = transferred_lindbladian(rep, uniform_walk(rep.group));
  CHECK(is_simple_generator(lind, rep));
  const auto b = mlsi_capacity_bounds(dec, 1.0, lind, rep, 1.0);
  CHECK_THAT(b.QP_bound, WithinAbs(2 * std::exp(-1.0) * std::log(3.0), 1e-12));
  CHECK_THAT(b.CEA_bound, WithinAbs(std::log(3.0) + 2 * std::exp(-1.0) * std::log(3.0), 1e-12));
  REQUIRE(b.C_bound);
  CHECK_THAT(*b.C_bound, WithinAbs(std::exp(-1.0) * std::log(3.0) + std::log(3.0), 1e-12));
  const auto gen = circle_chain(4);
  const auto rep4 = char_rep(4);
  CHECK_FALSE(is_simple_generator(transferred_lindbladian(rep4, gen), rep4));
  CHECK_THROWS_AS(mlsi_capacity_bounds(dec, 0.0, 3, 1.0), std::domain_error);
}

TEST_CASE("swap convergence rate", "[capacities]") {
  const double t = 2 * std::log(2.0) + 1.0;
  CHECK_THAT(swap_convergence_rate(2, t), WithinAbs(std::exp(-2.0), 1e-14));
  CHECK_THROWS_AS(swap_convergence_rate(3, 1.0), std::domain_error);
  CHECK(std::string(capacity_csv_header()) == "t,eps,Q_lo,Q_hi,C_lo,C_hi,CEA_lo,CEA_hi,ref_exact");
}

TEST_CASE("property: sandwich brackets the exact dephasing capacity", "[capacities][property]") {
  for (std::size_t n : {2, 3, 4, 5}) {
    const auto rep = char_rep(n);
    const auto gen = uniform_walk(rep.group);
    const auto dec = block_decomposition(rep);
    for (int i = 0; i < 40; ++i) {
      const double t = 0.25 * i;
      const auto r = capacity_sandwich(dec, gen, t);
      const double ref = reference_exact(ReferenceKind::dephasing_2way, n, t);
      CHECK(ref <= r.Q2way.upper + 1e-8);
      CHECK(ref >= r.Q2way.lower - 1e-12);
    }
  }
}

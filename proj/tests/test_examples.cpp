#include <catch_amalgamated.hpp>

#include "tqms/examples.hpp"

using namespace tqms;
using Catch::Matchers::WithinAbs;

namespace {

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

// Row equality with NaN cells (missing values) comparing equal.
bool same_rows(const Table& a, const Table& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    for (std::size_t j = 0; j < a.rows[i].size(); ++j) {
      const double x = a.rows[i][j], y = b.rows[i][j];
      if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
  }
  return true;
}

ExampleParams params(std::size_t n, std::size_t points = 11, double stop = 8.0) {
  ExampleParams p;
  p.n = n;
  p.grid.stop = stop;
  p.grid.points = points;
  p.eps = {0.5, 0.1};
  return p;
}

}  // namespace

TEST_CASE("time grids", "[examples]") {
  TimeGrid g{0.0, 2.0, 5, false};
  CHECK(g.values() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  TimeGrid lg{0.01, 100.0, 5, true};
  const auto v = lg.values();
  CHECK_THAT(v[2], WithinAbs(1.0, 1e-12));
  CHECK(v.back() == 100.0);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 3, true}.values()), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{-1.0, 1.0, 3, false}.values()), std::invalid_argument);
  CHECK_THROWS_AS((TimeGrid{0.0, 1.0, 0, false}.values()), std::invalid_argument);
  CHECK(TimeGrid{3.0, 3.0, 1, false}.values() == std::vector<double>{3.0});
}

TEST_CASE("depolarizing table", "[examples]") {
  const auto tab = depolarizing_table(params(2));
  REQUIRE(tab.rows.size() == 11);
  const std::vector<std::string> head(tab.columns.begin(), tab.columns.begin() + 9);
  CHECK(head == std::vector<std::string>{"t", "eps", "Q_lo", "Q_hi", "C_lo", "C_hi", "CEA_lo", "CEA_hi", "ref_exact"});
  const auto td = column(tab, "trace_distance"), l1 = column(tab, "l1_bound");
  for (const auto& row : tab.rows) {
    CHECK(row[td] <= row[l1] + 1e-8);
    // qubit depolarizing: pure-state distance is e^{-t}
    CHECK_THAT(row[td], WithinAbs(std::exp(-row[0]), 1e-10));
    CHECK(row[column(tab, "ref_exact")] <= row[column(tab, "Q_hi")] + 1e-8);
  }
  CHECK_THAT(tab.notes["ppt_time"].get<double>(), WithinAbs(std::log(3.0), 1e-6));
  CHECK_THAT(tab.notes["quantum_gap"].get<double>(), WithinAbs(1.0, 1e-10));
  CHECK(tab.is_capacity[column(tab, "Q_hi")]);
  CHECK_FALSE(tab.is_capacity[column(tab, "trace_distance")]);
}

TEST_CASE("discrete dephasing table", "[examples]") {
  const auto tab = dephasing_discrete_table(params(3));
  const auto c = column(tab, "C_lo");
  for (const auto& row : tab.rows) CHECK_THAT(row[c], WithinAbs(std::log(3.0), 1e-12));
  const auto& th = tab.notes["thresholds"];
  REQUIRE(th.size() == 2);
  for (const auto& e : th) CHECK(e["t_mix"].get<double>() <= e["logsob_mixing_bound"].get<double>());
}

TEST_CASE("weak collective decoherence table", "[examples]") {
  const auto tab = wcd_table(params(3));
  CHECK_THAT(tab.notes["gap"].get<double>(), WithinAbs(2.0, 1e-8));
  // invariant subspace of sigma_z^(3) eigenvalues -3, -1, 1, 3 with multiplicities 1, 3, 3, 1
  CHECK(tab.notes["fixed_point_dim"].get<long long>() == 1 + 9 + 9 + 1);
  for (const auto& row : tab.rows) {
    const double t = row[0];
    if (t == 0) {
      CHECK(std::isinf(row[2]));
      continue;
    }
    CHECK_THAT(row[2], WithinAbs(std::sqrt(2 + std::sqrt(M_PI / t)) * std::exp(-t / 2), 1e-12));
    CHECK(row[1] <= row[2]);
  }
}

TEST_CASE("formula-only tables", "[examples]") {
  auto p = params(3);
  const auto scd = scd_bounds_table(p);
  CHECK_THAT(scd.notes["thresholds"][1]["deco_time_bound"].get<double>(),
             WithinAbs(64.0 / 3 - 32.0 / 3 * std::log(0.1) + 4 * std::log(1 + 1.5 * std::log(0.75)), 1e-12));
  p.n = 8;
  const auto torus = dephasing_torus_bounds_table(p);
  CHECK(torus.columns == std::vector<std::string>{"t", "torus_kernel_bound", "mlsi_decay_bound"});
  // at the stated time the torus bound equals eps
  const double tt = torus.notes["thresholds"][0]["torus_deco_bound"].get<double>();
  CHECK_THAT(lie_group_bound(LieGroup::torus_n, tt, 8), WithinAbs(0.5, 1e-12));
  CHECK_THAT(mlsi_decay_bound(8, mlsi_deco_time_bound(8, 0.1)), WithinAbs(0.1, 1e-12));
}

TEST_CASE("random SWAP table approaches span{I, SWAP}", "[examples]") {
  auto p = params(2, 21, 10.0);
  const auto tab = swap_table(p);
  CHECK(tab.notes["blocks"] == nlohmann::json::parse("[[3,1],[1,1]]"));
  const auto qhi = column(tab, "Q_hi"), rate = column(tab, "convergence_rate");
  const double limit = std::log(3.0);
  double prev = kInf;
  for (const auto& row : tab.rows) {
    CHECK(row[qhi] <= prev + 1e-12);
    prev = row[qhi];
    if (!std::isnan(row[rate])) CHECK(row[qhi] - limit <= std::log1p(row[rate]) + 1e-9);
  }
  CHECK(tab.rows.back()[qhi] - limit < 1e-6);
  CHECK(std::isnan(tab.rows.front()[column(tab, "ref_exact")]));
}

TEST_CASE("range violations", "[examples]") {
  CHECK_THROWS_AS(wcd_table(params(6)), resource_limit_error);
  CHECK_THROWS_AS(depolarizing_table(params(9)), resource_limit_error);
  auto p = params(3);
  p.d = 5;
  CHECK_THROWS_AS(swap_table(p), resource_limit_error);
  p = params(2);
  p.eps = {0.1, 0.0};
  CHECK_THROWS_AS(scd_bounds_table(p), std::invalid_argument);
  CHECK_THROWS_AS(example_table("nope", params(2)), std::invalid_argument);
}

TEST_CASE("tables are reproducible", "[examples]") {
  auto p = params(3, 7);
  p.seed = 5;
  const auto a = example_table("swap", p), b = example_table("swap", p);
  CHECK(same_rows(a, b));
  CHECK(a.notes == b.notes);
}

TEST_CASE("kernel table", "[examples]") {
  const auto tab = kernel_table(complete_chain(5), TimeGrid{0.0, 3.0, 4, false});
  CHECK(tab.columns == std::vector<std::string>{"t", "norm_p1", "norm_p2", "norm_inf"});
  for (const auto& row : tab.rows) CHECK_THAT(row[3], WithinAbs(4 * std::exp(-row[0]), 1e-10));
}

TEST_CASE("parallel map keeps order and rethrows", "[examples]") {
  const auto v = parallel_map<int>(50, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < 50; ++i) CHECK(v[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_map<int>(4, [](std::size_t i) -> int {
                    if (i == 2) throw std::domain_error("x");
                    return 0;
                  }),
                  std::domain_error);
}

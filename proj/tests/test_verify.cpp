#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "tqms/verify.hpp"

using namespace tqms;

TEST_CASE("suites pass and seeds only move slacks", "[verify]") {
  std::map<std::string, bool> first;
  for (std::uint64_t seed : {1, 2}) {
    const auto recs = run_suite("all", seed);
    REQUIRE(recs.size() > 30);
    for (const auto& r : recs) {
      INFO(r.suite << "/" << r.name << " slack " << r.slack << " " << r.detail);
      CHECK(r.passed);
      const std::string key = r.suite + "/" + r.name;
      if (seed == 1) first[key] = r.passed;
      else CHECK(first.at(key) == r.passed);
    }
  }
}

TEST_CASE("capacities suite reports one record per statement", "[verify]") {
  const auto recs = verify_capacities(1);
  std::set<std::string> names;
  for (const auto& r : recs) {
    CHECK(r.suite == "capacities");
    names.insert(r.name);
  }
  CHECK(names.size() == recs.size());
  CHECK(names.count("ppt_qubit_depolarizing") == 1);
}

TEST_CASE("unknown suite", "[verify]") { CHECK_THROWS_AS(run_suite("bogus", 1), std::invalid_argument); }

TEST_CASE("record JSON", "[verify]") {
  const auto j = to_json(CheckRecord{"s", "n", false, -kInf, "d"});
  CHECK(j["slack"] == "-inf");
  CHECK(j["passed"] == false);
}

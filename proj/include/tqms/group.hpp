#pragma once

// Finite groups as dense Cayley tables. Elements are indices 0..order-1.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqms/errors.hpp"

namespace tqms {

struct FiniteGroup {
  std::string label;
  std::size_t order = 0;
  std::vector<std::size_t> mul;  // row-major, mul[a*order+b] = a*b
  std::vector<std::size_t> inv;
  std::size_t identity = 0;

  std::size_t op(std::size_t a, std::size_t b) const { return mul[a * order + b]; }
  std::size_t inverse(std::size_t a) const { return inv[a]; }

  bool operator==(const FiniteGroup& o) const {
    return order == o.order && identity == o.identity && mul == o.mul;
  }
};

inline std::size_t max_group_order = 720;

struct GroupCheck {
  bool ok = true;
  std::string message;
};

/// Identity, inverse and associativity checks. Associativity is exhaustive up
/// to order 64 and sampled on 10^4 fixed-seed triples above.
inline GroupCheck validate_group(const FiniteGroup& g) {
  const std::size_t n = g.order;
  if (n == 0) return {false, "order is zero"};
  if (g.mul.size() != n * n || g.inv.size() != n) return {false, "table sizes"};
  if (g.identity >= n) return {false, "identity out of range"};
  for (std::size_t v : g.mul)
    if (v >= n) return {false, "mul entry out of range"};
  for (std::size_t a = 0; a < n; ++a) {
    if (g.op(g.identity, a) != a || g.op(a, g.identity) != a)
      return {false, "identity law fails at " + std::to_string(a)};
    if (g.inv[a] >= n || g.op(a, g.inv[a]) != g.identity || g.op(g.inv[a], a) != g.identity)
      return {false, "inverse law fails at " + std::to_string(a)};
  }
  auto assoc = [&](std::size_t a, std::size_t b, std::size_t c) {
    return g.op(g.op(a, b), c) == g.op(a, g.op(b, c));
  };
  if (n <= 64) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (!assoc(a, b, c)) return {false, "associativity fails"};
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int i = 0; i < 10000; ++i)
      if (!assoc(pick(rng), pick(rng), pick(rng))) return {false, "associativity fails"};
  }
  return {};
}

inline FiniteGroup make_cyclic(std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_cyclic: n must be positive");
  if (n > max_group_order) throw resource_limit_error("make_cyclic: order exceeds cap");
  FiniteGroup g;
  g.label = "Z" + std::to_string(n);
  g.order = n;
  g.mul.resize(n * n);
  g.inv.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) g.mul[a * n + b] = (a + b) % n;
    g.inv[a] = (n - a) % n;
  }
  return g;
}

/// Direct product; (a, b) is stored at index a*|H| + b.
inline FiniteGroup make_product(const FiniteGroup& g1, const FiniteGroup& g2) {
  const std::size_t n1 = g1.order, n2 = g2.order, n = n1 * n2;
  if (n > max_group_order) throw resource_limit_error("make_product: order exceeds cap");
  FiniteGroup g;
  g.label = g1.label + "x" + g2.label;
  g.order = n;
  g.mul.resize(n * n);
  g.inv.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t a1 = a / n2, a2 = a % n2;
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t b1 = b / n2, b2 = b % n2;
      g.mul[a * n + b] = g1.op(a1, b1) * n2 + g2.op(a2, b2);
    }
    g.inv[a] = g1.inv[a1] * n2 + g2.inv[a2];
  }
  g.identity = g1.identity * n2 + g2.identity;
  return g;
}

inline FiniteGroup make_power(const FiniteGroup& g, std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_power: n must be positive");
  FiniteGroup out = g;
  for (std::size_t i = 1; i < n; ++i) out = make_product(out, g);
  out.label = g.label + "^" + std::to_string(n);
  return out;
}

/// All permutations of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> permutations_lex(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::size_t symmetric_cap = 6;

/// S_n; composition (ab)(i) = a(b(i)).
inline FiniteGroup make_symmetric(std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_symmetric: n must be positive");
  if (n > symmetric_cap) throw resource_limit_error("make_symmetric: n exceeds cap");
  const auto perms = permutations_lex(n);
  const std::size_t m = perms.size();
  auto rank = [&](const std::vector<std::size_t>& p) {
    return static_cast<std::size_t>(
        std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
  };
  FiniteGroup g;
  g.label = "S" + std::to_string(n);
  g.order = m;
  g.mul.resize(m * m);
  g.inv.resize(m);
  std::vector<std::size_t> c(n);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      g.mul[a * m + b] = rank(c);
    }
    for (std::size_t i = 0; i < n; ++i) c[perms[a][i]] = i;
    g.inv[a] = rank(c);
  }
  g.identity = 0;
  return g;
}

/// Indices of transpositions in make_symmetric(n).
inline std::vector<std::size_t> transpositions(std::size_t n) {
  const auto perms = permutations_lex(n);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < perms.size(); ++k) {
    std::size_t moved = 0;
    for (std::size_t i = 0; i < n; ++i) moved += perms[k][i] != i;
    if (moved == 2) out.push_back(k);
  }
  return out;
}

inline std::vector<std::size_t> group_center(const FiniteGroup& g) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < g.order; ++a) {
    bool central = true;
    for (std::size_t b = 0; b < g.order && central; ++b) central = g.op(a, b) == g.op(b, a);
    if (central) out.push_back(a);
  }
  return out;
}

inline nlohmann::json to_json(const FiniteGroup& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t a = 0; a < g.order; ++a)
    rows.push_back(std::vector<std::size_t>(g.mul.begin() + a * g.order,
                                            g.mul.begin() + (a + 1) * g.order));
  return {{"label", g.label}, {"order", g.order}, {"mul", rows},
          {"inv", g.inv},     {"identity", g.identity}};
}

inline FiniteGroup group_from_json(const nlohmann::json& j) {
  FiniteGroup g;
  try {
    g.label = j.value("label", std::string("custom"));
    g.order = j.at("order").get<std::size_t>();
    if (g.order > max_group_order) throw resource_limit_error("group file: order exceeds cap");
    const auto& rows = j.at("mul");
    if (!rows.is_array() || rows.size() != g.order)
      throw std::invalid_argument("group file: mul must have order rows");
    for (const auto& r : rows) {
      if (!r.is_array() || r.size() != g.order)
        throw std::invalid_argument("group file: mul row length");
      for (const auto& v : r) g.mul.push_back(v.get<std::size_t>());
    }
    g.inv = j.at("inv").get<std::vector<std::size_t>>();
    g.identity = j.at("identity").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("group file: ") + e.what());
  }
  const auto chk = validate_group(g);
  if (!chk.ok) throw std::invalid_argument("group file: " + chk.message);
  return g;
}

}  // namespace tqms

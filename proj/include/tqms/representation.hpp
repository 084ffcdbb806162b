#pragma once

// Projective unitary representations of finite groups as explicit matrices.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqms/group.hpp"
#include "tqms/linalg.hpp"

namespace tqms {

inline std::size_t max_rep_dim = 64;

struct ProjectiveRep {
  FiniteGroup group;
  std::size_t dim = 0;
  std::vector<CMat> unitaries;  // indexed by element
  std::string label;

  const CMat& operator()(std::size_t g) const { return unitaries[g]; }
};

/// Cyclic shift X|k> = |k+1 mod n>.
inline CMat shift_matrix(std::size_t n) {
  CMat x = CMat::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) x((k + 1) % n, k) = 1.0;
  return x;
}

/// Clock Z = diag(1, w, ..., w^{n-1}), w = e^{2 pi i/n}.
inline CMat clock_matrix(std::size_t n) {
  CMat z = CMat::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) z(k, k) = std::polar(1.0, 2.0 * M_PI * k / n);
  return z;
}

inline CMat matrix_power(const CMat& a, std::size_t k) {
  CMat out = CMat::Identity(a.rows(), a.cols());
  for (std::size_t i = 0; i < k; ++i) out = out * a;
  return out;
}

/// Weyl system on C^n: element (i, j) of Z_n x Z_n maps to X^i Z^j.
inline ProjectiveRep weyl_rep(std::size_t n) {
  if (n < 2) throw std::invalid_argument("weyl_rep: n >= 2 required");
  if (n > max_rep_dim) throw resource_limit_error("weyl_rep: dimension exceeds cap");
  const FiniteGroup zn = make_cyclic(n);
  ProjectiveRep r;
  r.group = make_product(zn, zn);
  r.dim = n;
  r.label = "weyl(" + std::to_string(n) + ")";
  const CMat x = shift_matrix(n), z = clock_matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CMat xi = matrix_power(x, i);
    for (std::size_t j = 0; j < n; ++j) r.unitaries.push_back(xi * matrix_power(z, j));
  }
  return r;
}

/// Z_n acting on C^n by powers of the clock matrix.
inline ProjectiveRep char_rep(std::size_t n) {
  if (n < 2) throw std::invalid_argument("char_rep: n >= 2 required");
  if (n > max_rep_dim) throw resource_limit_error("char_rep: dimension exceeds cap");
  ProjectiveRep r;
  r.group = make_cyclic(n);
  r.dim = n;
  r.label = "char(" + std::to_string(n) + ")";
  const CMat z = clock_matrix(n);
  for (std::size_t j = 0; j < n; ++j) r.unitaries.push_back(matrix_power(z, j));
  return r;
}

inline std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap, const char* who) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    out *= base;
    if (out > cap) throw resource_limit_error(std::string(who) + ": dimension exceeds cap");
  }
  return out;
}

/// S_n permuting the factors of (C^d)^{(x)n}: factor k moves to slot pi(k).
inline ProjectiveRep perm_rep(std::size_t n, std::size_t d) {
  if (n < 1 || d < 1) throw std::invalid_argument("perm_rep: n, d >= 1 required");
  const std::size_t dim = checked_power(d, n, max_rep_dim, "perm_rep");
  ProjectiveRep r;
  r.group = make_symmetric(n);
  r.dim = dim;
  r.label = "perm(" + std::to_string(n) + "," + std::to_string(d) + ")";
  const auto perms = permutations_lex(n);
  std::vector<std::size_t> digits(n), moved(n);
  for (const auto& p : perms) {
    CMat u = CMat::Zero(dim, dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
      std::size_t rem = idx;
      for (std::size_t k = n; k-- > 0;) {
        digits[k] = rem % d;
        rem /= d;
      }
      for (std::size_t k = 0; k < n; ++k) moved[p[k]] = digits[k];
      std::size_t out = 0;
      for (std::size_t k = 0; k < n; ++k) out = out * d + moved[k];
      u(out, idx) = 1.0;
    }
    r.unitaries.push_back(u);
  }
  return r;
}

/// g -> u(g)^{(x)k}.
inline ProjectiveRep tensor_power(const ProjectiveRep& rep, std::size_t k) {
  if (k < 1) throw std::invalid_argument("tensor_power: k >= 1 required");
  const std::size_t dim = checked_power(rep.dim, k, max_rep_dim, "tensor_power");
  ProjectiveRep r;
  r.group = rep.group;
  r.dim = dim;
  r.label = rep.label + "^(x)" + std::to_string(k);
  for (const CMat& u : rep.unitaries) {
    CMat acc = u;
    for (std::size_t i = 1; i < k; ++i) acc = kron(acc, u);
    r.unitaries.push_back(acc);
  }
  return r;
}

/// omega(g, h) with u(g)u(h) = omega u(gh).
inline cplx cocycle(const ProjectiveRep& rep, std::size_t g, std::size_t h) {
  const CMat& ugh = rep.unitaries[rep.group.op(g, h)];
  return (ugh.adjoint() * rep.unitaries[g] * rep.unitaries[h]).trace() / static_cast<double>(rep.dim);
}

/// pi(x)(g) = u(g)^dagger x u(g).
inline CMat co_representation(const ProjectiveRep& rep, const CMat& x, std::size_t g) {
  return rep.unitaries[g].adjoint() * x * rep.unitaries[g];
}

struct RepCheck {
  bool ok = true;
  std::string message;
  double unitarity_error = 0;
  double cocycle_error = 0;
};

inline RepCheck validate(const ProjectiveRep& rep) {
  RepCheck out;
  const auto gchk = validate_group(rep.group);
  if (!gchk.ok) return {false, "group: " + gchk.message};
  if (rep.unitaries.size() != rep.group.order) return {false, "one unitary per element required"};
  const CMat id = CMat::Identity(rep.dim, rep.dim);
  for (const CMat& u : rep.unitaries) {
    if (static_cast<std::size_t>(u.rows()) != rep.dim || static_cast<std::size_t>(u.cols()) != rep.dim)
      return {false, "unitary has wrong shape"};
    out.unitarity_error = std::max(out.unitarity_error, max_abs(u.adjoint() * u - id));
  }
  if (out.unitarity_error > 1e-10) {
    out.ok = false;
    out.message = "non-unitary element";
    return out;
  }
  const std::size_t n = rep.group.order;
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const cplx w = cocycle(rep, g, h);
      const double err = std::max(std::abs(std::abs(w) - 1.0),
                                  max_abs(rep.unitaries[g] * rep.unitaries[h] -
                                          w * rep.unitaries[rep.group.op(g, h)]));
      out.cocycle_error = std::max(out.cocycle_error, err);
    }
  if (out.cocycle_error > 1e-9) {
    out.ok = false;
    out.message = "projectivity fails";
  }
  return out;
}

inline nlohmann::json to_json(const ProjectiveRep& rep) {
  nlohmann::json us = nlohmann::json::array();
  for (const CMat& u : rep.unitaries) {
    nlohmann::json m = nlohmann::json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      for (Eigen::Index j = 0; j < u.cols(); ++j) m.push_back({u(i, j).real(), u(i, j).imag()});
    us.push_back(m);
  }
  return {{"label", rep.label}, {"group", rep.group.label}, {"dim", rep.dim}, {"unitaries", us}};
}

}  // namespace tqms

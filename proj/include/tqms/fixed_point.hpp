#pragma once

// Fixed-point algebra N_fix = {u(g)}' and its block form (+)_k M_{n_k} (x) I_{d_k}.

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tqms/representation.hpp"

namespace tqms {

struct CommutantBasis {
  std::vector<CMat> basis;  // Hilbert-Schmidt orthonormal
  bool borderline = false;  // rank decision close to the threshold
};

inline double commutant_tolerance = 1e-8;

/// Commutant of a family of d x d matrices: kernel of X -> aX - Xa over the family.
inline CommutantBasis commutant_of(const std::vector<CMat>& ops, double tol = commutant_tolerance) {
  if (ops.empty()) throw std::invalid_argument("commutant_of: empty family");
  const Eigen::Index d = ops.front().rows();
  const CMat id = CMat::Identity(d, d);
  CMat stacked(static_cast<Eigen::Index>(ops.size()) * d * d, d * d);
  for (std::size_t k = 0; k < ops.size(); ++k)
    stacked.middleRows(static_cast<Eigen::Index>(k) * d * d, d * d) =
        sandwich_matrix(ops[k], id) - sandwich_matrix(id, ops[k]);
  const NullSpace ns = null_space(stacked, tol);
  CommutantBasis out;
  out.borderline = ns.borderline;
  for (Eigen::Index c = 0; c < ns.basis.cols(); ++c) out.basis.push_back(unvec(ns.basis.col(c), d));
  return out;
}

/// A small generating set, chosen greedily in element order.
inline std::vector<std::size_t> generating_set(const FiniteGroup& g) {
  std::vector<std::size_t> gens;
  std::vector<char> in(g.order, 0);
  in[g.identity] = 1;
  std::size_t count = 1;
  for (std::size_t cand = 0; cand < g.order && count < g.order; ++cand) {
    if (in[cand]) continue;
    gens.push_back(cand);
    std::deque<std::size_t> queue;
    for (std::size_t x = 0; x < g.order; ++x)
      if (in[x]) queue.push_back(x);
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t s : gens) {
        const std::size_t y = g.op(s, x);
        if (!in[y]) {
          in[y] = 1;
          ++count;
          queue.push_back(y);
        }
      }
    }
  }
  return gens;
}

/// Commutant of a representation. Phases drop out of the commutation
/// relation, so a generating set of the group suffices.
inline CommutantBasis commutant_basis(const ProjectiveRep& rep, double tol = commutant_tolerance) {
  std::vector<CMat> ops;
  for (std::size_t g : generating_set(rep.group)) ops.push_back(rep.unitaries[g]);
  if (ops.empty()) ops.push_back(CMat::Identity(rep.dim, rep.dim));
  return commutant_of(ops, tol);
}

struct BlockShape {
  std::size_t n = 1;  // multiplicity
  std::size_t d = 1;  // irrep dimension
  bool operator==(const BlockShape& o) const { return n == o.n && d == o.d; }
};

struct CommutantDecomposition {
  std::vector<BlockShape> blocks;
  CMat basis_change;  // columns form the block-adapted basis
  std::size_t commutant_dim = 0;
  double residual = 0;
  bool borderline = false;

  std::size_t max_n() const {
    std::size_t m = 0;
    for (const auto& b : blocks) m = std::max(m, b.n);
    return m;
  }
  std::size_t sum_n() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.n;
    return s;
  }
  std::size_t sum_n2() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += b.n * b.n;
    return s;
  }
};

inline double cluster_tolerance = 1e-6;

namespace detail {

/// Groups ascending eigenvalues into runs separated by more than tol.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> cluster(const RVec& ev, double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> runs;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev(i) - ev(i - 1) > tol) {
      runs.emplace_back(start, i - start);
      start = i;
    }
  }
  return runs;
}

inline CMat random_combination(const std::vector<CMat>& basis, std::mt19937_64& rng, bool hermitian) {
  std::normal_distribution<double> nd;
  CMat out = CMat::Zero(basis.front().rows(), basis.front().cols());
  for (const CMat& b : basis) out += cplx(nd(rng), nd(rng)) * b;
  return hermitian ? hermitian_part(out) : out;
}

inline CMat polar_unitary(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Distance of each rotated commutant element from the stated block form.
inline double block_residual(const std::vector<CMat>& basis, const CMat& w, const std::vector<BlockShape>& blocks) {
  double res = 0;
  for (const CMat& b : basis) {
    const CMat r = w.adjoint() * b * w;
    CMat model = CMat::Zero(r.rows(), r.cols());
    Eigen::Index off = 0;
    for (const auto& bl : blocks) {
      const Eigen::Index n = static_cast<Eigen::Index>(bl.n), d = static_cast<Eigen::Index>(bl.d);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index c = 0; c < n; ++c) {
          const cplx m = r.block(off + a * d, off + c * d, d, d).trace() / static_cast<double>(d);
          model.block(off + a * d, off + c * d, d, d) = m * CMat::Identity(d, d);
        }
      off += n * d;
    }
    res = std::max(res, max_abs(r - model));
  }
  return res;
}

struct Attempt {
  bool ok = false;
  std::string why;
  CommutantDecomposition dec;
};

inline Attempt try_decompose(const std::vector<CMat>& basis, Eigen::Index dim, std::mt19937_64& rng) {
  Attempt at;
  const std::size_t m = basis.size();

  // Center of the commutant: combinations commuting with every basis element.
  CMat cons(static_cast<Eigen::Index>(m) * dim * dim, static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const CMat c = basis[i] * basis[j] - basis[j] * basis[i];
      cons.block(static_cast<Eigen::Index>(j) * dim * dim, static_cast<Eigen::Index>(i), dim * dim, 1) = vec(c);
    }
  const NullSpace zc = null_space(cons, commutant_tolerance);
  std::vector<CMat> center;
  for (Eigen::Index c = 0; c < zc.basis.cols(); ++c) {
    CMat z = CMat::Zero(dim, dim);
    for (std::size_t i = 0; i < m; ++i) z += zc.basis(static_cast<Eigen::Index>(i), c) * basis[i];
    center.push_back(z);
  }
  if (center.empty()) {
    at.why = "empty center";
    return at;
  }

  const CMat zr = random_combination(center, rng, true);
  Eigen::SelfAdjointEigenSolver<CMat> zes(zr);
  const auto zruns = cluster(zes.eigenvalues(), cluster_tolerance);
  if (zruns.size() != center.size()) {
    at.why = "center eigenvalue clusters do not match center dimension";
    return at;
  }

  const CMat h = random_combination(basis, rng, true);
  const CMat y = random_combination(basis, rng, false);
  struct Block {
    BlockShape shape;
    CMat cols;
  };
  std::vector<Block> blocks;
  for (const auto& [start, len] : zruns) {
    const CMat v = zes.eigenvectors().middleCols(start, len);
    Eigen::SelfAdjointEigenSolver<CMat> hes(hermitian_part(v.adjoint() * h * v));
    const auto hruns = cluster(hes.eigenvalues(), cluster_tolerance);
    const std::size_t n = hruns.size();
    const Eigen::Index d = hruns.front().second;
    for (const auto& r : hruns)
      if (r.second != d) {
        at.why = "unequal cluster sizes inside a central block";
        return at;
      }
    std::vector<CMat> w;
    for (const auto& r : hruns) w.push_back(hes.eigenvectors().middleCols(r.first, r.second));
    const CMat yk = v.adjoint() * y * v;
    CMat cols(dim, len);
    for (std::size_t a = 0; a < n; ++a) {
      CMat wa = w[a];
      if (a > 0) wa = wa * polar_unitary(w[a].adjoint() * yk * w[0]);
      cols.middleCols(static_cast<Eigen::Index>(a) * d, d) = v * wa;
    }
    blocks.push_back({{n, static_cast<std::size_t>(d)}, cols});
  }

  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    if (a.shape.n != b.shape.n) return a.shape.n > b.shape.n;
    return a.shape.d > b.shape.d;
  });
  CMat w(dim, dim);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    w.middleCols(off, b.cols.cols()) = b.cols;
    off += b.cols.cols();
    at.dec.blocks.push_back(b.shape);
  }
  at.dec.basis_change = w;
  at.dec.commutant_dim = m;
  if (at.dec.sum_n2() != m) {
    at.why = "sum n_k^2 differs from commutant dimension";
    return at;
  }
  at.dec.residual = block_residual(basis, w, at.dec.blocks);
  if (at.dec.residual > 1e-8) {
    at.why = "rotated commutant not of block form (residual " + std::to_string(at.dec.residual) + ")";
    return at;
  }
  at.ok = true;
  return at;
}

}  // namespace detail

/// Block decomposition by random-element spectral clustering; up to five
/// retries with fresh seeds.
inline CommutantDecomposition decompose_commutant(const CommutantBasis& cb, Eigen::Index dim, std::uint64_t seed) {
  if (cb.basis.empty()) throw std::invalid_argument("decompose_commutant: empty basis");
  std::string why;
  for (int attempt = 0; attempt < 6; ++attempt) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
    auto at = detail::try_decompose(cb.basis, dim, rng);
    if (at.ok) {
      at.dec.borderline = cb.borderline;
      return at.dec;
    }
    why = at.why;
  }
  throw numerical_error("block_decomposition: failed after retries: " + why);
}

inline CommutantDecomposition block_decomposition(const ProjectiveRep& rep, std::uint64_t seed = 1) {
  return decompose_commutant(commutant_basis(rep), static_cast<Eigen::Index>(rep.dim), seed);
}

/// Projection residual between the range of E and the commutant span.
inline double range_mismatch(const CMat& projector, const CommutantBasis& cb) {
  const Eigen::Index dd = projector.rows();
  CMat q(dd, static_cast<Eigen::Index>(cb.basis.size()));
  for (std::size_t i = 0; i < cb.basis.size(); ++i) q.col(static_cast<Eigen::Index>(i)) = vec(cb.basis[i]);
  const CMat pq = q * q.adjoint();
  return max_abs(pq - projector);
}

inline nlohmann::json to_json(const CommutantDecomposition& dec) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : dec.blocks) blocks.push_back({b.n, b.d});
  return {{"blocks", blocks}, {"commutant_dim", dec.commutant_dim}};
}

}  // namespace tqms

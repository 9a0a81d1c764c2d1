#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "walkdist/graphwalk.hpp"
#include "walkdist/groups.hpp"
#include "walkdist/linalg.hpp"
#include "walkdist/repsfourier.hpp"

namespace walkdist {

constexpr std::size_t kMaxDenseTwisted = 2000;  // dense cap on n * dim(rho)

// ---------------------------------------------------------------------------
// Twisted adjacency operators. For a decorated graph and a representation
// rho, the operator is U A_rho with U = blockdiag(rho(t_v)) and
// A_rho = A (x) I. Blocks of U (A_rho U)^N are the walk sums: the (i,j)
// block equals the sum over length-N walks i -> j of rho(product).
// ---------------------------------------------------------------------------

struct TwistedOperator {
  std::size_t n = 0;       // vertices
  std::uint32_t k = 0;     // representation dimension
  AdjMatrix adjacency;
  std::vector<CMat> u_blocks;  // rho(t_v) per vertex
  bool dense = false;          // true when n*k <= the dense cap
  CMat u;        // blockdiag(rho(t_v))           (dense only)
  CMat a_rho;    // A (x) I_k                     (dense only)
  CMat product;  // U * A_rho                     (dense only)

  std::size_t dim() const { return n * k; }
};

// Matrix-free application of U A_rho and its adjoint.
class TwistedProductOperator final : public LinearOperator {
public:
  explicit TwistedProductOperator(const TwistedOperator& t) : t_(t) {}
  Eigen::Index dim() const override {
    return static_cast<Eigen::Index>(t_.dim());
  }
  void apply(const CVec& in, CVec& out) const override {
    const std::size_t n = t_.n, k = t_.k;
    out.resize(dim());
    CVec acc(k);
    for (std::size_t v = 0; v < n; ++v) {
      acc.setZero();
      for (std::size_t u = 0; u < n; ++u) {
        const std::int64_t w = t_.adjacency(v, u);
        if (w != 0) acc += double(w) * in.segment(u * k, k);
      }
      out.segment(v * k, k) = t_.u_blocks[v] * acc;
    }
  }
  void apply_adjoint(const CVec& in, CVec& out) const override {
    const std::size_t n = t_.n, k = t_.k;
    out = CVec::Zero(dim());
    CVec tmp(k);
    for (std::size_t v = 0; v < n; ++v) {
      tmp = t_.u_blocks[v].adjoint() * in.segment(v * k, k);
      for (std::size_t u = 0; u < n; ++u) {
        const std::int64_t w = t_.adjacency(v, u);
        if (w != 0) out.segment(u * k, k) += double(w) * tmp;
      }
    }
  }

private:
  const TwistedOperator& t_;
};

inline TwistedOperator build_twisted(const DecoratedGraph& graph,
                                     const FiniteGroup& group,
                                     const Representation& rho) {
  validate_graph(graph);
  TwistedOperator t;
  t.n = graph.size();
  t.k = rho.dim();
  t.adjacency = graph.adjacency;
  t.u_blocks.reserve(t.n);
  for (const auto& deco : graph.decorations)
    t.u_blocks.push_back(rho(group.index_of_checked(deco)));
  const std::size_t dim = t.n * t.k;
  t.dense = dim <= kMaxDenseTwisted;
  if (t.dense) {
    t.u = CMat::Zero(dim, dim);
    t.a_rho = CMat::Zero(dim, dim);
    for (std::size_t v = 0; v < t.n; ++v) {
      t.u.block(v * t.k, v * t.k, t.k, t.k) = t.u_blocks[v];
      for (std::size_t u = 0; u < t.n; ++u)
        if (t.adjacency(v, u) != 0)
          t.a_rho.block(v * t.k, u * t.k, t.k, t.k) =
              double(t.adjacency(v, u)) * CMat::Identity(t.k, t.k);
    }
    t.product = t.u * t.a_rho;
  }
  return t;
}

// (i,j) block of U (A_rho U)^N: the representation-valued walk sum.
// N = 0 gives rho(t_i) on the diagonal and zero off it; N = 1 gives
// A_{ij} rho(t_i) rho(t_j). Computed from the dense matrix power, so the
// state dimension must respect the dense cap.
inline CMat walk_sum_block(const DecoratedGraph& graph,
                           const FiniteGroup& group, const Representation& rho,
                           std::size_t i, std::size_t j, std::uint32_t n_steps) {
  if (i >= graph.size() || j >= graph.size())
    throw domain_error("walk-sum block endpoint out of range");
  TwistedOperator t = build_twisted(graph, group, rho);
  if (!t.dense)
    throw resource_error(
        "walk-sum blocks need the dense representation: n * dim(rho) = " +
        std::to_string(t.dim()) + " exceeds " +
        std::to_string(kMaxDenseTwisted));
  const std::size_t dim = t.dim();
  CMat base = t.a_rho * t.u;  // U (A U)^N = U * (A_rho U)^N
  CMat acc = CMat::Identity(dim, dim);
  std::uint32_t e = n_steps;
  while (e > 0) {
    if (e & 1u) acc = acc * base;
    base = base * base;
    e >>= 1u;
  }
  acc = t.u * acc;
  return acc.block(i * t.k, j * t.k, t.k, t.k);
}

// ---------------------------------------------------------------------------
// Spectral collapse of a single twisted operator against the Perron value.
// ---------------------------------------------------------------------------

struct CollapseGap {
  double twisted_radius = 0.0;
  double lambda_max = 0.0;
  double ratio = 0.0;      // twisted_radius / lambda_max
  bool certified = false;  // hypotheses hold, rho nontrivial, and ratio < 1
  SpectralReport report;
  HypothesisReport hypothesis;
  PerronData perron;
};

inline CollapseGap collapse_gap(const DecoratedGraph& graph,
                                const FiniteGroup& group,
                                const Representation& rho,
                                const RadiusOptions& options = {}) {
  CollapseGap out;
  out.perron = perron_data(graph.adjacency);
  out.lambda_max = out.perron.lambda_max;
  out.hypothesis = theorem_hypotheses(graph, group);
  TwistedOperator t = build_twisted(graph, group, rho);
  if (t.dense) {
    out.report = spectral_radius(t.product, options);
  } else {
    TwistedProductOperator op(t);
    out.report = spectral_radius(op, options);
  }
  out.twisted_radius = out.report.radius;
  out.ratio = out.lambda_max > 0 ? out.twisted_radius / out.lambda_max : 0.0;
  out.certified = out.hypothesis.holds() && !rho.trivial() && out.ratio < 1.0;
  if (out.hypothesis.holds() && !rho.trivial() && out.report.converged &&
      out.ratio >= 1.0 + 1e-9)
    throw numeric_error(
        "twisted spectral radius reached the Perron value although the "
        "collapse hypotheses hold; the estimate is inconsistent");
  return out;
}

// ---------------------------------------------------------------------------
// Regular transfer operator on functions over (vertex, group element):
//   (M f)(v, g) = sum_u A(u, v) f(u, g t_v^-1)
// restricted to the subspace of functions with zero mean in g for every
// fixed vertex. Its spectral radius against lambda_max gives the rate
// without any dual: the restriction block-diagonalizes over the nontrivial
// irreducible representations.
// ---------------------------------------------------------------------------

class RegularTransferOperator final : public LinearOperator {
public:
  RegularTransferOperator(const DecoratedGraph& graph,
                          const FiniteGroup& group, bool mean_zero = true)
      : adjacency_(graph.adjacency),
        n_(graph.size()),
        order_(group.order()),
        mean_zero_(mean_zero) {
    validate_graph(graph);
    const std::size_t states = n_ * order_;
    if (states > kMaxWalkStates)
      throw resource_error(
          "transfer state space n * |G| = " + std::to_string(states) +
          " exceeds the cap " + std::to_string(kMaxWalkStates));
    fwd_.reserve(n_);
    bwd_.reserve(n_);
    for (const auto& t : graph.decorations) {
      const std::uint32_t idx = group.index_of_checked(t);
      fwd_.push_back(group.right_translation_table(idx, true));
      bwd_.push_back(group.right_translation_table(idx, false));
    }
  }

  Eigen::Index dim() const override {
    return static_cast<Eigen::Index>(n_ * order_);
  }

  void apply(const CVec& in, CVec& out) const override {
    CVec x = in;
    if (mean_zero_) project(x);
    out = CVec::Zero(dim());
    for (std::size_t v = 0; v < n_; ++v) {
      const auto& tbl = fwd_[v];
      for (std::size_t u = 0; u < n_; ++u) {
        const std::int64_t w = adjacency_(u, v);
        if (w == 0) continue;
        for (std::size_t g = 0; g < order_; ++g)
          out[v * order_ + g] += double(w) * x[u * order_ + tbl[g]];
      }
    }
    if (mean_zero_) project(out);
  }

  void apply_adjoint(const CVec& in, CVec& out) const override {
    CVec x = in;
    if (mean_zero_) project(x);
    out = CVec::Zero(dim());
    for (std::size_t v = 0; v < n_; ++v) {
      const auto& tbl = bwd_[v];
      for (std::size_t u = 0; u < n_; ++u) {
        const std::int64_t w = adjacency_(u, v);
        if (w == 0) continue;
        for (std::size_t g = 0; g < order_; ++g)
          out[u * order_ + g] += double(w) * x[v * order_ + tbl[g]];
      }
    }
    if (mean_zero_) project(out);
  }

  // subtract the per-vertex mean over the group coordinate
  void project(CVec& x) const {
    for (std::size_t v = 0; v < n_; ++v) {
      Cplx mean = 0;
      for (std::size_t g = 0; g < order_; ++g) mean += x[v * order_ + g];
      mean /= double(order_);
      for (std::size_t g = 0; g < order_; ++g) x[v * order_ + g] -= mean;
    }
  }

private:
  AdjMatrix adjacency_;
  std::size_t n_, order_;
  bool mean_zero_;
  std::vector<std::vector<std::uint32_t>> fwd_, bwd_;
};

struct TransferRate {
  double radius = 0.0;      // spectral radius on the mean-zero subspace
  double lambda_max = 0.0;
  double ratio = 0.0;
  std::size_t state_dim = 0;
  bool certified = false;
  SpectralReport report;
  HypothesisReport hypothesis;
  PerronData perron;
};

inline TransferRate regular_transfer_rate(const DecoratedGraph& graph,
                                          const FiniteGroup& group,
                                          const RadiusOptions& options = {}) {
  TransferRate out;
  out.perron = perron_data(graph.adjacency);
  out.lambda_max = out.perron.lambda_max;
  out.hypothesis = theorem_hypotheses(graph, group);
  RegularTransferOperator op(graph, group, true);
  out.state_dim = static_cast<std::size_t>(op.dim());
  out.report = spectral_radius(op, options);
  out.radius = out.report.radius;
  out.ratio = out.lambda_max > 0 ? out.radius / out.lambda_max : 0.0;
  out.certified = out.hypothesis.holds() && out.ratio < 1.0;
  return out;
}

}  // namespace walkdist

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "walkdist/graphwalk.hpp"
#include "walkdist/groups.hpp"
#include "walkdist/linalg.hpp"
#include "walkdist/repsfourier.hpp"
#include "walkdist/spectral.hpp"

namespace walkdist {

constexpr std::size_t kMaxCayleyOrder = 100'000;

// A schedule is certified only when its shrinkage factor clears one by this
// margin. The compression norm is estimated from below, so values within the
// margin of one are treated as "no provable contraction" rather than as
// evidence of decay.
constexpr double kContractionCertMargin = 1e-9;

// (T f)(g) = sum_i w_i f(g t_i), optionally restricted to mean-zero
// functions. Covers Cayley adjacency sums (w_i = 1) and the weighted
// compression operator (w_i = x_i^2).
class WeightedTranslationOperator final : public LinearOperator {
public:
  WeightedTranslationOperator(const FiniteGroup& group,
                              const std::vector<std::uint32_t>& elems,
                              const std::vector<double>& weights,
                              bool mean_zero)
      : order_(group.order()), mean_zero_(mean_zero), weights_(weights) {
    if (elems.size() != weights.size())
      throw domain_error("one weight per translation element is required");
    fwd_.reserve(elems.size());
    bwd_.reserve(elems.size());
    for (auto e : elems) {
      fwd_.push_back(group.right_translation_table(e, false));
      bwd_.push_back(group.right_translation_table(e, true));
    }
  }

  Eigen::Index dim() const override {
    return static_cast<Eigen::Index>(order_);
  }
  void apply(const CVec& in, CVec& out) const override {
    run(in, out, fwd_);
  }
  void apply_adjoint(const CVec& in, CVec& out) const override {
    run(in, out, bwd_);
  }

private:
  void run(const CVec& in, CVec& out,
           const std::vector<std::vector<std::uint32_t>>& tables) const {
    CVec x = in;
    if (mean_zero_) project(x);
    out = CVec::Zero(dim());
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto& tbl = tables[i];
      const double w = weights_[i];
      for (std::size_t g = 0; g < order_; ++g) out[g] += w * x[tbl[g]];
    }
    if (mean_zero_) project(out);
  }
  void project(CVec& x) const {
    const Cplx mean = x.sum() / double(order_);
    for (Eigen::Index g = 0; g < x.size(); ++g) x[g] -= mean;
  }

  std::size_t order_;
  bool mean_zero_;
  std::vector<double> weights_;
  std::vector<std::vector<std::uint32_t>> fwd_, bwd_;
};

// ---------------------------------------------------------------------------
// Cayley Laplacian gap and the spectral-gap route to a displacement
// constant: for a symmetric generating set S, lambda_1 is the smallest
// Laplacian eigenvalue orthogonal to constants and
//   eps_lb = sqrt(2 lambda_1 / |S|)
// guarantees that every unitary representation without invariant vectors
// moves some s in S by at least eps_lb on every unit vector.
// ---------------------------------------------------------------------------

struct KazhdanEstimate {
  double lambda1 = 0.0;
  double epsilon_lb = 0.0;
  std::size_t set_size = 0;
  std::size_t group_order = 0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool from_pair_products = false;  // set when S was replaced by S^-1 S
};

namespace detail {

inline std::vector<std::uint32_t> dedupe_indices(
    std::vector<std::uint32_t> idx) {
  std::vector<std::uint32_t> out;
  for (auto i : idx)
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  return out;
}

}  // namespace detail

inline KazhdanEstimate cayley_gap(const FiniteGroup& group,
                                  const std::vector<GroupElement>& s,
                                  double tol = 1e-9,
                                  std::size_t max_iters = 100000) {
  if (group.order() < 2)
    throw domain_error("the spectral-gap estimate needs a group of order >= 2");
  if (group.order() > kMaxCayleyOrder)
    throw resource_error("Cayley gap capped at group order " +
                         std::to_string(kMaxCayleyOrder));
  if (s.empty()) throw domain_error("generating set is empty");
  std::vector<std::uint32_t> idx;
  idx.reserve(s.size());
  for (const auto& e : s) idx.push_back(group.index_of_checked(e));
  idx = detail::dedupe_indices(idx);
  for (auto i : idx)
    if (std::find(idx.begin(), idx.end(), group.inv_idx(i)) == idx.end())
      throw domain_error(
          "generating set must be closed under inverses; element " +
          group.label(i) + " lacks its inverse");
  const auto closure = subgroup_closure(group, idx);
  if (closure.size() < group.order())
    throw generation_error(
        "the set does not generate " + group.name() +
            ": it generates a proper subgroup of order " +
            std::to_string(closure.size()),
        closure.size());

  KazhdanEstimate out;
  out.set_size = idx.size();
  out.group_order = group.order();
  const double shift = double(idx.size());
  // K + |S| I restricted to mean-zero is PSD; its top eigenvalue is
  // mu_max + |S|, so lambda_1 = 2|S| - top.
  WeightedTranslationOperator k_op(
      group, idx, std::vector<double>(idx.size(), 1.0), true);
  class Shifted final : public LinearOperator {
  public:
    Shifted(const WeightedTranslationOperator& base, double shift)
        : base_(base), shift_(shift) {}
    Eigen::Index dim() const override { return base_.dim(); }
    void apply(const CVec& in, CVec& out) const override {
      base_.apply(in, out);
      out += shift_ * in;
      // keep the iterate inside the mean-zero subspace
      const Cplx mean = out.sum() / double(out.size());
      for (Eigen::Index g = 0; g < out.size(); ++g) out[g] -= mean;
    }
    void apply_adjoint(const CVec& in, CVec& out) const override {
      apply(in, out);  // Hermitian
    }

  private:
    const WeightedTranslationOperator& base_;
    double shift_;
  } shifted(k_op, shift);
  const auto top = hermitian_top_eigenvalue(shifted, tol, max_iters);
  out.lambda1 = 2.0 * shift - top.value;
  out.residual = top.residual;
  out.iterations = top.iterations;
  out.epsilon_lb =
      std::sqrt(std::max(0.0, 2.0 * out.lambda1 / double(idx.size())));
  out.epsilon_lb = std::min(out.epsilon_lb, 2.0);
  return out;
}

// Pair-separation estimate via S^-1 S: the displacement constant of the
// pair-product set guarantees that for unit v, w some generator satisfies
// ||rho(t_i) v - w|| >= eps_1 / 2. When S^-1 S generates a proper subgroup
// it has index two and the estimate refuses with the witness orders.
struct TPrimeEstimate {
  KazhdanEstimate gap;
  double epsilon1 = 0.0;
  double pair_separation = 0.0;  // eps_1 / 2
  std::vector<GroupElement> pair_products;
};

inline TPrimeEstimate tprime_epsilon(const FiniteGroup& group,
                                     const std::vector<GroupElement>& s,
                                     double tol = 1e-9,
                                     std::size_t max_iters = 100000) {
  if (s.empty()) throw domain_error("generating set is empty");
  std::vector<std::uint32_t> s_idx;
  for (const auto& e : s) s_idx.push_back(group.index_of_checked(e));
  s_idx = detail::dedupe_indices(s_idx);
  const auto s_closure = subgroup_closure(group, s_idx);
  if (s_closure.size() < group.order())
    throw generation_error(
        "the decoration set does not generate " + group.name() +
            ": it generates a proper subgroup of order " +
            std::to_string(s_closure.size()),
        s_closure.size());
  std::vector<std::uint32_t> pair_idx;
  for (auto a : s_idx)
    for (auto b : s_idx)
      pair_idx.push_back(group.mul_idx(group.inv_idx(a), b));
  pair_idx = detail::dedupe_indices(pair_idx);
  const auto pair_closure = subgroup_closure(group, pair_idx);
  if (pair_closure.size() < group.order())
    throw index_two_error(
        "the pair products S^-1 S generate a subgroup of order " +
            std::to_string(pair_closure.size()) + " and index " +
            std::to_string(group.order() / pair_closure.size()) + " in " +
            group.name() +
            "; the pair-separation estimate does not apply to this set",
        pair_closure.size(), group.order());

  TPrimeEstimate out;
  std::vector<GroupElement> pair_elems;
  pair_elems.reserve(pair_idx.size());
  for (auto i : pair_idx) pair_elems.push_back(group.element(i));
  out.pair_products = pair_elems;
  out.gap = cayley_gap(group, pair_elems, tol, max_iters);
  out.gap.from_pair_products = true;
  out.epsilon1 = out.gap.epsilon_lb;
  out.pair_separation = out.epsilon1 / 2.0;
  return out;
}

// ---------------------------------------------------------------------------
// Compression constants: d = || sum_v x_v^2 rho(t_v) ||_op with x the unit
// Perron vector. The regular-representation route takes the maximum over
// all nontrivial irreducibles at once by restricting to mean-zero.
// ---------------------------------------------------------------------------

inline double compression_d(const DecoratedGraph& graph,
                            const FiniteGroup& group, const Representation& rho,
                            const PerronData& perron) {
  validate_graph(graph);
  CMat acc = CMat::Zero(rho.dim(), rho.dim());
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const double x = perron.v_max[static_cast<Eigen::Index>(v)];
    acc += (x * x) * rho(group.index_of_checked(graph.decorations[v]));
  }
  return operator_norm(acc);
}

inline double compression_d_regular(const DecoratedGraph& graph,
                                    const FiniteGroup& group,
                                    const PerronData& perron,
                                    double rel_tol = 1e-10,
                                    std::size_t max_iters = 100000) {
  validate_graph(graph);
  if (group.order() > kMaxWalkStates)
    throw resource_error("compression operator capped at group order " +
                         std::to_string(kMaxWalkStates));
  std::vector<std::uint32_t> idx;
  std::vector<double> weights;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    idx.push_back(group.index_of_checked(graph.decorations[v]));
    const double x = perron.v_max[static_cast<Eigen::Index>(v)];
    weights.push_back(x * x);
  }
  WeightedTranslationOperator op(group, idx, weights, true);
  return operator_norm(op, rel_tol, max_iters);
}

// Displacement route: d <= 1 - x_min^2 eps_1^2 / 8.
inline double d_from_kazhdan(const PerronData& perron, double epsilon1) {
  if (epsilon1 < 0.0 || epsilon1 > 2.0)
    throw domain_error("separation constant must lie in [0, 2]");
  const double x_min = perron.v_max.minCoeff();
  return 1.0 - (x_min * x_min) * (epsilon1 * epsilon1) / 8.0;
}

// ---------------------------------------------------------------------------
// Two-step shrinkage factor. For unitary U and Hermitian A with ||A|| <= 1,
// top eigenspace compression ||P U P|| <= d < 1 and remaining spectrum
// within lambda < 1:
//   ||(U A)^2 v|| <= g(lambda, d) ||v||,   ||(U A)^(2m)|| <= g^m.
// alpha0 is the positive root of
//   lambda^2 a^2 + 2 (1 - lambda^2) d lambda a - (1 - lambda^2)(1 - d^2)/2 = 0
// and g is the larger of the two branch values (the branches cross at
// alpha0, where h(lambda, d, alpha0) equals the first branch squared).
// ---------------------------------------------------------------------------

struct ShrinkBound {
  double lambda = 0.0;
  double d = 0.0;
  double alpha0 = 0.0;             // +inf encoded as infinity() when lambda = 0
  double branch_a = 0.0;           // sqrt(1 - (1-l^2)(1-d^2)/2)
  double branch_b = 0.0;           // sqrt((1 + l^2 a0^2) / (1 + a0^2))
  double branch_b_variant = 0.0;   // sqrt((1 + a0 l) / (1 + a0)), for comparison
  double g = 0.0;                  // max(branch_a, branch_b)
  double h_at_alpha0 = 0.0;        // 1-(1-l^2)(1-d^2)+l^2 a0^2+2(1-l^2) d l a0
  double quad_residual = 0.0;      // defining quadratic evaluated at alpha0
};

inline double shrink_h(double lambda, double d, double alpha) {
  const double l2 = lambda * lambda;
  return 1.0 - (1.0 - l2) * (1.0 - d * d) + l2 * alpha * alpha +
         2.0 * (1.0 - l2) * d * lambda * alpha;
}

inline ShrinkBound shrink_bound(double lambda, double d) {
  if (!(lambda >= 0.0) || lambda >= 1.0)
    throw domain_error("shrink bound needs 0 <= lambda < 1");
  if (!(d >= 0.0) || d > 1.0)
    throw domain_error("shrink bound needs 0 <= d <= 1");
  ShrinkBound out;
  out.lambda = lambda;
  out.d = d;
  const double l2 = lambda * lambda;
  out.branch_a = std::sqrt(1.0 - (1.0 - l2) * (1.0 - d * d) / 2.0);
  if (lambda == 0.0) {
    // A equals its top-space projection: two steps compress by exactly d.
    out.alpha0 = std::numeric_limits<double>::infinity();
    out.branch_b = d;
    out.branch_b_variant = d;
    out.g = d;
    out.h_at_alpha0 = d * d;
    out.quad_residual = 0.0;
    return out;
  }
  out.alpha0 =
      ((1.0 - l2) / lambda) *
      (-d + std::sqrt(d * d + (1.0 - d * d) / (2.0 * (1.0 - l2))));
  const double a0 = out.alpha0;
  out.branch_b = std::sqrt((1.0 + l2 * a0 * a0) / (1.0 + a0 * a0));
  out.branch_b_variant = std::sqrt((1.0 + a0 * lambda) / (1.0 + a0));
  out.g = std::max(out.branch_a, out.branch_b);
  out.h_at_alpha0 = shrink_h(lambda, d, a0);
  out.quad_residual = l2 * a0 * a0 + 2.0 * (1.0 - l2) * d * lambda * a0 -
                      (1.0 - l2) * (1.0 - d * d) / 2.0;
  return out;
}

// ---------------------------------------------------------------------------
// Certified deviation schedule: combines the Perron data, a compression
// constant (exact or displacement-derived), and the shrinkage factor into
//   deviation(N) <= 2 g^floor(N/2) lambda_max^N / |W_N|,
// optionally with the exact DP deviations alongside.
// ---------------------------------------------------------------------------

struct ScheduleRow {
  std::uint32_t n = 0;
  double opnorm_bound = 0.0;    // g^floor(N/2)
  double deviation_bound = 0.0;
  double observed = 0.0;        // exact DP max deviation (when computed)
  bool observed_valid = false;
};

struct EffectiveRate {
  ShrinkBound shrink;
  double lambda = 0.0;      // |lambda_2| / lambda_max
  double lambda_max = 0.0;
  double d = 0.0;
  bool d_is_exact = false;  // exact compression vs displacement bound
  bool certified = false;
  std::string failure;      // reason when not certified
  std::vector<ScheduleRow> schedule;
  HypothesisReport hypothesis;
  PerronData perron;
};

namespace detail {

inline double log_big(const cpp_int& x) {
  if (x <= 0) throw domain_error("logarithm of a non-positive walk count");
  const std::size_t bits = boost::multiprecision::msb(x);
  if (bits <= 900) return std::log(x.convert_to<double>());
  const std::size_t shift = bits - 900;
  const cpp_int y = x >> shift;
  return std::log(y.convert_to<double>()) + double(shift) * std::log(2.0);
}

inline bool is_symmetric_adjacency(const AdjMatrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != a(j, i)) return false;
  return true;
}

inline EffectiveRate effective_rate_impl(const DecoratedGraph& graph,
                                         const FiniteGroup& group,
                                         std::size_t start, std::size_t end,
                                         std::uint32_t n_lo, std::uint32_t n_hi,
                                         double d, bool d_is_exact,
                                         bool with_observed) {
  EffectiveRate out;
  out.perron = perron_data(graph.adjacency);
  out.lambda_max = out.perron.lambda_max;
  out.lambda = out.perron.ratio;
  out.hypothesis = theorem_hypotheses(graph, group);
  out.d = d;
  out.d_is_exact = d_is_exact;
  if (!is_symmetric_adjacency(graph.adjacency)) {
    out.failure = "the shrinkage bound needs a symmetric adjacency matrix";
  } else if (out.lambda >= 1.0) {
    throw numeric_error("second eigenvalue estimate reached the Perron value");
  } else if (d >= 1.0 - kContractionCertMargin) {
    // The compression estimate converges from below, so a value this close
    // to one cannot witness a genuine contraction: an instance whose true
    // compression equals one (two decorations acting identically on some
    // vector of a nontrivial representation) would otherwise be certified
    // on rounding dust.
    out.shrink = shrink_bound(out.lambda, 1.0);
    out.failure =
        "compression gives no contraction (d = 1 at working precision): the "
        "decorations do not separate the top eigenspace";
  } else if (!out.hypothesis.holds()) {
    out.shrink = shrink_bound(out.lambda, std::min(d, 1.0));
    out.failure = out.hypothesis.detail;
  } else {
    out.shrink = shrink_bound(out.lambda, d);
    out.certified = out.shrink.g < 1.0 - kContractionCertMargin;
    if (!out.certified)
      out.failure = "shrinkage factor is not below one at working precision";
  }
  const double g = out.shrink.g;
  std::vector<DeviationPoint> observed;
  if (with_observed)
    observed = deviation_series(graph, group, start, end, n_lo, n_hi,
                                WalkMode::exact);
  for (std::uint32_t n = n_lo; n <= n_hi; ++n) {
    ScheduleRow row;
    row.n = n;
    row.opnorm_bound = std::pow(g, n / 2);
    const cpp_int walks = walk_count(graph.adjacency, start, end, n);
    if (walks > 0) {
      const double log_g = g > 0.0 ? std::log(g)
                                   : -std::numeric_limits<double>::infinity();
      const double half_steps = double(n / 2);
      const double log_bound =
          std::log(2.0) + (half_steps > 0.0 ? half_steps * log_g : 0.0) +
          double(n) * std::log(out.lambda_max) - log_big(walks);
      row.deviation_bound = std::exp(log_bound);
    } else {
      row.deviation_bound = std::numeric_limits<double>::quiet_NaN();
    }
    if (with_observed) {
      const auto& p = observed[n - n_lo];
      row.observed = p.d_inf;
      row.observed_valid = true;
    }
    out.schedule.push_back(row);
  }
  return out;
}

}  // namespace detail

// Exact-compression route: d from the regular compression operator.
inline EffectiveRate effective_rate(const DecoratedGraph& graph,
                                    const FiniteGroup& group,
                                    std::size_t start, std::size_t end,
                                    std::uint32_t n_lo, std::uint32_t n_hi,
                                    bool with_observed = true) {
  const PerronData perron = perron_data(graph.adjacency);
  const double d = compression_d_regular(graph, group, perron);
  return detail::effective_rate_impl(graph, group, start, end, n_lo, n_hi, d,
                                     true, with_observed);
}

// Displacement route: d bounded via the separation constant eps_1.
inline EffectiveRate effective_rate_from_separation(
    const DecoratedGraph& graph, const FiniteGroup& group, std::size_t start,
    std::size_t end, std::uint32_t n_lo, std::uint32_t n_hi, double epsilon1,
    bool with_observed = true) {
  const PerronData perron = perron_data(graph.adjacency);
  const double d = d_from_kazhdan(perron, epsilon1);
  return detail::effective_rate_impl(graph, group, start, end, n_lo, n_hi, d,
                                     false, with_observed);
}

}  // namespace walkdist

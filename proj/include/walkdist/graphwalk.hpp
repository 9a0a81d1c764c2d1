#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "walkdist/errors.hpp"
#include "walkdist/groups.hpp"
#include "walkdist/linalg.hpp"
#include "walkdist/rng.hpp"

namespace walkdist {

using boost::multiprecision::cpp_rational;
using AdjMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

constexpr std::size_t kMaxWalkStates = 1'000'000;  // cap on n * |Gamma|
constexpr std::size_t kMaxPrimitivityDim = 4096;

// A finite directed multigraph with one group element attached to each
// vertex. Adjacency entries are edge multiplicities. Undirected inputs are
// symmetrized at parse time, so the library core always sees a directed
// matrix.
struct DecoratedGraph {
  AdjMatrix adjacency;
  std::vector<GroupElement> decorations;

  std::size_t size() const { return static_cast<std::size_t>(adjacency.rows()); }
};

inline void validate_graph(const DecoratedGraph& g) {
  if (g.adjacency.rows() == 0)
    throw domain_error("graph needs at least one vertex");
  if (g.adjacency.rows() != g.adjacency.cols())
    throw domain_error("adjacency matrix must be square");
  for (Eigen::Index i = 0; i < g.adjacency.rows(); ++i)
    for (Eigen::Index j = 0; j < g.adjacency.cols(); ++j)
      if (g.adjacency(i, j) < 0)
        throw domain_error("adjacency entries are edge multiplicities and "
                           "must be nonnegative");
  if (g.decorations.size() != g.size())
    throw domain_error("graph needs exactly one decoration per vertex");
}

// ---------------------------------------------------------------------------
// Primitivity: least m with A^m entrywise positive, checked up to the
// Wielandt bound n^2 - 2n + 2. A refusal names a surviving zero entry.
// ---------------------------------------------------------------------------

struct PrimitivityCertificate {
  bool primitive = false;
  std::uint32_t exponent = 0;        // least m with A^m > 0 (when primitive)
  std::uint32_t wielandt_bound = 0;
  int zero_row = -1, zero_col = -1;  // witness entry (when not primitive)
};

namespace detail {

struct BoolMatrix {
  std::size_t n = 0, words = 0;
  std::vector<std::uint64_t> rows;  // n rows of `words` 64-bit words

  explicit BoolMatrix(std::size_t n)
      : n(n), words((n + 63) / 64), rows(n * words, 0) {}
  void set(std::size_t i, std::size_t j) {
    rows[i * words + j / 64] |= (1ull << (j % 64));
  }
  bool get(std::size_t i, std::size_t j) const {
    return (rows[i * words + j / 64] >> (j % 64)) & 1u;
  }
  bool all_ones() const {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!get(i, j)) return false;
    return true;
  }
};

// C = A * B over the boolean semiring.
inline BoolMatrix bool_mul(const BoolMatrix& a, const BoolMatrix& b) {
  BoolMatrix c(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k)
      if (a.get(i, k))
        for (std::size_t w = 0; w < a.words; ++w)
          c.rows[i * c.words + w] |= b.rows[k * b.words + w];
  return c;
}

}  // namespace detail

inline PrimitivityCertificate validate_primitive(const AdjMatrix& a) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  if (n == 0 || a.rows() != a.cols())
    throw domain_error("primitivity check needs a nonempty square matrix");
  if (n > kMaxPrimitivityDim)
    throw resource_error("primitivity check capped at dimension " +
                         std::to_string(kMaxPrimitivityDim));
  PrimitivityCertificate cert;
  cert.wielandt_bound =
      static_cast<std::uint32_t>(n * n - 2 * n + 2);
  detail::BoolMatrix b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) > 0) b.set(i, j);
  detail::BoolMatrix p = b;
  for (std::uint32_t m = 1; m <= cert.wielandt_bound; ++m) {
    if (m > 1) p = detail::bool_mul(p, b);
    if (p.all_ones()) {
      cert.primitive = true;
      cert.exponent = m;
      return cert;
    }
  }
  for (std::size_t i = 0; i < n && cert.zero_row < 0; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!p.get(i, j)) {
        cert.zero_row = static_cast<int>(i);
        cert.zero_col = static_cast<int>(j);
        break;
      }
  return cert;
}

inline void require_primitive(const AdjMatrix& a) {
  const auto cert = validate_primitive(a);
  if (!cert.primitive)
    throw domain_error(
        "adjacency matrix is not primitive: entry (" +
        std::to_string(cert.zero_row) + "," + std::to_string(cert.zero_col) +
        ") of A^" + std::to_string(cert.wielandt_bound) +
        " is still zero at the Wielandt bound");
}

// ---------------------------------------------------------------------------
// Perron data: dominant eigenvalue/eigenvector by power iteration with
// Collatz-Wielandt brackets, |second eigenvalue| by deflation.
// ---------------------------------------------------------------------------

struct PerronData {
  double lambda_max = 0.0;
  RVec v_max;              // unit right Perron vector, entrywise positive
  double lambda2_abs = 0.0;
  double ratio = 0.0;      // |lambda_2| / lambda_max
  double residual = 0.0;   // ||A v - lambda v|| at acceptance
  std::size_t iterations = 0;
  SpectralReport lambda2_report;
};

namespace detail {

struct PerronVector {
  double lambda;
  RVec v;
  double residual;
  std::size_t iterations;
};

inline PerronVector perron_vector(const RMat& a, double tol,
                                  std::size_t max_iters) {
  const Eigen::Index n = a.rows();
  RVec v = RVec::Constant(n, 1.0 / std::sqrt(double(n)));
  PerronVector out{0.0, v, 0.0, 0};
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    RVec w = a * v;
    const double lambda = v.dot(w);  // Rayleigh quotient, v unit
    const double res = (w - lambda * v).norm();
    out.iterations = iter;
    if (res <= tol * std::max(std::abs(lambda), 1.0)) {
      out.lambda = lambda;
      out.v = v;
      out.residual = res;
      return out;
    }
    const double nw = w.norm();
    if (nw == 0.0)
      throw numeric_error("power iteration collapsed to the zero vector");
    v = w / nw;
  }
  throw numeric_error(
      "dominant-eigenvalue iteration exceeded its step cap before reaching "
      "tolerance");
}

}  // namespace detail

inline PerronData perron_data(const AdjMatrix& a, double tol = 1e-10,
                              std::size_t max_iters = 100000) {
  require_primitive(a);
  const Eigen::Index n = a.rows();
  const RMat ad = a.cast<double>();
  PerronData out;
  if (n == 1) {
    out.lambda_max = ad(0, 0);
    out.v_max = RVec::Constant(1, 1.0);
    out.lambda2_abs = 0.0;
    out.ratio = 0.0;
    out.residual = 0.0;
    out.lambda2_report.method = RadiusMethod::exact;
    out.lambda2_report.converged = true;
    return out;
  }
  auto right = detail::perron_vector(ad, tol, max_iters);
  auto left = detail::perron_vector(ad.transpose(), tol, max_iters);
  out.lambda_max = right.lambda;
  out.v_max = right.v.cwiseAbs();  // Perron vector is positive; fix the sign
  out.residual = right.residual;
  out.iterations = right.iterations;
  // Hotelling deflation removes the simple dominant eigenvalue, leaving
  // the rest of the spectrum intact.
  RVec u = left.v.cwiseAbs();
  const double scale = u.dot(out.v_max);
  RMat deflated =
      ad - (right.lambda / scale) * (out.v_max * u.transpose());
  out.lambda2_report = spectral_radius(CMat(deflated.cast<Cplx>()));
  out.lambda2_abs = out.lambda2_report.radius;
  out.ratio = out.lambda_max > 0 ? out.lambda2_abs / out.lambda_max : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Walk-product distributions. A walk of length N is a vertex sequence
// v_0 .. v_N with edges (multiplicity-weighted); its product is the
// left-to-right product of all N+1 vertex decorations. The layer recurrence
// multiplies by the arriving vertex's decoration:
//   c_0(v, g) = [v == start][g == t_start]
//   c_N(v, g) = sum_u A(u, v) c_{N-1}(u, g * t_v^{-1})
// ---------------------------------------------------------------------------

enum class WalkMode { exact, floating };

struct WalkDistribution {
  FiniteGroup group;
  std::size_t start = 0, end = 0;
  std::uint32_t length = 0;
  WalkMode mode = WalkMode::exact;
  std::vector<cpp_int> counts;  // exact mode: walk counts per element
  std::vector<double> probs;    // normalized distribution (both modes)
  cpp_int total = 0;            // exact mode: total walks = (A^N)_{start,end}
};

namespace detail {

template <class Num>
class WalkLayers {
public:
  WalkLayers(const DecoratedGraph& graph, const FiniteGroup& group,
             std::size_t start)
      : graph_(graph), group_(group), n_(graph.size()),
        order_(group.order()) {
    validate_graph(graph);
    if (start >= n_) throw domain_error("start vertex out of range");
    const std::size_t states = n_ * order_;
    if (states > kMaxWalkStates)
      throw resource_error(
          "walk state space n * |G| = " + std::to_string(states) +
          " exceeds the cap " + std::to_string(kMaxWalkStates));
    deco_idx_.reserve(n_);
    for (const auto& t : graph.decorations)
      deco_idx_.push_back(group.index_of_checked(t));
    tables_.reserve(n_);
    for (std::size_t v = 0; v < n_; ++v)
      tables_.push_back(group.right_translation_table(deco_idx_[v], true));
    cur_.assign(states, Num(0));
    cur_[start * order_ + deco_idx_[start]] = Num(1);
  }

  void advance() {
    std::vector<Num> nxt(cur_.size(), Num(0));
    for (std::size_t v = 0; v < n_; ++v) {
      const auto& tbl = tables_[v];
      for (std::size_t u = 0; u < n_; ++u) {
        const std::int64_t w = graph_.adjacency(u, v);
        if (w == 0) continue;
        const Num wn(w);
        const Num* src = cur_.data() + u * order_;
        Num* dst = nxt.data() + v * order_;
        for (std::size_t g = 0; g < order_; ++g) dst[g] += wn * src[tbl[g]];
      }
    }
    cur_.swap(nxt);
    ++length_;
    if constexpr (std::is_same_v<Num, double>) {
      // keep float layers in range; slices are renormalized anyway
      double mx = 0.0;
      for (double x : cur_) mx = std::max(mx, x);
      if (mx > 1e100 || (mx > 0.0 && mx < 1e-100))
        for (double& x : cur_) x /= mx;
    }
  }

  std::uint32_t length() const { return length_; }
  const Num* slice(std::size_t end) const { return cur_.data() + end * order_; }
  std::size_t order() const { return order_; }

private:
  DecoratedGraph graph_;
  FiniteGroup group_;
  std::size_t n_, order_;
  std::uint32_t length_ = 0;
  std::vector<std::uint32_t> deco_idx_;
  std::vector<std::vector<std::uint32_t>> tables_;
  std::vector<Num> cur_;
};

}  // namespace detail

// Incremental walk DP: advance one step at a time and read off the
// distribution at any end vertex, so a whole range of N costs one pass.
class WalkEngine {
public:
  WalkEngine(const DecoratedGraph& graph, const FiniteGroup& group,
             std::size_t start, WalkMode mode)
      : group_(group), mode_(mode) {
    if (mode == WalkMode::exact)
      exact_.emplace(graph, group, start);
    else
      floating_.emplace(graph, group, start);
    start_ = start;
  }

  void advance() {
    if (exact_)
      exact_->advance();
    else
      floating_->advance();
  }

  std::uint32_t length() const {
    return exact_ ? exact_->length() : floating_->length();
  }

  WalkDistribution distribution(std::size_t end) const {
    const std::size_t order = group_.order();
    WalkDistribution out{group_, start_, end, length(), mode_, {}, {}, 0};
    out.probs.assign(order, 0.0);
    if (exact_) {
      const cpp_int* s = exact_->slice(end);
      out.counts.assign(s, s + order);
      for (const auto& c : out.counts) out.total += c;
      if (out.total > 0)
        for (std::size_t g = 0; g < order; ++g)
          out.probs[g] =
              cpp_rational(out.counts[g], out.total).convert_to<double>();
    } else {
      const double* s = floating_->slice(end);
      double total = 0.0;
      for (std::size_t g = 0; g < order; ++g) total += s[g];
      if (total > 0.0)
        for (std::size_t g = 0; g < order; ++g) out.probs[g] = s[g] / total;
    }
    return out;
  }

private:
  FiniteGroup group_;
  WalkMode mode_;
  std::size_t start_ = 0;
  std::optional<detail::WalkLayers<cpp_int>> exact_;
  std::optional<detail::WalkLayers<double>> floating_;
};

inline WalkDistribution walk_distribution(const DecoratedGraph& graph,
                                          const FiniteGroup& group,
                                          std::size_t start, std::size_t end,
                                          std::uint32_t length,
                                          WalkMode mode = WalkMode::exact) {
  if (end >= graph.size()) throw domain_error("end vertex out of range");
  WalkEngine engine(graph, group, start, mode);
  for (std::uint32_t k = 0; k < length; ++k) engine.advance();
  return engine.distribution(end);
}

struct Deviations {
  double d_inf = 0.0;  // max_g |F(g) - 1/|G||
  double tv = 0.0;     // (1/2) sum_g |F(g) - 1/|G||
  bool exact_zero = false;
};

inline Deviations distance_to_uniform(const WalkDistribution& dist) {
  Deviations dev;
  const std::size_t order = dist.group.order();
  if (dist.mode == WalkMode::exact) {
    if (dist.total == 0)
      throw domain_error("distribution is empty: no walks of this length "
                         "between the chosen vertices");
    cpp_rational dmax = 0, sum = 0;
    const cpp_rational uniform(1, order);
    for (const auto& c : dist.counts) {
      cpp_rational r = cpp_rational(c, dist.total) - uniform;
      if (r < 0) r = -r;
      sum += r;
      if (r > dmax) dmax = r;
    }
    dev.exact_zero = (dmax == 0);
    dev.d_inf = dmax.convert_to<double>();
    dev.tv = (sum / 2).convert_to<double>();
  } else {
    const double uniform = 1.0 / double(order);
    double sum = 0.0;
    for (double p : dist.probs) {
      const double r = std::abs(p - uniform);
      sum += r;
      dev.d_inf = std::max(dev.d_inf, r);
    }
    dev.tv = sum / 2.0;
    dev.exact_zero = (dev.d_inf == 0.0);
  }
  return dev;
}

// Exact number of length-N walks: (A^N)_{ij} over the integers.
inline cpp_int walk_count(const AdjMatrix& a, std::size_t i, std::size_t j,
                          std::uint32_t n_steps) {
  const std::uint32_t n = static_cast<std::uint32_t>(a.rows());
  BigMatrix base{n, std::vector<cpp_int>(std::size_t(n) * n)};
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t c = 0; c < n; ++c)
      base.entries[r * n + c] = a(r, c);
  BigMatrix acc = BigMatrix::identity(n);
  std::uint32_t e = n_steps;
  while (e > 0) {
    if (e & 1u) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1u;
  }
  return acc.entries[i * n + j];
}

// ---------------------------------------------------------------------------
// Exact uniform sampling of walks via backward counts.
// ---------------------------------------------------------------------------

// Vertex sequence (length N+1) of a walk drawn exactly uniformly from all
// length-N walks from `start` to `end`, multiplicities included.
inline std::vector<std::size_t> sample_walk_uniform(const DecoratedGraph& graph,
                                                    std::size_t start,
                                                    std::size_t end,
                                                    std::uint32_t length,
                                                    Rng& rng) {
  validate_graph(graph);
  const std::size_t n = graph.size();
  if (start >= n || end >= n) throw domain_error("walk endpoint out of range");
  // b[k][v] = number of length-(N-k) walks from v to end
  std::vector<std::vector<cpp_int>> b(length + 1,
                                      std::vector<cpp_int>(n, 0));
  b[length][end] = 1;
  for (std::uint32_t k = length; k-- > 0;)
    for (std::size_t v = 0; v < n; ++v) {
      cpp_int acc = 0;
      for (std::size_t w = 0; w < n; ++w)
        if (graph.adjacency(v, w) != 0)
          acc += cpp_int(graph.adjacency(v, w)) * b[k + 1][w];
      b[k][v] = std::move(acc);
    }
  if (b[0][start] == 0)
    throw domain_error("no walks of length " + std::to_string(length) +
                       " from vertex " + std::to_string(start) +
                       " to vertex " + std::to_string(end));
  std::vector<std::size_t> walk;
  walk.reserve(length + 1);
  walk.push_back(start);
  std::size_t v = start;
  for (std::uint32_t k = 0; k < length; ++k) {
    cpp_int r = rng.big_below(b[k][v]);
    std::size_t chosen = n;  // sentinel; the loop below always assigns
    for (std::size_t w = 0; w < n; ++w) {
      if (graph.adjacency(v, w) == 0) continue;
      const cpp_int weight = cpp_int(graph.adjacency(v, w)) * b[k + 1][w];
      if (r < weight) {
        chosen = w;
        break;
      }
      r -= weight;
    }
    if (chosen == n)
      throw numeric_error("walk sampler exhausted its weights");
    walk.push_back(chosen);
    v = chosen;
  }
  return walk;
}

// Group product collected along a sampled walk (left-to-right).
inline GroupElement walk_product(const DecoratedGraph& graph,
                                 const std::vector<std::size_t>& walk) {
  if (walk.empty()) throw domain_error("empty walk has no product");
  GroupElement acc = graph.decorations[walk[0]];
  for (std::size_t k = 1; k < walk.size(); ++k)
    acc = mul(acc, graph.decorations[walk[k]]);
  return acc;
}

// ---------------------------------------------------------------------------
// Measured decay rate of the deviation from uniform.
// ---------------------------------------------------------------------------

struct DeviationPoint {
  std::uint32_t n = 0;
  double d_inf = 0.0;
  double tv = 0.0;
  bool exact_zero = false;
  cpp_int walks = 0;  // exact mode only
};

inline std::vector<DeviationPoint> deviation_series(
    const DecoratedGraph& graph, const FiniteGroup& group, std::size_t start,
    std::size_t end, std::uint32_t n_lo, std::uint32_t n_hi,
    WalkMode mode = WalkMode::exact) {
  if (n_lo > n_hi) throw domain_error("empty walk-length range");
  if (end >= graph.size()) throw domain_error("end vertex out of range");
  WalkEngine engine(graph, group, start, mode);
  std::vector<DeviationPoint> out;
  for (std::uint32_t k = 0; k < n_lo; ++k) engine.advance();
  for (std::uint32_t n = n_lo; n <= n_hi; ++n) {
    if (n > n_lo) engine.advance();
    const auto dist = engine.distribution(end);
    const auto dev = distance_to_uniform(dist);
    out.push_back({n, dev.d_inf, dev.tv, dev.exact_zero, dist.total});
  }
  return out;
}

struct RateFit {
  bool collapsed = false;      // a deviation hit exact zero at finite N
  std::uint32_t collapse_n = 0;
  double slope = 0.0;          // least-squares slope of log d_inf against N
  double intercept = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

inline RateFit measured_rate(const std::vector<DeviationPoint>& series) {
  RateFit fit;
  for (const auto& p : series) {
    if (p.exact_zero) {
      fit.collapsed = true;
      fit.collapse_n = p.n;
      return fit;
    }
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : series)
    if (p.d_inf > 0.0) pts.push_back({double(p.n), std::log(p.d_inf)});
  fit.points = pts.size();
  if (pts.size() < 2)
    throw domain_error("rate fit needs at least two positive deviations");
  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / pts.size(), my = sy / pts.size();
  double sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw domain_error("rate fit needs at least two distinct N");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (auto& [x, y] : pts) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / pts.size());
  return fit;
}

inline RateFit measured_rate(const DecoratedGraph& graph,
                             const FiniteGroup& group, std::size_t start,
                             std::size_t end, std::uint32_t n_lo,
                             std::uint32_t n_hi,
                             WalkMode mode = WalkMode::exact) {
  return measured_rate(
      deviation_series(graph, group, start, end, n_lo, n_hi, mode));
}

// Distribution of the image of the walk product under an element map
// (e.g. a quotient map). Exact counts push forward exactly.
template <class Map>
WalkDistribution push_forward(const WalkDistribution& dist,
                              const FiniteGroup& target, Map&& map) {
  WalkDistribution out{target, dist.start, dist.end, dist.length, dist.mode,
                       {},     {},         dist.total};
  out.probs.assign(target.order(), 0.0);
  if (dist.mode == WalkMode::exact)
    out.counts.assign(target.order(), 0);
  const FiniteGroup& src = dist.group;
  for (std::uint32_t i = 0; i < src.order(); ++i) {
    const std::uint32_t j = target.index_of_checked(map(src.element(i)));
    if (dist.mode == WalkMode::exact) out.counts[j] += dist.counts[i];
    out.probs[j] += dist.probs[i];
  }
  if (dist.mode == WalkMode::exact && out.total > 0)
    for (std::uint32_t j = 0; j < target.order(); ++j)
      out.probs[j] = cpp_rational(out.counts[j], out.total).convert_to<double>();
  return out;
}

// ---------------------------------------------------------------------------
// Equidistribution hypotheses for a decorated graph over a group:
//  (a) the decorations generate the whole group;
//  (b) no nontrivial one-dimensional representation takes a single value on
//      all decorations. Equivalently, the pair products t_j^-1 t_i together
//      with the derived subgroup generate the whole group.
// ---------------------------------------------------------------------------

enum class HypothesisStatus { holds, fails_generation, fails_onedim };

struct HypothesisReport {
  HypothesisStatus status = HypothesisStatus::holds;
  std::uint64_t group_order = 0;
  std::uint64_t generated_order = 0;  // order of <decorations>
  std::uint64_t onedim_order = 0;     // order of <pair products, derived>
  std::string detail;

  bool holds() const { return status == HypothesisStatus::holds; }
};

inline HypothesisReport theorem_hypotheses(const DecoratedGraph& graph,
                                           const FiniteGroup& group) {
  validate_graph(graph);
  HypothesisReport rep;
  rep.group_order = group.order();
  std::vector<std::uint32_t> deco;
  deco.reserve(graph.size());
  for (const auto& t : graph.decorations)
    deco.push_back(group.index_of_checked(t));

  const auto generated = subgroup_closure(group, deco);
  rep.generated_order = generated.size();
  if (generated.size() < group.order()) {
    rep.status = HypothesisStatus::fails_generation;
    rep.detail = "decorations generate a proper subgroup of order " +
                 std::to_string(generated.size()) + " inside " + group.name() +
                 " of order " + std::to_string(group.order());
    return rep;
  }

  std::vector<std::uint32_t> seeds;
  for (auto i : deco)
    for (auto j : deco) seeds.push_back(group.mul_idx(group.inv_idx(j), i));
  for (auto d : derived_subgroup(group)) seeds.push_back(d);
  const auto onedim = subgroup_closure(group, seeds);
  rep.onedim_order = onedim.size();
  if (onedim.size() < group.order()) {
    rep.status = HypothesisStatus::fails_onedim;
    rep.detail =
        "a nontrivial one-dimensional representation is constant on the "
        "decorations: pair products and commutators generate a subgroup of "
        "order " +
        std::to_string(onedim.size()) + " inside " + group.name() +
        " of order " + std::to_string(group.order());
    return rep;
  }
  rep.detail = "decorations generate the group and no nontrivial "
               "one-dimensional representation is constant on them";
  return rep;
}

}  // namespace walkdist

#pragma once

// Shared oracles and helpers for the test suite: brute-force walk
// enumeration, random unitaries, chi-square uniformity checks, and
// slow-but-sure polynomial oracles.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "walkdist/walkdist.hpp"

namespace testsupport {

using namespace walkdist;

// Every walk of length n from start to end, counted with edge
// multiplicities, bucketed by the walk product. Exponential in n; keep
// n and the graph small.
inline std::map<std::uint32_t, cpp_int> brute_force_products(
    const DecoratedGraph& graph, const FiniteGroup& group, std::size_t start,
    std::size_t end, std::uint32_t n) {
  std::map<std::uint32_t, cpp_int> counts;
  const std::size_t verts = graph.size();
  std::vector<std::uint32_t> deco;
  for (const auto& d : graph.decorations)
    deco.push_back(group.index_of_checked(d));
  struct Frame {
    std::size_t vertex;
    std::uint32_t product;
    cpp_int weight;
    std::uint32_t steps;
  };
  std::vector<Frame> stack;
  stack.push_back({start, deco[start], 1, 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.steps == n) {
      if (f.vertex == end) counts[f.product] += f.weight;
      continue;
    }
    for (std::size_t next = 0; next < verts; ++next) {
      const auto mult = graph.adjacency(static_cast<Eigen::Index>(f.vertex),
                                        static_cast<Eigen::Index>(next));
      if (mult == 0) continue;
      stack.push_back({next, group.mul_idx(f.product, deco[next]),
                       f.weight * mult, f.steps + 1});
    }
  }
  return counts;
}

// Haar-ish random unitary: QR of a seeded complex Gaussian matrix with the
// R diagonal phases absorbed, so the distribution is exactly unitary.
inline CMat random_unitary(Eigen::Index n, Rng& rng) {
  CMat z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      z(i, j) = Cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Cplx d = r(i, i);
    const double a = std::abs(d);
    const Cplx phase = a > 0 ? d / a : Cplx(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

// One-sided chi-square tail check via the Wilson-Hilferty cube-root
// normal approximation; z = 3.0902 is the 0.001 tail.
inline bool chi_square_ok(const std::vector<double>& observed,
                          const std::vector<double>& expected,
                          double z_limit = 3.0902) {
  double chi2 = 0.0;
  std::size_t dof = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    const double diff = observed[i] - expected[i];
    chi2 += diff * diff / expected[i];
    ++dof;
  }
  if (dof <= 1) return true;
  const double k = double(dof - 1);
  const double t = std::cbrt(chi2 / k);
  const double mean = 1.0 - 2.0 / (9.0 * k);
  const double sd = std::sqrt(2.0 / (9.0 * k));
  return (t - mean) / sd < z_limit;
}

// Characteristic polynomial over Z/p by evaluation and Lagrange
// interpolation; needs p > degree. Ascending coefficients.
inline std::vector<std::uint64_t> charpoly_interpolated(const ModMatrix& m) {
  const std::uint64_t p = m.p;
  const std::size_t n = m.n;
  if (p <= n) throw domain_error("interpolation oracle needs p > n");
  auto det_mod = [&](std::uint64_t x) {
    // det(xI - M) by Gaussian elimination over Z/p
    std::vector<std::uint64_t> a(m.entries.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        a[i * n + j] = (i == j)
                           ? (x + p - m.entries[i * n + j] % p) % p
                           : (p - m.entries[i * n + j] % p) % p;
    std::uint64_t det = 1;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      while (pivot < n && a[pivot * n + col] == 0) ++pivot;
      if (pivot == n) return std::uint64_t(0);
      if (pivot != col) {
        for (std::size_t j = 0; j < n; ++j)
          std::swap(a[pivot * n + j], a[col * n + j]);
        det = (det * (p - 1)) % p;
      }
      det = (det * a[col * n + col]) % p;
      const std::uint64_t inv = polymod::inverse_mod(a[col * n + col], p);
      for (std::size_t row = col + 1; row < n; ++row) {
        const std::uint64_t factor = (a[row * n + col] * inv) % p;
        if (factor == 0) continue;
        for (std::size_t j = col; j < n; ++j)
          a[row * n + j] =
              (a[row * n + j] + p - (factor * a[col * n + j]) % p) % p;
      }
    }
    return det;
  };
  // values at x = 0..n, then Lagrange interpolation
  std::vector<std::uint64_t> xs(n + 1), ys(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = i % p;
    ys[i] = det_mod(xs[i]);
  }
  std::vector<std::uint64_t> coeffs(n + 1, 0);
  for (std::size_t i = 0; i <= n; ++i) {
    // basis polynomial prod_{j!=i} (x - x_j) / (x_i - x_j)
    std::vector<std::uint64_t> basis = {1};
    std::uint64_t denom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == i) continue;
      std::vector<std::uint64_t> next(basis.size() + 1, 0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] = (next[k + 1] + basis[k]) % p;
        next[k] = (next[k] + basis[k] * ((p - xs[j]) % p)) % p;
      }
      basis = next;
      denom = (denom * ((xs[i] + p - xs[j]) % p)) % p;
    }
    const std::uint64_t scale =
        (ys[i] * polymod::inverse_mod(denom, p)) % p;
    for (std::size_t k = 0; k < basis.size(); ++k)
      coeffs[k] = (coeffs[k] + basis[k] * scale) % p;
  }
  return coeffs;
}

// Exhaustive irreducibility oracle over Z/p: try every monic divisor of
// degree 1..deg/2. Exponential in degree; keep p and deg small.
inline bool irreducible_exhaustive(const PolyModP& f) {
  if (f.is_zero() || f.degree() == 0) return false;
  const std::size_t d = f.degree();
  if (d == 1) return true;
  const std::uint64_t p = f.p;
  for (std::size_t deg = 1; deg <= d / 2; ++deg) {
    // enumerate monic polynomials of this degree
    std::vector<std::uint64_t> c(deg, 0);
    while (true) {
      std::vector<std::uint64_t> full = c;
      full.push_back(1);
      const PolyModP candidate = polymod::make(p, full);
      if (polymod::mod(f, candidate).is_zero()) return false;
      std::size_t k = 0;
      while (k < deg && ++c[k] == p) c[k++] = 0;
      if (k == deg) break;
    }
  }
  return true;
}

inline DecoratedGraph make_graph(const std::vector<std::int64_t>& adjacency,
                                 const std::vector<GroupElement>& decorations) {
  DecoratedGraph g;
  const auto n = static_cast<Eigen::Index>(decorations.size());
  g.adjacency = AdjMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g.adjacency(i, j) = adjacency[static_cast<std::size_t>(i * n + j)];
  g.decorations = decorations;
  return g;
}

}  // namespace testsupport

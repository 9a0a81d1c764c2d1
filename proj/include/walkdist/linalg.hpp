#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "walkdist/errors.hpp"
#include "walkdist/rng.hpp"

namespace walkdist {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Matrix-free operator interface. Iterative estimators only ever touch an
// operator through apply/apply_adjoint, so structured state spaces (walk
// transfer operators, Kronecker blocks) never materialize dense matrices.
class LinearOperator {
public:
  virtual ~LinearOperator() = default;
  virtual Eigen::Index dim() const = 0;
  virtual void apply(const CVec& in, CVec& out) const = 0;
  virtual void apply_adjoint(const CVec& in, CVec& out) const = 0;
};

class DenseOperator final : public LinearOperator {
public:
  explicit DenseOperator(CMat m) : m_(std::move(m)) {}
  Eigen::Index dim() const override { return m_.rows(); }
  void apply(const CVec& in, CVec& out) const override { out = m_ * in; }
  void apply_adjoint(const CVec& in, CVec& out) const override {
    out = m_.adjoint() * in;
  }
  const CMat& matrix() const { return m_; }

private:
  CMat m_;
};

// k-fold composition M^k, applied factor by factor.
class PowerOperator final : public LinearOperator {
public:
  PowerOperator(const LinearOperator& base, unsigned k) : base_(base), k_(k) {}
  Eigen::Index dim() const override { return base_.dim(); }
  void apply(const CVec& in, CVec& out) const override {
    CVec cur = in;
    for (unsigned i = 0; i < k_; ++i) {
      base_.apply(cur, out);
      cur.swap(out);
    }
    out = cur;
  }
  void apply_adjoint(const CVec& in, CVec& out) const override {
    CVec cur = in;
    for (unsigned i = 0; i < k_; ++i) {
      base_.apply_adjoint(cur, out);
      cur.swap(out);
    }
    out = cur;
  }

private:
  const LinearOperator& base_;
  unsigned k_;
};

inline double frobenius_norm(const CMat& m) { return m.norm(); }

namespace detail {

constexpr std::uint64_t kIterationSeed = 0x5DEECE66DF00C257ull;

inline CVec seeded_vector(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Cplx(rng.normal(), rng.normal());
  return v;
}

inline CMat seeded_matrix(Eigen::Index n, Eigen::Index cols,
                          std::uint64_t seed) {
  Rng rng(seed);
  CMat m(n, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      m(i, j) = Cplx(rng.normal(), rng.normal());
  return m;
}

// Largest singular value of a matrix with at most two rows/columns, in
// closed form via the eigenvalues of M*M.
inline double small_operator_norm(const CMat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  const CMat b = m.adjoint() * m;
  if (b.rows() == 1) return std::sqrt(std::abs(b(0, 0)));
  const double tr = b.trace().real();
  const double det = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)).real();
  const double disc = std::max(tr * tr - 4.0 * det, 0.0);
  return std::sqrt(std::max(0.5 * (tr + std::sqrt(disc)), 0.0));
}

}  // namespace detail

// Operator norm (largest singular value) by power iteration on T*T.
// Convergence is declared on the Hermitian eigenvalue residual, which
// bounds the eigenvalue error directly. Throws numeric_error when the
// iteration cap is reached before the tolerance.
inline double operator_norm(const LinearOperator& op, double rel_tol = 1e-10,
                            std::size_t max_iters = 100000,
                            std::uint64_t seed = detail::kIterationSeed) {
  const Eigen::Index n = op.dim();
  if (n == 0) return 0.0;
  CVec v, w(n), u = CVec::Zero(n);
  for (int attempt = 0; attempt < 3; ++attempt) {
    v = detail::seeded_vector(n, seed + static_cast<std::uint64_t>(attempt));
    const double nv = v.norm();
    if (nv == 0.0) continue;
    v /= nv;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
      op.apply(v, w);
      op.apply_adjoint(w, u);
      const double lambda = std::real(v.dot(u));
      if (!std::isfinite(lambda))
        throw numeric_error("operator norm iteration produced a non-finite value");
      const double res = (u - lambda * v).norm();
      if (res <= rel_tol * std::max(lambda, 0.0) && lambda >= 0.0)
        return std::sqrt(std::max(lambda, 0.0));
      const double nu = u.norm();
      if (nu == 0.0) break;  // v fell in the kernel; reseed
      v = u / nu;
    }
    if (u.norm() != 0.0)
      throw numeric_error(
          "operator norm power iteration exceeded its step cap before "
          "reaching tolerance");
  }
  return 0.0;  // every restart died in the kernel: the operator is zero
}

inline double operator_norm(const CMat& m, double rel_tol = 1e-10,
                            std::size_t max_iters = 100000) {
  if (m.rows() <= 2 && m.cols() <= 2) return detail::small_operator_norm(m);
  return operator_norm(DenseOperator(m), rel_tol, max_iters);
}

struct HermitianTop {
  double value = 0.0;
  CVec vector;
  double residual = 0.0;
  std::size_t iterations = 0;
};

// Top eigenvalue of a Hermitian positive-semidefinite operator by power
// iteration with a Rayleigh-quotient residual stop. The residual bounds the
// eigenvalue error directly for Hermitian operators.
inline HermitianTop hermitian_top_eigenvalue(
    const LinearOperator& op, double tol = 1e-9,
    std::size_t max_iters = 100000,
    std::uint64_t seed = detail::kIterationSeed) {
  const Eigen::Index n = op.dim();
  HermitianTop out;
  if (n == 0) return out;
  CVec v = detail::seeded_vector(n, seed);
  CVec w(n);
  op.apply(v, w);  // first apply also projects v into the operator's range
  double nv = w.norm();
  if (nv == 0.0)
    return out;  // operator annihilates a generic vector: top eigenvalue 0
  v = w / nv;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    op.apply(v, w);
    const double lambda = std::real(v.dot(w));
    if (!std::isfinite(lambda))
      throw numeric_error("eigenvalue iteration produced a non-finite value");
    const double res = (w - lambda * v).norm();
    out.iterations = iter;
    if (res <= tol * std::max(std::abs(lambda), 1.0)) {
      out.value = lambda;
      out.vector = v;
      out.residual = res;
      return out;
    }
    const double nw = w.norm();
    if (nw == 0.0) {
      out.value = 0.0;
      out.vector = v;
      out.residual = 0.0;
      return out;
    }
    v = w / nw;
  }
  throw numeric_error(
      "Hermitian eigenvalue iteration exceeded its step cap before reaching "
      "tolerance");
}

enum class RadiusMethod { exact, power, gelfand };

struct GelfandSample {
  unsigned k = 0;
  double value = 0.0;  // ||M^k||^(1/k); always >= the true radius
};

struct SpectralReport {
  double radius = 0.0;
  RadiusMethod method = RadiusMethod::power;
  bool converged = false;
  // Set when the iteration did not converge and `radius` is a Gelfand
  // sample, i.e. only an upper bound for the spectral radius.
  bool upper_bound_only = false;
  double residual = 0.0;       // ||M y - theta y|| for the accepted Ritz pair
  std::size_t iterations = 0;
  std::vector<GelfandSample> gelfand;
};

struct RadiusOptions {
  int block = 6;               // subspace width; dims <= block are one-shot exact
  std::size_t max_iters = 100000;
  double rel_tol = 1e-10;      // Ritz residual tolerance, relative to theta
  std::vector<unsigned> gelfand_ks = {8, 16, 32};
  std::uint64_t seed = detail::kIterationSeed;
};

namespace detail {

inline void append_gelfand(const LinearOperator& op, const RadiusOptions& opt,
                           SpectralReport& report) {
  for (unsigned k : opt.gelfand_ks) {
    PowerOperator pk(op, k);
    try {
      const double nk = operator_norm(pk, 1e-8, 20000, opt.seed + k);
      report.gelfand.push_back({k, std::pow(nk, 1.0 / k)});
    } catch (const numeric_error&) {
      // sample skipped; the remaining samples still give the cross-check
    }
  }
}

}  // namespace detail

// Spectral radius via block subspace iteration with Rayleigh-Ritz. A block
// wider than one resolves complex-conjugate dominant pairs and dominant
// eigenvalues with multiplicity, which single-vector power iteration cannot.
// Gelfand samples ||M^k||^(1/k) are reported alongside as an independent
// cross-check; if the iteration fails to converge (e.g. a defective dominant
// eigenvalue), the smallest Gelfand sample is returned, flagged as an upper
// bound only.
inline SpectralReport spectral_radius(const LinearOperator& op,
                                      const RadiusOptions& opt = {}) {
  SpectralReport report;
  const Eigen::Index n = op.dim();
  if (n == 0) {
    report.method = RadiusMethod::exact;
    report.converged = true;
    return report;
  }
  const Eigen::Index b =
      std::min<Eigen::Index>(std::max(opt.block, 1), n);
  CMat q = detail::seeded_matrix(n, b, opt.seed);
  {
    Eigen::HouseholderQR<CMat> qr(q);
    q = qr.householderQ() * CMat::Identity(n, b);
  }
  CMat z(n, b);
  CVec col(n), out(n);
  double prev_theta = -1.0;
  for (std::size_t iter = 1; iter <= opt.max_iters; ++iter) {
    for (Eigen::Index j = 0; j < b; ++j) {
      col = q.col(j);
      op.apply(col, out);
      z.col(j) = out;
    }
    report.iterations = iter;
    if (z.norm() == 0.0) {
      // M^iter annihilates a generic block: nilpotent action, radius 0.
      report.radius = 0.0;
      report.method = RadiusMethod::power;
      report.converged = true;
      report.residual = 0.0;
      break;
    }
    const CMat h = q.adjoint() * z;
    Eigen::ComplexEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success)
      throw numeric_error("dense eigensolve failed inside radius iteration");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < b; ++i)
      if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[best]))
        best = i;
    const Cplx theta_c = es.eigenvalues()[best];
    const double theta = std::abs(theta_c);
    if (!std::isfinite(theta))
      throw numeric_error("radius iteration produced a non-finite value");
    const CVec s = es.eigenvectors().col(best);
    const double residual = (z * s - theta_c * (q * s)).norm();
    report.radius = theta;
    report.residual = residual;
    if (residual <= opt.rel_tol * std::max(theta, 1e-300)) {
      report.method = RadiusMethod::power;
      report.converged = true;
      break;
    }
    prev_theta = theta;
    Eigen::HouseholderQR<CMat> qr(z);
    q = qr.householderQ() * CMat::Identity(n, b);
  }
  (void)prev_theta;
  detail::append_gelfand(op, opt, report);
  if (!report.converged) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : report.gelfand) best = std::min(best, g.value);
    if (std::isfinite(best)) {
      report.radius = best;
      report.method = RadiusMethod::gelfand;
      report.upper_bound_only = true;
    } else {
      throw numeric_error(
          "spectral radius estimation failed to converge and no Gelfand "
          "sample was available");
    }
  } else {
    // A converged Ritz value is an eigenvalue of a nearby matrix, which for
    // ill-conditioned (defective) spectra can overshoot the true radius by
    // roughly eps^(1/n). Each ||M^k||^(1/k) is an upper bound for the radius
    // outright, so the smaller of the two estimates is always the better one.
    for (const auto& g : report.gelfand)
      if (g.value < report.radius) report.radius = g.value;
  }
  return report;
}

inline SpectralReport spectral_radius(const CMat& m,
                                      const RadiusOptions& opt = {}) {
  if (m.rows() != m.cols())
    throw domain_error("spectral radius requires a square matrix");
  const Eigen::Index n = m.rows();
  if (n <= 2) {
    SpectralReport report;
    report.method = RadiusMethod::exact;
    report.converged = true;
    if (n == 1) {
      report.radius = std::abs(m(0, 0));
    } else if (n == 2) {
      const Cplx tr = m(0, 0) + m(1, 1);
      const Cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      const Cplx disc = std::sqrt(tr * tr - 4.0 * det);
      report.radius = std::max(std::abs((tr + disc) / 2.0),
                               std::abs((tr - disc) / 2.0));
    }
    DenseOperator op(m);
    detail::append_gelfand(op, opt, report);
    return report;
  }
  return spectral_radius(DenseOperator(m), opt);
}

}  // namespace walkdist

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "walkdist/groups.hpp"
#include "walkdist/linalg.hpp"

namespace walkdist {

// A unitary representation stored as one matrix per enumerated element.
class Representation {
public:
  Representation(FiniteGroup group, std::string name, std::vector<CMat> mats,
                 bool trivial)
      : group_(std::move(group)),
        name_(std::move(name)),
        mats_(std::move(mats)),
        trivial_(trivial) {
    if (mats_.size() != group_.order())
      throw domain_error("representation needs one matrix per group element");
    dim_ = static_cast<std::uint32_t>(mats_.empty() ? 0 : mats_[0].rows());
  }

  const CMat& operator()(std::uint32_t element_index) const {
    return mats_[element_index];
  }
  std::uint32_t dim() const { return dim_; }
  bool trivial() const { return trivial_; }
  const std::string& name() const { return name_; }
  const FiniteGroup& group() const { return group_; }

private:
  FiniteGroup group_;
  std::string name_;
  std::vector<CMat> mats_;
  bool trivial_;
  std::uint32_t dim_ = 0;
};

inline Representation trivial_representation(const FiniteGroup& g) {
  std::vector<CMat> mats(g.order(), CMat::Constant(1, 1, Cplx(1.0, 0.0)));
  return Representation(g, "triv", std::move(mats), true);
}

struct UnitaryDual {
  FiniteGroup group;
  std::vector<Representation> reps;  // trivial representation first
};

inline std::size_t plancherel_sum(const UnitaryDual& dual) {
  std::size_t s = 0;
  for (const auto& r : dual.reps) s += std::size_t(r.dim()) * r.dim();
  return s;
}

namespace detail {

constexpr double kTau = 6.283185307179586476925286766559;

inline CMat rotation2(double theta) {
  CMat m(2, 2);
  const double c = std::cos(theta), s = std::sin(theta);
  m << Cplx(c, 0), Cplx(-s, 0), Cplx(s, 0), Cplx(c, 0);
  return m;
}

inline CMat scalar1(Cplx z) { return CMat::Constant(1, 1, z); }

}  // namespace detail

// Complete unitary dual for the abelian families (all characters) and the
// dihedral family (characters plus the rotation/reflection 2-dim series).
// Unsupported families raise a capability error naming the alternative:
// transfer-operator estimates on the regular representation need no dual.
inline UnitaryDual unitary_dual(const FiniteGroup& g) {
  const auto& info = g.info();
  UnitaryDual dual{g, {}};
  const std::uint32_t order = static_cast<std::uint32_t>(g.order());

  if (info.family == GroupFamily::cyclic) {
    const std::uint32_t m = info.m;
    for (std::uint32_t k = 0; k < m; ++k) {
      std::vector<CMat> mats(order);
      for (std::uint32_t i = 0; i < order; ++i) {
        const auto& e = std::get<CyclicElem>(g.element(i));
        const double ang =
            detail::kTau * (double(k) * double(e.residue) / double(m));
        mats[i] = detail::scalar1(std::polar(1.0, ang));
      }
      dual.reps.emplace_back(g, "chi" + std::to_string(k), std::move(mats),
                             k == 0);
    }
    return dual;
  }

  if (info.family == GroupFamily::product) {
    const auto& moduli = info.moduli;
    std::vector<std::uint32_t> k(moduli.size(), 0);
    for (std::uint32_t rep = 0; rep < order; ++rep) {
      std::vector<CMat> mats(order);
      for (std::uint32_t i = 0; i < order; ++i) {
        const auto& e = std::get<ProductElem>(g.element(i));
        double ang = 0.0;
        for (std::size_t j = 0; j < moduli.size(); ++j)
          ang += double(k[j]) * double(e.residues[j]) / double(moduli[j]);
        mats[i] = detail::scalar1(std::polar(1.0, detail::kTau * ang));
      }
      std::string name = "chi(";
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (j) name += ' ';
        name += std::to_string(k[j]);
      }
      name += ")";
      const bool trivial =
          std::all_of(k.begin(), k.end(), [](std::uint32_t v) { return v == 0; });
      dual.reps.emplace_back(g, std::move(name), std::move(mats), trivial);
      for (std::size_t j = moduli.size(); j-- > 0;) {
        if (++k[j] < moduli[j]) break;
        k[j] = 0;
      }
    }
    return dual;
  }

  if (info.family == GroupFamily::dihedral) {
    const std::uint32_t m = info.m;
    auto character = [&](auto f, std::string name, bool trivial) {
      std::vector<CMat> mats(order);
      for (std::uint32_t i = 0; i < order; ++i) {
        const auto& e = std::get<DihedralElem>(g.element(i));
        mats[i] = detail::scalar1(Cplx(f(e), 0.0));
      }
      dual.reps.emplace_back(g, std::move(name), std::move(mats), trivial);
    };
    character([](const DihedralElem&) { return 1.0; }, "triv", true);
    character([](const DihedralElem& e) { return e.flip ? -1.0 : 1.0; },
              "sgn_f", false);
    if (m % 2 == 0 && m > 1) {
      character(
          [](const DihedralElem& e) { return e.rot % 2 ? -1.0 : 1.0; },
          "sgn_r", false);
      character(
          [](const DihedralElem& e) {
            return (e.rot + e.flip) % 2 ? -1.0 : 1.0;
          },
          "sgn_rf", false);
    }
    // rho_h(r^a f^b) = R(tau h a / m) F^b for 0 < h < m/2
    CMat flip(2, 2);
    flip << Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(-1, 0);
    for (std::uint32_t h = 1; 2 * h < m; ++h) {
      std::vector<CMat> mats(order);
      for (std::uint32_t i = 0; i < order; ++i) {
        const auto& e = std::get<DihedralElem>(g.element(i));
        CMat r = detail::rotation2(detail::kTau * double(h) *
                                   double(e.rot) / double(m));
        mats[i] = e.flip ? CMat(r * flip) : r;
      }
      dual.reps.emplace_back(g, "rho" + std::to_string(h), std::move(mats),
                             false);
    }
    return dual;
  }

  throw capability_error(
      "unitary dual is implemented for cyclic, product-of-cyclics, and "
      "dihedral groups; for " +
      g.name() +
      " use the regular-representation route (transfer-operator estimates), "
      "which requires no dual");
}

// f-hat(rho) = sum_gamma f(gamma) rho(gamma)
inline CMat fourier_transform(const CVec& f, const Representation& rho) {
  if (f.size() != static_cast<Eigen::Index>(rho.group().order()))
    throw domain_error("function length does not match the group order");
  CMat acc = CMat::Zero(rho.dim(), rho.dim());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    acc += f[i] * rho(static_cast<std::uint32_t>(i));
  return acc;
}

struct FourierData {
  std::vector<CMat> coeffs;  // aligned with UnitaryDual::reps
};

inline FourierData fourier_transform(const CVec& f, const UnitaryDual& dual) {
  FourierData out;
  out.coeffs.reserve(dual.reps.size());
  for (const auto& rho : dual.reps)
    out.coeffs.push_back(fourier_transform(f, rho));
  return out;
}

// g-sharp(gamma) = (1/|G|) sum_rho d_rho tr(g(rho) rho(gamma^-1))
inline CVec inverse_transform(const FourierData& data,
                              const UnitaryDual& dual) {
  const auto& g = dual.group;
  if (data.coeffs.size() != dual.reps.size())
    throw domain_error("coefficient count does not match the dual");
  CVec out = CVec::Zero(g.order());
  for (std::size_t r = 0; r < dual.reps.size(); ++r) {
    const auto& rho = dual.reps[r];
    const double d = rho.dim();
    for (std::uint32_t i = 0; i < g.order(); ++i)
      out[i] += d * (data.coeffs[r] * rho(g.inv_idx(i))).trace();
  }
  out /= double(g.order());
  return out;
}

struct UniformityBound {
  double epsilon = 0.0;          // max over nontrivial rho of ||f-hat(rho)||_op
  double pairwise_bound = 0.0;   // 2 eps, bounds |f(g1) - f(g2)| for all pairs
  bool probability = false;      // f is numerically a probability distribution
  double value_bound = 0.0;      // 2 eps, bounds |f(g) - 1/|G|| when probability
  double subset_coefficient = 0.0;  // deviation of a sum over Omega is
                                    // bounded by subset_coefficient * |Omega|
};

inline UniformityBound uniformity_bound(const CVec& f,
                                        const UnitaryDual& dual) {
  UniformityBound b;
  for (const auto& rho : dual.reps) {
    if (rho.trivial()) continue;
    b.epsilon = std::max(b.epsilon, operator_norm(fourier_transform(f, rho)));
  }
  b.pairwise_bound = 2.0 * b.epsilon;
  double sum = 0.0, min_real = 0.0, max_imag = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    sum += f[i].real();
    min_real = std::min(min_real, f[i].real());
    max_imag = std::max(max_imag, std::abs(f[i].imag()));
  }
  b.probability =
      max_imag <= 1e-9 && min_real >= -1e-9 && std::abs(sum - 1.0) <= 1e-9;
  if (b.probability) {
    b.value_bound = 2.0 * b.epsilon;
    b.subset_coefficient = 2.0 * b.epsilon;
  }
  return b;
}

}  // namespace walkdist

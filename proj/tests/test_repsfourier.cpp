#include "catch2/catch_amalgamated.hpp"

#include "support.hpp"

using namespace walkdist;
using testsupport::chi_square_ok;

namespace {

void check_dual(const FiniteGroup& g) {
  const UnitaryDual dual = unitary_dual(g);
  REQUIRE(!dual.reps.empty());
  CHECK(dual.reps.front().trivial());
  // completeness: squared dimensions add up to the group order
  CHECK(plancherel_sum(dual) == g.order());

  Rng rng(13);
  for (const auto& rho : dual.reps) {
    const auto n = static_cast<Eigen::Index>(rho.dim());
    // identity maps to the identity matrix
    CHECK((rho(g.identity()) - CMat::Identity(n, n)).norm() < 1e-12);
    for (std::uint32_t a = 0; a < g.order(); ++a) {
      // unitarity of every matrix
      CHECK((rho(a) * rho(a).adjoint() - CMat::Identity(n, n)).norm() <
            1e-12);
    }
    // homomorphism on sampled pairs
    for (int t = 0; t < 64; ++t) {
      const auto a = static_cast<std::uint32_t>(rng.below(g.order()));
      const auto b = static_cast<std::uint32_t>(rng.below(g.order()));
      CHECK((rho(a) * rho(b) - rho(g.mul_idx(a, b))).norm() < 1e-12);
    }
    // irreducibility: the character has unit norm
    Cplx char_norm(0, 0);
    for (std::uint32_t a = 0; a < g.order(); ++a) {
      const Cplx chi = rho(a).trace();
      char_norm += chi * std::conj(chi);
    }
    CHECK(std::abs(char_norm / double(g.order()) - Cplx(1, 0)) < 1e-12);
  }
  // pairwise character orthogonality separates the representations
  for (std::size_t r1 = 0; r1 < dual.reps.size(); ++r1)
    for (std::size_t r2 = r1 + 1; r2 < dual.reps.size(); ++r2) {
      Cplx inner(0, 0);
      for (std::uint32_t a = 0; a < g.order(); ++a)
        inner += dual.reps[r1](a).trace() *
                 std::conj(dual.reps[r2](a).trace());
      CHECK(std::abs(inner) / double(g.order()) < 1e-12);
    }
}

CVec random_function(const FiniteGroup& g, Rng& rng) {
  CVec f(static_cast<Eigen::Index>(g.order()));
  for (Eigen::Index i = 0; i < f.size(); ++i)
    f[i] = Cplx(rng.normal(), rng.normal());
  return f;
}

}  // namespace

TEST_CASE("unitary duals of the listed families") {
  check_dual(FiniteGroup::cyclic(2));
  check_dual(FiniteGroup::cyclic(5));
  check_dual(FiniteGroup::cyclic(12));
  check_dual(FiniteGroup::product_of_cyclics({2, 3}));
  check_dual(FiniteGroup::product_of_cyclics({2, 2, 2}));
  check_dual(FiniteGroup::product_of_cyclics({4, 6}));
  check_dual(FiniteGroup::dihedral(3));
  check_dual(FiniteGroup::dihedral(4));
  check_dual(FiniteGroup::dihedral(6));
  check_dual(FiniteGroup::dihedral(7));
}

TEST_CASE("dual sizes match the classification") {
  CHECK(unitary_dual(FiniteGroup::cyclic(7)).reps.size() == 7);
  CHECK(unitary_dual(FiniteGroup::product_of_cyclics({2, 3})).reps.size() ==
        6);
  // odd dihedral: 2 linear + (m-1)/2 planar
  CHECK(unitary_dual(FiniteGroup::dihedral(3)).reps.size() == 3);
  // even dihedral: 4 linear + m/2 - 1 planar
  CHECK(unitary_dual(FiniteGroup::dihedral(4)).reps.size() == 5);
  CHECK(unitary_dual(FiniteGroup::dihedral(6)).reps.size() == 6);
}

TEST_CASE("families without a listed dual refuse loudly") {
  CHECK_THROWS_AS(unitary_dual(FiniteGroup::symmetric(3)), capability_error);
  CHECK_THROWS_AS(unitary_dual(special_linear_group(2, 3)),
                  capability_error);
}

TEST_CASE("fourier inversion round-trips random functions") {
  Rng rng(101);
  for (const FiniteGroup& g :
       {FiniteGroup::cyclic(6), FiniteGroup::dihedral(4),
        FiniteGroup::product_of_cyclics({2, 3}), FiniteGroup::dihedral(5)}) {
    const UnitaryDual dual = unitary_dual(g);
    for (int t = 0; t < 50; ++t) {
      const CVec f = random_function(g, rng);
      const CVec back = inverse_transform(fourier_transform(f, dual), dual);
      REQUIRE(back.size() == f.size());
      CHECK((back - f).norm() < 1e-10 * std::max(1.0, f.norm()));
    }
  }
}

TEST_CASE("parseval identity holds exactly") {
  Rng rng(202);
  const FiniteGroup g = FiniteGroup::dihedral(6);
  const UnitaryDual dual = unitary_dual(g);
  for (int t = 0; t < 20; ++t) {
    const CVec f = random_function(g, rng);
    double lhs = 0.0;
    for (std::size_t r = 0; r < dual.reps.size(); ++r) {
      const CMat coeff = fourier_transform(f, dual.reps[r]);
      lhs += double(dual.reps[r].dim()) * coeff.squaredNorm();
    }
    CHECK(lhs == Catch::Approx(double(g.order()) * f.squaredNorm())
                     .epsilon(1e-10));
  }
}

TEST_CASE("delta at the identity transforms to identity matrices") {
  const FiniteGroup g = FiniteGroup::dihedral(4);
  const UnitaryDual dual = unitary_dual(g);
  CVec f = CVec::Zero(static_cast<Eigen::Index>(g.order()));
  f[g.identity()] = Cplx(1, 0);
  for (const auto& rho : dual.reps) {
    const CMat coeff = fourier_transform(f, rho);
    const auto n = static_cast<Eigen::Index>(rho.dim());
    CHECK((coeff - CMat::Identity(n, n)).norm() < 1e-14);
  }
}

TEST_CASE("transform turns convolution into multiplication") {
  Rng rng(303);
  const FiniteGroup g = FiniteGroup::dihedral(4);
  const UnitaryDual dual = unitary_dual(g);
  const CVec f = random_function(g, rng);
  const CVec h = random_function(g, rng);
  CVec conv = CVec::Zero(f.size());
  for (std::uint32_t a = 0; a < g.order(); ++a)
    for (std::uint32_t b = 0; b < g.order(); ++b)
      conv[g.mul_idx(a, b)] += f[a] * h[b];
  for (const auto& rho : dual.reps) {
    const CMat lhs = fourier_transform(conv, rho);
    const CMat rhs = fourier_transform(f, rho) * fourier_transform(h, rho);
    CHECK((lhs - rhs).norm() < 1e-10);
  }
}

TEST_CASE("uniformity bound vanishes exactly at uniform") {
  const FiniteGroup g = FiniteGroup::dihedral(4);
  const UnitaryDual dual = unitary_dual(g);
  CVec u = CVec::Constant(static_cast<Eigen::Index>(g.order()),
                          Cplx(1.0 / double(g.order()), 0));
  const auto bound = uniformity_bound(u, dual);
  CHECK(bound.epsilon < 1e-14);
  CHECK(bound.probability);
  CHECK(bound.value_bound < 1e-13);
}

TEST_CASE("uniformity bound dominates actual deviations") {
  Rng rng(404);
  const FiniteGroup g = FiniteGroup::dihedral(6);
  const UnitaryDual dual = unitary_dual(g);
  const double uniform = 1.0 / double(g.order());
  for (int t = 0; t < 50; ++t) {
    // random probability vector near uniform
    CVec f(static_cast<Eigen::Index>(g.order()));
    double total = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double w = uniform * (1.0 + 0.5 * rng.uniform());
      f[i] = Cplx(w, 0);
      total += w;
    }
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] /= total;
    const auto bound = uniformity_bound(f, dual);
    REQUIRE(bound.probability);
    double worst_pair = 0.0, worst_value = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      worst_value = std::max(worst_value, std::abs(f[i].real() - uniform));
      for (Eigen::Index j = 0; j < f.size(); ++j)
        worst_pair =
            std::max(worst_pair, std::abs(f[i].real() - f[j].real()));
    }
    CHECK(worst_pair <= bound.pairwise_bound + 1e-12);
    CHECK(worst_value <= bound.value_bound + 1e-12);
    // subset sums: every subset of size k deviates from k/|G| by at most
    // subset_coefficient * k; exhaustive over singletons and pairs
    for (Eigen::Index i = 0; i < f.size(); ++i)
      for (Eigen::Index j = i + 1; j < f.size(); ++j) {
        const double s = f[i].real() + f[j].real();
        CHECK(std::abs(s - 2.0 * uniform) <=
              2.0 * bound.subset_coefficient + 1e-12);
      }
  }
}

TEST_CASE("point mass has maximal spectral spread") {
  const FiniteGroup g = FiniteGroup::cyclic(5);
  const UnitaryDual dual = unitary_dual(g);
  CVec f = CVec::Zero(5);
  f[2] = Cplx(1, 0);
  const auto bound = uniformity_bound(f, dual);
  CHECK(bound.epsilon == Catch::Approx(1.0).epsilon(1e-12));
}

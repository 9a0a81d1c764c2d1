#include "catch2/catch_amalgamated.hpp"

#include <set>

#include "support.hpp"

using namespace walkdist;

namespace {

// Exhaustive group-axiom audit on the stored tables.
void check_group_axioms(const FiniteGroup& g) {
  const std::uint32_t n = static_cast<std::uint32_t>(g.order());
  const std::uint32_t e = g.identity();
  for (std::uint32_t a = 0; a < n; ++a) {
    CHECK(g.mul_idx(e, a) == a);
    CHECK(g.mul_idx(a, e) == a);
    CHECK(g.mul_idx(a, g.inv_idx(a)) == e);
    CHECK(g.mul_idx(g.inv_idx(a), a) == e);
  }
  // associativity on a deterministic sample of triples
  Rng rng(7);
  const std::size_t triples = std::min<std::size_t>(300, n * n);
  for (std::size_t t = 0; t < triples; ++t) {
    const auto a = static_cast<std::uint32_t>(rng.below(n));
    const auto b = static_cast<std::uint32_t>(rng.below(n));
    const auto c = static_cast<std::uint32_t>(rng.below(n));
    CHECK(g.mul_idx(g.mul_idx(a, b), c) == g.mul_idx(a, g.mul_idx(b, c)));
  }
}

}  // namespace

TEST_CASE("cyclic groups") {
  const FiniteGroup z6 = FiniteGroup::cyclic(6);
  REQUIRE(z6.order() == 6);
  check_group_axioms(z6);
  // commutative, generator order
  for (std::uint32_t a = 0; a < 6; ++a)
    for (std::uint32_t b = 0; b < 6; ++b)
      CHECK(z6.mul_idx(a, b) == z6.mul_idx(b, a));
  CHECK(z6.label(0) == "0");
  CHECK(z6.label(3) == "3");
  CHECK(z6.order() == 6);
  const FiniteGroup z1 = FiniteGroup::cyclic(1);
  REQUIRE(z1.order() == 1);
}

TEST_CASE("products of cyclics") {
  const FiniteGroup g = FiniteGroup::product_of_cyclics({2, 3});
  REQUIRE(g.order() == 6);
  check_group_axioms(g);
  // (1,0)*(0,1) has order lcm(2,3)=6 since the product is Z2 x Z3
  const GroupElement a = ProductElem{{1, 0}, {2, 3}};
  const GroupElement b = ProductElem{{0, 1}, {2, 3}};
  std::uint32_t ab = g.mul_idx(g.index_of_checked(a), g.index_of_checked(b));
  std::uint32_t acc = ab;
  std::size_t order = 1;
  while (acc != g.identity()) {
    acc = g.mul_idx(acc, ab);
    ++order;
  }
  CHECK(order == 6);
  CHECK(g.label(g.index_of_checked(a)) == "(1 0)");
}

TEST_CASE("dihedral groups") {
  const FiniteGroup d4 = FiniteGroup::dihedral(4);
  REQUIRE(d4.order() == 8);
  check_group_axioms(d4);
  const std::uint32_t r =
      d4.index_of_checked(DihedralElem{1, 0, 4});
  const std::uint32_t f =
      d4.index_of_checked(DihedralElem{0, 1, 4});
  // r^4 = e, f^2 = e, f r f = r^-1
  std::uint32_t r4 = r;
  for (int i = 0; i < 3; ++i) r4 = d4.mul_idx(r4, r);
  CHECK(r4 == d4.identity());
  CHECK(d4.mul_idx(f, f) == d4.identity());
  CHECK(d4.mul_idx(d4.mul_idx(f, r), f) == d4.inv_idx(r));
  CHECK(d4.label(d4.identity()) == "e");
  CHECK(d4.label(d4.mul_idx(d4.mul_idx(r, r), f)) == "r2f");
  CHECK_FALSE(d4.mul_idx(r, f) == d4.mul_idx(f, r));
}

TEST_CASE("symmetric groups and the composition convention") {
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  REQUIRE(s3.order() == 6);
  check_group_axioms(s3);
  // (0 1) composed with (0 1 2): left factor acts second, so the result
  // is the transposition (1 2).
  const GroupElement swap01 = PermElem{{1, 0, 2}};
  const GroupElement cycle = PermElem{{1, 2, 0}};
  const auto product =
      s3.mul_idx(s3.index_of_checked(swap01), s3.index_of_checked(cycle));
  CHECK(s3.label(product) == "[0 2 1]");
  const FiniteGroup s4 = FiniteGroup::symmetric(4);
  REQUIRE(s4.order() == 24);
  check_group_axioms(s4);
}

TEST_CASE("special linear groups over prime and composite moduli") {
  const FiniteGroup sl23 = special_linear_group(2, 3);
  REQUIRE(sl23.order() == 24);  // p(p^2-1)
  check_group_axioms(sl23);
  const FiniteGroup sl25 = special_linear_group(2, 5);
  REQUIRE(sl25.order() == 120);
  const FiniteGroup sl27 = special_linear_group(2, 7);
  REQUIRE(sl27.order() == 336);
  // composite modulus splits by the Chinese remainder theorem
  const FiniteGroup sl215 = special_linear_group(2, 15);
  REQUIRE(sl215.order() == 120 * 24);
  const FiniteGroup sl33 = special_linear_group(3, 3);
  REQUIRE(sl33.order() == 5616);  // |GL(3,3)| / 2
}

TEST_CASE("symplectic groups") {
  const FiniteGroup sp23 = symplectic_group(2, 3);
  REQUIRE(sp23.order() == 24);  // Sp(2) coincides with SL(2)
  const FiniteGroup sp43 = symplectic_group(4, 3);
  REQUIRE(sp43.order() == 51840);
  // every stored generator satisfies the form identity modulo 3
  const auto form = BigMatrix::from(symplectic_form(4));
  for (const auto g : sp43.generator_indices()) {
    const auto* m = std::get_if<MatModElem>(&sp43.element(g));
    REQUIRE(m != nullptr);
    BigMatrix bm{4, std::vector<cpp_int>(m->entries.begin(),
                                         m->entries.end())};
    BigMatrix mt{4, std::vector<cpp_int>(16)};
    for (std::uint32_t i = 0; i < 4; ++i)
      for (std::uint32_t k = 0; k < 4; ++k)
        mt.entries[i * 4 + k] = bm.entries[k * 4 + i];
    const BigMatrix lhs = mul(mul(mt, form), bm);
    bool ok = true;
    for (std::size_t i = 0; i < 16; ++i)
      if ((lhs.entries[i] - form.entries[i]) % 3 != 0) ok = false;
    CHECK(ok);
  }
}

TEST_CASE("generated matrix groups respect the enumeration cap") {
  std::vector<GroupElement> gens;
  for (const auto& m : elementary_sl_generators(2))
    gens.push_back(reduce_mod(m, 7));
  CHECK_THROWS_AS(FiniteGroup::from_generators(gens, 100, "capped"),
                  resource_error);
  const FiniteGroup full = FiniteGroup::from_generators(gens, 1000, "sl27");
  CHECK(full.order() == 336);
}

TEST_CASE("subgroup closure and derived subgroups") {
  const FiniteGroup z6 = FiniteGroup::cyclic(6);
  const auto sub =
      subgroup_closure(z6, {z6.index_of_checked(CyclicElem{2, 6})});
  CHECK(sub.size() == 3);

  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  CHECK(derived_subgroup(s3).size() == 3);  // the alternating part
  CHECK(derived_subgroup(z6).size() == 1);

  const FiniteGroup d4 = FiniteGroup::dihedral(4);
  CHECK(derived_subgroup(d4).size() == 2);  // {e, r^2}

  const FiniteGroup sl23 = special_linear_group(2, 3);
  CHECK(derived_subgroup(sl23).size() == 8);  // the quaternion part
}

TEST_CASE("quotient maps reduce matrix entries consistently") {
  const FiniteGroup sl215 = special_linear_group(2, 15);
  const FiniteGroup sl23 = special_linear_group(2, 3);
  const QuotientMap qmap(15, 3);
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = static_cast<std::uint32_t>(rng.below(sl215.order()));
    const auto b = static_cast<std::uint32_t>(rng.below(sl215.order()));
    const GroupElement qa = qmap(sl215.element(a));
    const GroupElement qb = qmap(sl215.element(b));
    const GroupElement qab = qmap(sl215.element(sl215.mul_idx(a, b)));
    CHECK(sl23.index_of_checked(qab) ==
          sl23.mul_idx(sl23.index_of_checked(qa),
                       sl23.index_of_checked(qb)));
  }
  CHECK_THROWS_AS(QuotientMap(15, 4), domain_error);
}

TEST_CASE("translation tables match explicit multiplication") {
  const FiniteGroup d4 = FiniteGroup::dihedral(4);
  const std::uint32_t t = 3;
  const auto fwd = d4.right_translation_table(t, false);
  const auto bwd = d4.right_translation_table(t, true);
  for (std::uint32_t g = 0; g < d4.order(); ++g) {
    CHECK(fwd[g] == d4.mul_idx(g, t));
    CHECK(bwd[g] == d4.mul_idx(g, d4.inv_idx(t)));
  }
}

TEST_CASE("membership errors carry labels") {
  const FiniteGroup z6 = FiniteGroup::cyclic(6);
  CHECK_THROWS_AS(z6.index_of_checked(CyclicElem{1, 7}), domain_error);
  const FiniteGroup sl23 = special_linear_group(2, 3);
  // determinant 2 matrix mod 3 is not in the group
  CHECK_THROWS_AS(
      sl23.index_of_checked(reduce_mod(
          IntMatrix{2, {2, 0, 0, 1}}, 3)),
      domain_error);
}

TEST_CASE("exact determinants and integer matrix products") {
  IntMatrix a{2, {3, 1, 5, 2}};
  CHECK(det_exact(a) == 1);
  IntMatrix b{3, {2, 0, 0, 0, 3, 0, 0, 0, 4}};
  CHECK(det_exact(b) == 24);
  const auto prod = mul(BigMatrix::from(a), BigMatrix::from(a));
  CHECK(prod.entries[0] == 14);  // [[3,1],[5,2]]^2 = [[14,5],[25,9]]
  CHECK(prod.entries[2] == 25);
  CHECK(det_exact(prod) == 1);
}

TEST_CASE("elementary generators have determinant one at every size") {
  for (std::uint32_t n = 2; n <= 4; ++n)
    for (const auto& g : elementary_sl_generators(n))
      CHECK(det_exact(g) == 1);
  for (const auto& g : symplectic_generators(4)) CHECK(is_symplectic(g));
  for (const auto& g : symplectic_generators(2)) CHECK(is_symplectic(g));
}

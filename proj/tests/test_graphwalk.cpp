#include "catch2/catch_amalgamated.hpp"

#include <map>

#include "support.hpp"

using namespace walkdist;
using testsupport::brute_force_products;
using testsupport::make_graph;

namespace {

const std::vector<std::int64_t> kTwoLoops = {1, 1, 1, 1};
const std::vector<std::int64_t> kFibonacci = {1, 1, 1, 0};
const std::vector<std::int64_t> kWeighted = {2, 1, 1, 0};

void compare_with_brute_force(const DecoratedGraph& graph,
                              const FiniteGroup& group, std::size_t start,
                              std::size_t end, std::uint32_t n) {
  const auto oracle = brute_force_products(graph, group, start, end, n);
  const auto dist =
      walk_distribution(graph, group, start, end, n, WalkMode::exact);
  cpp_int total = 0;
  for (std::uint32_t g = 0; g < group.order(); ++g) {
    const auto it = oracle.find(g);
    const cpp_int want = it == oracle.end() ? cpp_int(0) : it->second;
    CHECK(dist.counts[g] == want);
    total += want;
  }
  CHECK(dist.total == total);
  CHECK(total == walk_count(graph.adjacency, start, end, n));
}

}  // namespace

TEST_CASE("primitivity certificates") {
  DecoratedGraph bip = make_graph({0, 1, 1, 0},
                                  {CyclicElem{0, 2}, CyclicElem{1, 2}});
  const auto cert_bip = validate_primitive(bip.adjacency);
  CHECK_FALSE(cert_bip.primitive);
  CHECK_THROWS_AS(require_primitive(bip.adjacency), domain_error);

  DecoratedGraph loops = make_graph(kTwoLoops,
                                    {CyclicElem{0, 2}, CyclicElem{1, 2}});
  const auto cert = validate_primitive(loops.adjacency);
  CHECK(cert.primitive);
  CHECK(cert.exponent == 1);

  DecoratedGraph fib = make_graph(kFibonacci,
                                  {CyclicElem{0, 2}, CyclicElem{1, 2}});
  const auto cert_fib = validate_primitive(fib.adjacency);
  CHECK(cert_fib.primitive);
  CHECK(cert_fib.exponent == 2);  // A^2 is entrywise positive, A is not

  // directed 3-cycle is irreducible but periodic
  DecoratedGraph cyc = make_graph({0, 1, 0, 0, 0, 1, 1, 0, 0},
                                  {CyclicElem{0, 2}, CyclicElem{0, 2},
                                   CyclicElem{1, 2}});
  CHECK_FALSE(validate_primitive(cyc.adjacency).primitive);
}

TEST_CASE("perron data for closed forms") {
  DecoratedGraph ones = make_graph(kTwoLoops,
                                   {CyclicElem{0, 2}, CyclicElem{1, 2}});
  const auto p1 = perron_data(ones.adjacency);
  CHECK(p1.lambda_max == Catch::Approx(2.0).epsilon(1e-10));
  CHECK(p1.lambda2_abs < 1e-8);
  CHECK(p1.v_max[0] == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));

  DecoratedGraph fib = make_graph(kFibonacci,
                                  {CyclicElem{0, 2}, CyclicElem{1, 2}});
  const auto p2 = perron_data(fib.adjacency);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(p2.lambda_max == Catch::Approx(phi).epsilon(1e-10));
  CHECK(p2.lambda2_abs == Catch::Approx(phi - 1.0).epsilon(1e-8));
  CHECK(p2.ratio == Catch::Approx((phi - 1.0) / phi).epsilon(1e-8));

  DecoratedGraph w = make_graph(kWeighted,
                                {CyclicElem{0, 2}, CyclicElem{1, 2}});
  const auto p3 = perron_data(w.adjacency);
  CHECK(p3.lambda_max == Catch::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-10));
  CHECK(p3.lambda2_abs ==
        Catch::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-8));
}

TEST_CASE("walk counts match brute force across graphs and groups") {
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  const FiniteGroup d3 = FiniteGroup::dihedral(3);
  const FiniteGroup s3 = FiniteGroup::symmetric(3);

  DecoratedGraph g1 = make_graph(kTwoLoops, {z3.element(0), z3.element(1)});
  DecoratedGraph g2 = make_graph(kFibonacci, {z4.element(1), z4.element(3)});
  DecoratedGraph g3 = make_graph(
      kWeighted, {d3.element(1), d3.element(4)});
  DecoratedGraph g4 = make_graph(
      {1, 1, 0, 0, 1, 1, 1, 0, 1},
      {s3.element(0), s3.element(2), s3.element(3)});

  for (std::uint32_t n = 0; n <= 6; ++n) {
    compare_with_brute_force(g1, z3, 0, 0, n);
    compare_with_brute_force(g1, z3, 0, 1, n);
    compare_with_brute_force(g2, z4, 0, 0, n);
    compare_with_brute_force(g2, z4, 1, 0, n);
    compare_with_brute_force(g3, d3, 0, 1, n);
    compare_with_brute_force(g4, s3, 0, 2, n);
    compare_with_brute_force(g4, s3, 2, 2, n);
  }
}

TEST_CASE("floating mode tracks the exact distribution") {
  const FiniteGroup d4 = FiniteGroup::dihedral(4);
  DecoratedGraph g = make_graph(
      {1, 1, 0, 0, 1, 1, 1, 0, 1},
      {d4.element(1), d4.element(5), d4.element(2)});
  for (std::uint32_t n : {1u, 4u, 9u, 16u}) {
    const auto exact =
        walk_distribution(g, d4, 0, 1, n, WalkMode::exact);
    const auto approx =
        walk_distribution(g, d4, 0, 1, n, WalkMode::floating);
    for (std::size_t i = 0; i < d4.order(); ++i)
      CHECK(approx.probs[i] ==
            Catch::Approx(exact.probs[i]).margin(1e-12));
  }
}

TEST_CASE("walk engine advances incrementally") {
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  DecoratedGraph g = make_graph(kTwoLoops, {z3.element(0), z3.element(1)});
  WalkEngine engine(g, z3, 0, WalkMode::exact);
  for (std::uint32_t n = 0; n <= 8; ++n) {
    const auto direct = walk_distribution(g, z3, 0, 1, n, WalkMode::exact);
    const auto incremental = engine.distribution(1);
    CHECK(incremental.counts == direct.counts);
    engine.advance();
  }
}

TEST_CASE("two-element swap decorations mix in two steps") {
  // decorations (identity, flip) over Z/2 give an exactly uniform product
  // distribution for every length from 2 on
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  DecoratedGraph g = make_graph(kTwoLoops, {z2.element(0), z2.element(1)});
  for (std::uint32_t n = 2; n <= 20; ++n) {
    const auto dist = walk_distribution(g, z2, 0, 0, n, WalkMode::exact);
    const auto dev = distance_to_uniform(dist);
    CHECK(dev.exact_zero);
    CHECK(dev.d_inf == 0.0);
  }
  // length one from vertex 0 to itself is the identity point mass
  const auto dist1 = walk_distribution(g, z2, 0, 0, 1, WalkMode::exact);
  const auto dev1 = distance_to_uniform(dist1);
  CHECK_FALSE(dev1.exact_zero);
  CHECK(dev1.d_inf == Catch::Approx(0.5));
}

TEST_CASE("mod-three decorations halve the deviation each step") {
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  DecoratedGraph g = make_graph(kTwoLoops, {z3.element(0), z3.element(1)});
  const auto series = deviation_series(g, z3, 0, 0, 1, 12, WalkMode::exact);
  for (const auto& p : series)
    CHECK(p.d_inf ==
          Catch::Approx((2.0 / 3.0) * std::pow(2.0, 1.0 - double(p.n)))
              .epsilon(1e-12));
  const auto fit = measured_rate(series);
  CHECK_FALSE(fit.collapsed);
  CHECK(fit.slope == Catch::Approx(std::log(0.5)).epsilon(1e-9));
  CHECK(fit.rms_residual < 1e-10);
}

TEST_CASE("rate fit reports exact collapse") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  DecoratedGraph g = make_graph(kTwoLoops, {z2.element(0), z2.element(1)});
  const auto series = deviation_series(g, z2, 0, 0, 1, 10, WalkMode::exact);
  const auto fit = measured_rate(series);
  CHECK(fit.collapsed);
  CHECK(fit.collapse_n == 2);
}

TEST_CASE("uniform walk sampling is unbiased and deterministic") {
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  DecoratedGraph g = make_graph(kFibonacci, {z3.element(0), z3.element(1)});
  const std::uint32_t length = 6;
  // enumerate all walks 0 -> 0 of this length
  const auto total = walk_count(g.adjacency, 0, 0, length);
  REQUIRE(total > 0);

  std::map<std::vector<std::size_t>, std::size_t> freq;
  Rng rng(909);
  const std::size_t draws = 20000;
  for (std::size_t t = 0; t < draws; ++t) {
    const auto walk = sample_walk_uniform(g, 0, 0, length, rng);
    REQUIRE(walk.size() == length + 1);
    REQUIRE(walk.front() == 0);
    REQUIRE(walk.back() == 0);
    for (std::size_t k = 0; k + 1 < walk.size(); ++k)
      REQUIRE(g.adjacency(static_cast<Eigen::Index>(walk[k]),
                          static_cast<Eigen::Index>(walk[k + 1])) > 0);
    ++freq[walk];
  }
  REQUIRE(freq.size() == static_cast<std::size_t>(total.convert_to<double>()));
  std::vector<double> observed, expected;
  for (const auto& [walk, count] : freq) {
    observed.push_back(double(count));
    expected.push_back(double(draws) / total.convert_to<double>());
  }
  CHECK(testsupport::chi_square_ok(observed, expected));

  // determinism: the same seed reproduces the same walks
  Rng rng_a(42), rng_b(42);
  for (int t = 0; t < 32; ++t)
    CHECK(sample_walk_uniform(g, 0, 0, length, rng_a) ==
          sample_walk_uniform(g, 0, 0, length, rng_b));
}

TEST_CASE("walk products multiply decorations left to right") {
  const FiniteGroup s3 = FiniteGroup::symmetric(3);
  DecoratedGraph g = make_graph(
      {1, 1, 0, 0, 1, 1, 1, 0, 1},
      {s3.element(0), s3.element(2), s3.element(3)});
  const std::vector<std::size_t> walk = {0, 1, 2, 2};
  const GroupElement want = mul(
      mul(mul(g.decorations[0], g.decorations[1]), g.decorations[2]),
      g.decorations[2]);
  CHECK(s3.index_of_checked(walk_product(g, walk)) ==
        s3.index_of_checked(want));
}

TEST_CASE("hypothesis checks separate the two failure modes") {
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  DecoratedGraph good = make_graph(kTwoLoops, {z3.element(0), z3.element(1)});
  CHECK(theorem_hypotheses(good, z3).holds());

  // constant decorations generate (1 has order 3) but every pair product
  // is the identity: a nontrivial character is constant on the set
  DecoratedGraph constant = make_graph(kTwoLoops,
                                       {z3.element(1), z3.element(1)});
  const auto rep1 = theorem_hypotheses(constant, z3);
  CHECK(rep1.status == HypothesisStatus::fails_onedim);
  CHECK(rep1.generated_order == 3);
  CHECK(rep1.onedim_order == 1);

  // the rotations of the square inside the dihedral group: generation fails
  const FiniteGroup d4 = FiniteGroup::dihedral(4);
  const auto r_idx = d4.index_of_checked(DihedralElem{1, 0, 4});
  const auto f_idx = d4.index_of_checked(DihedralElem{0, 1, 4});
  DecoratedGraph rotations =
      make_graph(kTwoLoops, {d4.element(d4.identity()), d4.element(r_idx)});
  const auto rep2 = theorem_hypotheses(rotations, d4);
  CHECK(rep2.status == HypothesisStatus::fails_generation);
  CHECK(rep2.generated_order == 4);

  // rotation + reflection generate, but the pair products stay in a
  // proper subgroup together with the commutators: the parity character
  // is constant on the decorations
  DecoratedGraph mixed =
      make_graph(kTwoLoops, {d4.element(r_idx), d4.element(f_idx)});
  const auto rep3 = theorem_hypotheses(mixed, d4);
  CHECK(rep3.status == HypothesisStatus::fails_onedim);
  CHECK(rep3.onedim_order == 4);

  // three vertices with an identity decoration fix it
  DecoratedGraph three = make_graph(
      {1, 1, 0, 0, 1, 1, 1, 0, 1},
      {d4.element(d4.identity()), d4.element(r_idx), d4.element(f_idx)});
  CHECK(theorem_hypotheses(three, d4).holds());
}

TEST_CASE("constant decorations fail generation in a bigger group") {
  const FiniteGroup z4 = FiniteGroup::cyclic(4);
  DecoratedGraph g = make_graph(kTwoLoops, {z4.element(2), z4.element(2)});
  const auto rep = theorem_hypotheses(g, z4);
  CHECK(rep.status == HypothesisStatus::fails_generation);
  CHECK(rep.generated_order == 2);
}

TEST_CASE("push forward collapses along quotient maps") {
  const FiniteGroup z6 = FiniteGroup::cyclic(6);
  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  DecoratedGraph g = make_graph(kTwoLoops, {z6.element(0), z6.element(1)});
  const auto dist = walk_distribution(g, z6, 0, 0, 5, WalkMode::exact);
  const QuotientMap qmap(6, 3);
  const auto pushed = push_forward(dist, z3, qmap);
  cpp_int total = 0;
  for (std::uint32_t t = 0; t < 3; ++t) {
    cpp_int want = 0;
    for (std::uint32_t s = 0; s < 6; ++s)
      if (z3.index_of_checked(qmap(z6.element(s))) == t)
        want += dist.counts[s];
    CHECK(pushed.counts[t] == want);
    total += want;
  }
  CHECK(pushed.total == total);
}

TEST_CASE("empty walk sets are reported, not divided by") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  // no length-1 walk between the two endpoints of a path with no edge
  DecoratedGraph g = make_graph({1, 1, 1, 0},
                                {z2.element(0), z2.element(1)});
  const auto dist = walk_distribution(g, z2, 1, 1, 1, WalkMode::exact);
  CHECK(dist.total == 0);
  CHECK_THROWS_AS(distance_to_uniform(dist), domain_error);
}

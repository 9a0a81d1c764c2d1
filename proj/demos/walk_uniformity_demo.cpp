// Walks on the two-vertex graph with loops, vertices decorated by the
// elements {0, 1} of Z/3: prints how fast the walk-product distribution
// approaches uniform, next to the certified schedule.

#include <cstdio>

#include "walkdist/walkdist.hpp"

int main() {
  using namespace walkdist;

  const FiniteGroup z3 = FiniteGroup::cyclic(3);
  DecoratedGraph graph;
  graph.adjacency = AdjMatrix::Ones(2, 2);
  graph.decorations = {z3.element(0), z3.element(1)};

  const auto rate = effective_rate(graph, z3, 0, 0, 1, 16);
  std::printf("group: %s   lambda = %.6f   d = %.6f   g = %.6f%s\n",
              z3.name().c_str(), rate.lambda, rate.d, rate.shrink.g,
              rate.certified ? "   (certified)" : "");
  std::printf("%4s  %14s  %14s\n", "n", "max deviation", "bound");
  for (const auto& row : rate.schedule)
    std::printf("%4u  %14.6e  %14.6e\n", row.n, row.observed,
                row.deviation_bound);
  return 0;
}

// Grows a 12-node ring by three chords and compares the three solvers with the lower bound.

#include <iomanip>
#include <iostream>

#include "netgrow/netgrow.hpp"

int main() {
  using namespace netgrow;

  WeightedGraph ring(12);
  for (node_t i = 0; i < 12; ++i) ring.add_edge(i, (i + 1) % 12, 1.0);
  const auto state = build_laplacian(ring);

  std::vector<Link> links;
  for (node_t i = 0; i < 12; ++i)
    for (node_t j = i + 2; j < 12; ++j)
      if (!ring.has_edge(i, j)) links.push_back({{i, j}, 0.5 + 0.1 * static_cast<double>((i + j) % 5)});
  const CandidateSet candidates(links);

  const auto m = parse_measure("zeta:q=1");
  const std::size_t k = 3;
  std::cout << std::setprecision(8);
  std::cout << "measure " << to_string(m) << ", initial " << evaluate(m, state).value << "\n";
  std::cout << "lower bound for k=" << k << ": " << lower_bound(state, m, k) << "\n";
  for (auto algo : {Algorithm::brute_force, Algorithm::greedy, Algorithm::linearized}) {
    const auto r = grow(algo, state, candidates, k, m);
    std::cout << std::setw(7) << to_string(algo) << ": " << r.final_value() << "  links";
    for (const auto& l : r.chosen) std::cout << " " << to_string(l.edge);
    std::cout << "  (" << r.total_seconds * 1e3 << " ms)\n";
  }
}

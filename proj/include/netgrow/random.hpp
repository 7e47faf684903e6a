#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "netgrow/graph.hpp"

namespace netgrow {

using rng_t = std::mt19937_64;

struct WeightRange {
  double lo = 1.0;
  double hi = 1.0;
};

namespace detail {
inline double draw_weight(rng_t& rng, WeightRange w) {
  if (w.lo == w.hi) return w.lo;
  return std::uniform_real_distribution<double>(w.lo, w.hi)(rng);
}
}  // namespace detail

/// Random spanning tree (each node attaches to a uniformly chosen earlier node of a
/// random ordering) plus extra_edges distinct additional pairs. Always connected.
inline WeightedGraph random_connected_graph(std::size_t n, std::size_t extra_edges, rng_t& rng,
                                            WeightRange weights = {}) {
  WeightedGraph g(n);
  std::vector<node_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 1; k < n; ++k) {
    const auto parent = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    g.add_edge(order[k], order[parent], detail::draw_weight(rng, weights));
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  extra_edges = std::min(extra_edges, max_edges - g.edge_count());
  std::uniform_int_distribution<node_t> pick(0, n - 1);
  while (extra_edges > 0) {
    const node_t i = pick(rng), j = pick(rng);
    if (i == j || g.has_edge(i, j)) continue;
    g.add_edge(i, j, detail::draw_weight(rng, weights));
    --extra_edges;
  }
  return g;
}

/// Up to count distinct node pairs, optionally excluding pairs already present in g.
inline std::vector<Edge> random_pairs(const WeightedGraph& g, std::size_t count, bool exclude_existing, rng_t& rng) {
  const std::size_t n = g.node_count();
  std::vector<Edge> pool;
  for (node_t i = 0; i < n; ++i) {
    for (node_t j = i + 1; j < n; ++j) {
      if (exclude_existing && g.has_edge(i, j)) continue;
      pool.push_back({i, j});
    }
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(count, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace netgrow

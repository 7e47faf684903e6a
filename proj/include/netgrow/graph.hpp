#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netgrow/error.hpp"

namespace netgrow {

using node_t = std::size_t;

/// Unordered node pair stored canonically as (min, max).
struct Edge {
  node_t u = 0;
  node_t v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(node_t i, node_t j) {
  if (i == j) {
    throw error(errc::self_loop_edge, "edge {" + std::to_string(i) + "," + std::to_string(j) + "}");
  }
  return i < j ? Edge{i, j} : Edge{j, i};
}

inline std::string to_string(const Edge& e) {
  return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

/// Edge Laplacian L_e = (e_i - e_j)(e_i - e_j)^T scaled by w, added in place.
inline void add_edge_laplacian(Eigen::MatrixXd& L, const Edge& e, double w) {
  L(e.u, e.u) += w;
  L(e.v, e.v) += w;
  L(e.u, e.v) -= w;
  L(e.v, e.u) -= w;
}

/// Undirected graph with strictly positive edge weights and no self-loops.
class WeightedGraph {
 public:
  using edge_map = std::map<Edge, double>;

  WeightedGraph() = default;

  explicit WeightedGraph(std::size_t n) : n_(n) {
    if (n < 2) throw error(errc::invalid_graph, "node count must be at least 2");
  }

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const edge_map& edges() const noexcept { return edges_; }

  /// Inserts a new edge; an existing pair is rejected.
  void add_edge(node_t i, node_t j, double w) {
    const Edge e = checked_edge(i, j, w);
    if (!edges_.emplace(e, w).second) {
      throw error(errc::duplicate_edge, "edge " + to_string(e) + " already present");
    }
  }

  /// Adds w to the pair's weight, creating the edge if absent (parallel reinforcement).
  void reinforce(node_t i, node_t j, double w) {
    const Edge e = checked_edge(i, j, w);
    edges_[e] += w;
  }

  void set_weight(node_t i, node_t j, double w) { edges_[checked_edge(i, j, w)] = w; }

  std::optional<double> weight(const Edge& e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(node_t i, node_t j) const { return edges_.contains(make_edge(i, j)); }

  Eigen::MatrixXd laplacian() const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_, n_);
    for (const auto& [e, w] : edges_) add_edge_laplacian(L, e, w);
    return L;
  }

  /// Combinatorial connectivity (union-find); independent of any eigensolver.
  bool is_connected() const {
    std::vector<node_t> parent(n_);
    std::iota(parent.begin(), parent.end(), node_t{0});
    auto find = [&](node_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t components = n_;
    for (const auto& [e, w] : edges_) {
      const node_t a = find(e.u), b = find(e.v);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    return components == 1;
  }

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  Edge checked_edge(node_t i, node_t j, double w) const {
    if (i >= n_ || j >= n_) {
      throw error(errc::invalid_graph, "node index out of range [0," + std::to_string(n_) + ")");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw error(errc::invalid_graph, "edge weight must be positive and finite");
    }
    return make_edge(i, j);
  }

  std::size_t n_ = 0;
  edge_map edges_;
};

/// Edgewise maximum over E1 ∪ E2.
inline WeightedGraph graph_union(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.node_count() != b.node_count()) {
    throw error(errc::node_count_mismatch, "graph_union operands differ in node count");
  }
  WeightedGraph out = a;
  for (const auto& [e, w] : b.edges()) {
    const double merged = std::max(w, a.weight(e).value_or(0.0));
    out.set_weight(e.u, e.v, merged);
  }
  return out;
}

/// Edgewise minimum over E1 ∩ E2.
inline WeightedGraph graph_meet(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.node_count() != b.node_count()) {
    throw error(errc::node_count_mismatch, "graph_meet operands differ in node count");
  }
  WeightedGraph out(a.node_count());
  for (const auto& [e, w] : a.edges()) {
    if (auto other = b.weight(e)) out.add_edge(e.u, e.v, std::min(w, *other));
  }
  return out;
}

}  // namespace netgrow

#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "netgrow/netgrow.hpp"

namespace fixtures {

using namespace netgrow;

inline WeightedGraph complete_graph(std::size_t n, double w = 1.0) {
  WeightedGraph g(n);
  for (node_t i = 0; i < n; ++i)
    for (node_t j = i + 1; j < n; ++j) g.add_edge(i, j, w);
  return g;
}

inline WeightedGraph path_graph(std::size_t n, double w = 1.0) {
  WeightedGraph g(n);
  for (node_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, w);
  return g;
}

inline WeightedGraph ring_graph(std::size_t n, double w = 1.0) {
  WeightedGraph g = path_graph(n, w);
  g.add_edge(0, n - 1, w);
  return g;
}

inline WeightedGraph single_edge() { return path_graph(2); }

/// Bordered-inverse oracle: L^† = (L + J/n)^{-1} − J/n.
inline Eigen::MatrixXd bordered_pinv(const Eigen::MatrixXd& L) {
  const auto n = L.rows();
  const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return Eigen::MatrixXd(L + J).inverse() - J;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

inline CandidateSet random_candidates(const WeightedGraph& g, std::size_t p, rng_t& rng, WeightRange w = {0.5, 2.0},
                                      bool exclude_existing = false) {
  std::vector<Link> links;
  for (const Edge& e : random_pairs(g, p, exclude_existing, rng)) links.push_back({e, detail::draw_weight(rng, w)});
  return CandidateSet(std::move(links));
}

inline std::vector<MeasureSpec> all_kinds() {
  return {MeasureSpec::zeta(1.0),          MeasureSpec::zeta(2.0),     MeasureSpec::gamma_entropy(5.0),
          MeasureSpec::transient(1.0),     MeasureSpec::hankel(),      MeasureSpec::uncertainty_volume(),
          MeasureSpec::hardy_schatten(3.0), MeasureSpec::mq(0.5)};
}

/// One representative of each of the seven kinds.
inline std::vector<MeasureSpec> seven_kinds() {
  return {MeasureSpec::zeta(2.0),        MeasureSpec::gamma_entropy(5.0), MeasureSpec::transient(1.0),
          MeasureSpec::hankel(),         MeasureSpec::uncertainty_volume(), MeasureSpec::hardy_schatten(3.0),
          MeasureSpec::mq(0.5)};
}

}  // namespace fixtures

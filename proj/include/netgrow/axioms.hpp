#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "netgrow/error.hpp"
#include "netgrow/graph.hpp"
#include "netgrow/measures.hpp"
#include "netgrow/random.hpp"

namespace netgrow {

struct AxiomOptions {
  std::size_t min_nodes = 5;
  std::size_t max_nodes = 20;
  double tolerance = 1e-9;  // relative to max(1, |value|)
};

struct AxiomReport {
  std::size_t trials = 0;
  std::size_t monotonicity_failures = 0;
  std::size_t convexity_failures = 0;
  std::size_t invariance_failures = 0;
  std::string witness;  // first violation found

  bool ok() const { return monotonicity_failures + convexity_failures + invariance_failures == 0; }
};

namespace detail {

inline bool leq_tol(double a, double b, double tol) {
  if (a <= b) return true;
  return a - b <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool eq_tol(double a, double b, double tol) { return leq_tol(a, b, tol) && leq_tol(b, a, tol); }

inline WeightedGraph axiom_graph(std::size_t n, rng_t& rng) {
  const auto extra = std::uniform_int_distribution<std::size_t>(n / 2, n)(rng);
  return random_connected_graph(n, extra, rng, {0.2, 2.0});
}

}  // namespace detail

/// Randomised check of monotonicity, convexity and orthogonal (permutation) invariance
/// for any ρ: Laplacian matrix → extended real.
template <class Rho>
AxiomReport check_axioms(Rho&& rho, std::size_t trials, std::uint64_t seed, const AxiomOptions& opt = {}) {
  rng_t rng(seed);
  AxiomReport report;
  std::uniform_int_distribution<std::size_t> pick_n(opt.min_nodes, opt.max_nodes);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto note = [&](const std::string& what) {
    if (report.witness.empty()) report.witness = what;
  };

  for (std::size_t t = 0; t < trials; ++t) {
    ++report.trials;
    const std::size_t n = pick_n(rng);

    // Monotonicity: L2 ⪯ L1 = L2 + Σ w_e L_e.
    const WeightedGraph g2 = detail::axiom_graph(n, rng);
    WeightedGraph g1 = g2;
    const auto additions = std::uniform_int_distribution<int>(1, 3)(rng);
    std::uniform_int_distribution<node_t> pick_node(0, n - 1);
    for (int a = 0; a < additions; ++a) {
      node_t i = pick_node(rng), j = pick_node(rng);
      while (i == j) j = pick_node(rng);
      g1.reinforce(i, j, 0.1 + 2.0 * unit(rng));
    }
    const double r1 = rho(g1.laplacian()), r2 = rho(g2.laplacian());
    if (!detail::leq_tol(r1, r2, opt.tolerance)) {
      ++report.monotonicity_failures;
      std::ostringstream os;
      os << "monotonicity: n=" << n << " ρ(L1)=" << r1 << " > ρ(L2)=" << r2 << " with L2 ⪯ L1";
      note(os.str());
    }

    // Convexity along a random chord.
    const Eigen::MatrixXd La = detail::axiom_graph(n, rng).laplacian();
    const Eigen::MatrixXd Lb = detail::axiom_graph(n, rng).laplacian();
    const double alpha = 0.02 + 0.96 * unit(rng);
    const double mixed = rho(Eigen::MatrixXd(alpha * La + (1.0 - alpha) * Lb));
    const double chord = alpha * rho(La) + (1.0 - alpha) * rho(Lb);
    if (!detail::leq_tol(mixed, chord, opt.tolerance)) {
      ++report.convexity_failures;
      std::ostringstream os;
      os << "convexity: n=" << n << " alpha=" << alpha << " ρ(mix)=" << mixed << " > " << chord;
      note(os.str());
    }

    // Invariance under a random permutation U: ρ(U L Uᵀ) = ρ(L).
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> P(Eigen::Map<Eigen::VectorXi>(perm.data(), static_cast<Eigen::Index>(n)));
    const Eigen::MatrixXd permuted = P * La * P.transpose();
    const double rp = rho(permuted), ra = rho(La);
    if (!detail::eq_tol(rp, ra, opt.tolerance)) {
      ++report.invariance_failures;
      std::ostringstream os;
      os << "invariance: n=" << n << " ρ(ULUᵀ)=" << rp << " ≠ ρ(L)=" << ra;
      note(os.str());
    }
  }
  return report;
}

inline AxiomReport check_axioms(const MeasureSpec& m, std::size_t trials, std::uint64_t seed,
                                const AxiomOptions& opt = {}) {
  return check_axioms([&m](const Eigen::MatrixXd& L) { return evaluate(m, L).value; }, trials, seed, opt);
}

/// Throws axiom_violation carrying the first witness.
inline void require_axioms(const AxiomReport& report) {
  if (!report.ok()) throw error(errc::axiom_violation, report.witness);
}

struct SupermodularityReport {
  std::size_t trials = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  double worst_gap = infinity;  // min over trials of ρ̃(G1∧G2) + ρ̃(G1∨G2) − ρ̃(G1) − ρ̃(G2)
  std::string witness;

  bool ok() const { return violations == 0; }
};

/// Randomised test of ρ̃(G1∧G2) + ρ̃(G1∨G2) ≥ ρ̃(G1) + ρ̃(G2) on graph pairs sharing a spanning tree.
inline SupermodularityReport supermodularity_check(const MeasureSpec& m, std::size_t trials, std::uint64_t seed,
                                                   double tolerance = 1e-9) {
  rng_t rng(seed);
  SupermodularityReport report;
  std::uniform_int_distribution<std::size_t> pick_n(5, 12);
  std::uniform_real_distribution<double> weight(0.2, 2.0);
  for (std::size_t t = 0; t < trials; ++t) {
    ++report.trials;
    const std::size_t n = pick_n(rng);
    const WeightedGraph tree = random_connected_graph(n, 0, rng);
    WeightedGraph g1(n), g2(n);
    for (const auto& [e, w] : tree.edges()) {
      g1.add_edge(e.u, e.v, weight(rng));
      g2.add_edge(e.u, e.v, weight(rng));
    }
    for (auto* g : {&g1, &g2}) {
      for (const Edge& e : random_pairs(tree, n / 2 + 1, true, rng)) g->add_edge(e.u, e.v, weight(rng));
    }
    const WeightedGraph meet = graph_meet(g1, g2);
    const WeightedGraph join = graph_union(g1, g2);
    if (!meet.is_connected() || !join.is_connected()) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    const double a = evaluate(m, meet.laplacian()).value;
    const double b = evaluate(m, join.laplacian()).value;
    const double c = evaluate(m, g1.laplacian()).value;
    const double d = evaluate(m, g2.laplacian()).value;
    const double gap = (a + b) - (c + d);
    const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    report.worst_gap = std::min(report.worst_gap, gap);
    if (gap < -tolerance * scale) {
      ++report.violations;
      if (report.witness.empty()) {
        std::ostringstream os;
        os << "n=" << n << " gap=" << gap;
        report.witness = os.str();
      }
    }
  }
  return report;
}

}  // namespace netgrow

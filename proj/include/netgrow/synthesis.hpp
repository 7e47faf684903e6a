#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netgrow/error.hpp"
#include "netgrow/graph.hpp"
#include "netgrow/laplacian.hpp"
#include "netgrow/measures.hpp"
#include "netgrow/secular.hpp"

namespace netgrow {

/// A candidate link with its fixed weight ϖ(e).
struct Link {
  Edge edge;
  double weight = 1.0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Candidate links: distinct canonical pairs with positive weights. Pairs may coincide
/// with existing edges, in which case adding the link reinforces that edge.
class CandidateSet {
 public:
  CandidateSet() = default;

  explicit CandidateSet(std::vector<Link> links) : links_(std::move(links)) {
    std::vector<Edge> seen;
    seen.reserve(links_.size());
    for (const auto& l : links_) {
      if (l.edge.u >= l.edge.v) throw error(errc::invalid_parameter, "candidate edge must be canonical (u < v)");
      if (!(l.weight > 0.0) || !std::isfinite(l.weight)) {
        throw error(errc::invalid_parameter, "candidate weight must be positive and finite");
      }
      seen.push_back(l.edge);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw error(errc::duplicate_edge, "candidate set contains a repeated pair");
    }
  }

  std::size_t size() const noexcept { return links_.size(); }
  bool empty() const noexcept { return links_.empty(); }
  const Link& operator[](std::size_t i) const { return links_[i]; }
  const std::vector<Link>& links() const noexcept { return links_; }
  auto begin() const { return links_.begin(); }
  auto end() const { return links_.end(); }

  /// Checks every endpoint is a node of an n-node graph.
  void validate_for(std::size_t n) const {
    for (const auto& l : links_) {
      if (l.edge.v >= n) throw error(errc::invalid_parameter, "candidate " + to_string(l.edge) + " out of range");
    }
  }

  /// Every pair of an n-node graph with a common weight.
  static CandidateSet complete(std::size_t n, double weight) {
    std::vector<Link> links;
    for (node_t i = 0; i < n; ++i)
      for (node_t j = i + 1; j < n; ++j) links.push_back({{i, j}, weight});
    return CandidateSet(std::move(links));
  }

 private:
  std::vector<Link> links_;
};

enum class Algorithm { brute_force, greedy, linearized };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::brute_force: return "brute";
    case Algorithm::greedy: return "greedy";
    case Algorithm::linearized: return "linear";
  }
  return "?";
}

struct SynthesisResult {
  Algorithm algorithm = Algorithm::greedy;
  MeasureSpec measure;
  std::vector<Link> chosen;           // in order of addition
  std::vector<double> values;         // ρ before any addition, then after each (k + 1 entries)
  std::vector<double> step_seconds;   // k entries
  double total_seconds = 0.0;
  std::size_t tie_breaks = 0;
  std::optional<std::uint64_t> seed;  // set only by randomised callers

  double final_value() const { return values.back(); }
};

struct SynthesisOptions {
  double brute_force_cap = 2e6;  // max number of k-subsets enumerated
};

/// Scores are tied iff |s1 − s2| ≤ 1e-12 · max(1, |s1|).
inline constexpr double tie_tolerance = 1e-12;

inline bool scores_tied(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= tie_tolerance * std::max(1.0, std::abs(a));
}

struct Selection {
  std::size_t index = 0;
  bool tied = false;
};

/// Maximum score; among scores tied with the maximum, the lexicographically smallest edge.
/// Independent of the order in which candidates are listed.
inline Selection select_best(std::span<const double> scores, std::span<const Edge> edges) {
  if (scores.empty()) throw error(errc::invalid_parameter, "no candidates to select from");
  const double top = *std::max_element(scores.begin(), scores.end(), [](double a, double b) {
    return std::isnan(a) || (!std::isnan(b) && a < b);
  });
  Selection sel{scores.size(), false};
  std::size_t ties = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores_tied(scores[i], top)) continue;
    ++ties;
    if (sel.index == scores.size() || edges[i] < edges[sel.index]) sel.index = i;
  }
  sel.tied = ties > 1;
  return sel;
}

// ---------------------------------------------------------------------------
// Closed forms for ζ_1, ζ_2², υ

inline bool has_closed_form(const MeasureSpec& m) {
  return (m.kind == MeasureKind::zeta && (m.param == 1.0 || m.param == 2.0)) ||
         m.kind == MeasureKind::uncertainty_volume;
}

/// ρ(L) − ρ(L + wL_e) from r_e(L), r_e(L²), r_e(L³) only. For ζ_2 the decrease of ζ_2² is returned.
inline double closed_form_delta(const MeasureSpec& m, const EdgeResistanceView& r, double w) {
  if (!has_closed_form(m)) throw error(errc::unsupported_measure, to_string(m) + " has no closed-form update");
  const double c = w / (1.0 + w * r.r1);  // 1 / (w^{-1} + r_e(L))
  if (m.kind == MeasureKind::uncertainty_volume) return std::log1p(r.r1 * w);
  if (m.param == 1.0) return r.r2 * c;
  return 2.0 * r.r3 * c - (r.r2 * c) * (r.r2 * c);
}

inline double closed_form_delta(const MeasureSpec& m, const LaplacianState& s, const Edge& e, double w) {
  if (!(w > 0.0)) throw error(errc::invalid_parameter, "link weight must be positive");
  return closed_form_delta(m, edge_resistances(s, e), w);
}

// ---------------------------------------------------------------------------
// Single-link machinery

/// Nonzero spectrum of (L + wL_e)^† from the rank-one downdate L^† − (w^{-1}+r_e)^{-1} U_e.
inline std::vector<double> downdated_inverse_spectrum(const Spectrum& spec, double r1, const Edge& e, double w) {
  const Eigen::Index n = spec.values.size();
  std::vector<double> mu(static_cast<std::size_t>(n - 1)), z(mu.size());
  const auto i = static_cast<Eigen::Index>(e.u), j = static_cast<Eigen::Index>(e.v);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double inv = 1.0 / spec.values(k);
    mu[static_cast<std::size_t>(k - 1)] = inv;
    z[static_cast<std::size_t>(k - 1)] = inv * (spec.vectors(i, k) - spec.vectors(j, k));
  }
  const double c = std::isinf(w) ? 1.0 / r1 : w / (1.0 + w * r1);
  auto out = rank_one_eigenvalues(std::move(mu), std::move(z), -c);
  for (auto& x : out) x = std::max(x, 0.0);
  return out;
}

struct SingleLinkChoice {
  Link link;
  MeasureValue value;
  std::size_t index = 0;
  bool tied = false;
};

/// Exact minimiser of ρ(L + ϖ(e)L_e) over the candidates, via the companion operator
/// on each rank-one-perturbed pseudo-inverse spectrum.
inline SingleLinkChoice best_single_link(const LaplacianState& s, const CandidateSet& c, const MeasureSpec& m) {
  if (c.empty()) throw error(errc::invalid_parameter, "candidate set is empty");
  c.validate_for(s.node_count());
  const auto spec = spectrum_of(s);
  std::vector<double> scores(c.size());
  std::vector<Edge> edges(c.size());
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    const Link& l = c[idx];
    edges[idx] = l.edge;
    const auto mu = downdated_inverse_spectrum(*spec, s.resistance(1)(static_cast<Eigen::Index>(l.edge.u),
                                                                       static_cast<Eigen::Index>(l.edge.v)),
                                               l.edge, l.weight);
    scores[idx] = -companion_evaluate(m, mu).value;
  }
  const auto sel = select_best(scores, edges);
  return {c[sel.index], {-scores[sel.index]}, sel.index, sel.tied};
}

// ---------------------------------------------------------------------------

namespace detail {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

// Σ log λ_i over the nonzero spectrum via det(L + J/n) = Π_{i≥2} λ_i.
inline double log_pseudo_determinant(const LaplacianState& s) {
  if (s.has_spectrum()) {
    const Eigen::VectorXd l = s.cached_spectrum()->nonzero();
    return l.array().log().sum();
  }
  const auto n = static_cast<Eigen::Index>(s.node_count());
  const Eigen::MatrixXd shifted = s.laplacian() + Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) throw error(errc::not_connected, "L + J/n is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// Measure value of a state, avoiding eigendecomposition for the closed-form measures.
inline double state_value(const MeasureSpec& m, const LaplacianState& s) {
  if (m.kind == MeasureKind::zeta && m.param == 1.0) return s.pinv(1).trace();
  if (m.kind == MeasureKind::zeta && m.param == 2.0) return std::sqrt(std::max(0.0, s.pinv(2).trace()));
  if (m.kind == MeasureKind::uncertainty_volume) {
    return (1.0 - static_cast<double>(s.node_count())) * std::numbers::ln2 - log_pseudo_determinant(s);
  }
  return evaluate(m, s).value;
}

inline double binomial(std::size_t p, std::size_t k) {
  if (k > p) return 0.0;
  k = std::min(k, p - k);
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(p - k + i) / static_cast<double>(i);
  return std::round(out);
}

// Trajectory of values when links are appended in order with rank-one updates.
inline void fill_trajectory(SynthesisResult& r, const LaplacianState& s0, const MeasureSpec& m) {
  LaplacianState state = s0;
  r.values.assign(1, state_value(m, state));
  r.step_seconds.clear();
  for (const Link& l : r.chosen) {
    const auto t0 = clock::now();
    const double r1 = effective_resistance(state, 1, l.edge);
    state = rank_one_augment(state, l.edge, l.weight);
    if (m.kind == MeasureKind::uncertainty_volume) {
      r.values.push_back(r.values.back() - std::log1p(r1 * l.weight));
    } else {
      r.values.push_back(state_value(m, state));
    }
    r.step_seconds.push_back(seconds_since(t0));
  }
}

}  // namespace detail

/// Simple greedy: k rounds, each adding the remaining candidate with the largest decrease.
/// ζ_1, ζ_2 and υ are scored from cached resistances; other measures through the companion
/// operator on the rank-one-downdated inverse spectrum.
inline SynthesisResult greedy(const LaplacianState& s, const CandidateSet& c, std::size_t k, const MeasureSpec& m) {
  if (k > c.size()) throw error(errc::invalid_parameter, "k exceeds the number of candidates");
  c.validate_for(s.node_count());
  const auto start = detail::clock::now();
  SynthesisResult r;
  r.algorithm = Algorithm::greedy;
  r.measure = m;

  const bool closed = has_closed_form(m);
  LaplacianState state = closed ? s : with_spectrum(s);
  r.values.push_back(detail::state_value(m, state));

  std::vector<Link> remaining = c.links();
  std::vector<double> scores;
  std::vector<Edge> edges;
  for (std::size_t step = 0; step < k; ++step) {
    const auto t0 = detail::clock::now();
    scores.resize(remaining.size());
    edges.resize(remaining.size());
    std::shared_ptr<const Spectrum> spec;
    if (!closed) spec = state.cached_spectrum();
    for (std::size_t idx = 0; idx < remaining.size(); ++idx) {
      const Link& l = remaining[idx];
      edges[idx] = l.edge;
      if (closed) {
        scores[idx] = closed_form_delta(m, edge_resistances(state, l.edge), l.weight);
      } else {
        const double r1 = effective_resistance(state, 1, l.edge);
        scores[idx] = -companion_evaluate(m, downdated_inverse_spectrum(*spec, r1, l.edge, l.weight)).value;
      }
    }
    const auto sel = select_best(scores, edges);
    r.tie_breaks += sel.tied ? 1 : 0;
    const Link pick = remaining[sel.index];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(sel.index));

    const double r1 = effective_resistance(state, 1, pick.edge);
    state = rank_one_augment(state, pick.edge, pick.weight);
    if (m.kind == MeasureKind::uncertainty_volume) {
      r.values.push_back(r.values.back() - std::log1p(r1 * pick.weight));
    } else if (closed) {
      r.values.push_back(detail::state_value(m, state));
    } else {
      state = with_spectrum(std::move(state));
      r.values.push_back(evaluate(m, state).value);
    }
    r.chosen.push_back(pick);
    r.step_seconds.push_back(detail::seconds_since(t0));
  }
  r.total_seconds = detail::seconds_since(start);
  return r;
}

/// One-shot linearisation: rank candidates by δ(e) = −ϖ(e)·tr(∇ρ(L) L_e) ≥ 0 and keep the top k.
/// The reported trajectory is the exact measure after appending the picks in δ order.
inline SynthesisResult linearized(const LaplacianState& s, const CandidateSet& c, std::size_t k, const MeasureSpec& m) {
  if (!m.differentiable()) {
    throw error(errc::non_differentiable, to_string(m) + " cannot be linearised");
  }
  if (k > c.size()) throw error(errc::invalid_parameter, "k exceeds the number of candidates");
  c.validate_for(s.node_count());
  const auto start = detail::clock::now();
  SynthesisResult r;
  r.algorithm = Algorithm::linearized;
  r.measure = m;

  const Eigen::MatrixXd grad = gradient(m, s);
  struct Scored {
    double delta;
    std::size_t idx;
  };
  std::vector<Scored> scored;
  scored.reserve(c.size());
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    scored.push_back({-c[idx].weight * directional_derivative(grad, c[idx].edge), idx});
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.delta != b.delta) return a.delta > b.delta;
    return c[a.idx].edge < c[b.idx].edge;
  });
  // Within runs of tied scores, order by edge.
  for (std::size_t head = 0; head < scored.size();) {
    std::size_t tail = head + 1;
    while (tail < scored.size() && scores_tied(scored[head].delta, scored[tail].delta)) ++tail;
    if (tail - head > 1) {
      std::sort(scored.begin() + static_cast<std::ptrdiff_t>(head), scored.begin() + static_cast<std::ptrdiff_t>(tail),
                [&](const Scored& a, const Scored& b) { return c[a.idx].edge < c[b.idx].edge; });
      if (head < k) ++r.tie_breaks;
    }
    head = tail;
  }
  for (std::size_t j = 0; j < k; ++j) r.chosen.push_back(c[scored[j].idx]);

  detail::fill_trajectory(r, s, m);
  r.total_seconds = detail::seconds_since(start);
  return r;
}

/// Exhaustive search over all k-subsets, each evaluated by a full eigendecomposition of the
/// augmented Laplacian. Ties go to the lexicographically smallest sorted edge list.
inline SynthesisResult brute_force(const LaplacianState& s, const CandidateSet& c, std::size_t k, const MeasureSpec& m,
                                   const SynthesisOptions& opt = {}) {
  if (k > c.size()) throw error(errc::invalid_parameter, "k exceeds the number of candidates");
  c.validate_for(s.node_count());
  const std::size_t p = c.size();
  const double count = detail::binomial(p, k);
  if (count > opt.brute_force_cap) {
    throw error(errc::combinatorial_blowup, "C(" + std::to_string(p) + "," + std::to_string(k) +
                                                ") subsets exceed the cap");
  }
  const auto start = detail::clock::now();
  SynthesisResult r;
  r.algorithm = Algorithm::brute_force;
  r.measure = m;

  // Candidates in lexicographic edge order so index order equals edge order.
  std::vector<Link> links = c.links();
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.edge < b.edge; });

  std::vector<std::size_t> comb(k);
  std::iota(comb.begin(), comb.end(), std::size_t{0});
  auto next_combination = [&] {
    std::size_t pos = k;
    while (pos > 0 && comb[pos - 1] == p - k + pos - 1) --pos;
    if (pos == 0) return false;
    ++comb[pos - 1];
    for (std::size_t j = pos; j < k; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  std::vector<double> scores;  // negated values, in lexicographic subset order
  scores.reserve(static_cast<std::size_t>(count));
  const Eigen::MatrixXd& L0 = s.laplacian();
  do {
    Eigen::MatrixXd L = L0;
    for (std::size_t idx : comb) add_edge_laplacian(L, links[idx].edge, links[idx].weight);
    scores.push_back(-evaluate(m, L).value);
  } while (next_combination());

  // The first subset (lexicographic) tied with the minimum value wins.
  const double top = *std::max_element(scores.begin(), scores.end());
  std::size_t best = scores.size(), ties = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores_tied(scores[i], top)) continue;
    ++ties;
    if (best == scores.size()) best = i;
  }
  r.tie_breaks = ties > 1 ? 1 : 0;
  std::iota(comb.begin(), comb.end(), std::size_t{0});
  for (std::size_t i = 0; i < best; ++i) next_combination();
  for (std::size_t idx : comb) r.chosen.push_back(links[idx]);

  // Trajectory by full recompute along the sorted chosen list.
  Eigen::MatrixXd L = L0;
  r.values.push_back(evaluate(m, L).value);
  for (const Link& l : r.chosen) {
    const auto t0 = detail::clock::now();
    add_edge_laplacian(L, l.edge, l.weight);
    r.values.push_back(evaluate(m, L).value);
    r.step_seconds.push_back(detail::seconds_since(t0));
  }
  r.total_seconds = detail::seconds_since(start);
  return r;
}

/// Dispatch by algorithm identity.
inline SynthesisResult grow(Algorithm a, const LaplacianState& s, const CandidateSet& c, std::size_t k,
                            const MeasureSpec& m, const SynthesisOptions& opt = {}) {
  switch (a) {
    case Algorithm::brute_force: return brute_force(s, c, k, m, opt);
    case Algorithm::greedy: return greedy(s, c, k, m);
    case Algorithm::linearized: return linearized(s, c, k, m);
  }
  throw error(errc::invalid_parameter, "unknown algorithm");
}

/// Applies chosen links to a graph (reinforcing existing pairs).
inline WeightedGraph augmented_graph(const WeightedGraph& g, std::span<const Link> links) {
  WeightedGraph out = g;
  for (const Link& l : links) out.reinforce(l.edge.u, l.edge.v, l.weight);
  return out;
}

}  // namespace netgrow

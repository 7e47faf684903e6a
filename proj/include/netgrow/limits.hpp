#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netgrow/error.hpp"
#include "netgrow/laplacian.hpp"
#include "netgrow/measures.hpp"
#include "netgrow/synthesis.hpp"

namespace netgrow {

namespace detail {

inline std::span<const double> spectrum_slice(const Spectrum& s, Eigen::Index first, Eigen::Index count) {
  return {s.values.data() + first, static_cast<std::size_t>(std::max<Eigen::Index>(count, 0))};
}

}  // namespace detail

/// ϱ_k = Φ(λ_{k+2}, …, λ_n, ∞, …, ∞): no choice of k links of any weights does better.
inline double lower_bound(const LaplacianState& s, const MeasureSpec& m, std::size_t k) {
  const auto spec = spectrum_of(s);
  const auto n = static_cast<Eigen::Index>(s.node_count());
  if (k == 0) return evaluate(m, s).value;
  if (static_cast<Eigen::Index>(k) >= n - 1) return limit_value(m, s.node_count());
  const auto kk = static_cast<Eigen::Index>(k);
  // 0-based: λ_{k+2} is values(k+1)
  return spectral_value(m, detail::spectrum_slice(*spec, kk + 1, n - kk - 1), k, s.node_count());
}

/// Φ(λ_2, …, λ_{n−k}, ∞, …, ∞): attainable when the candidates cover every pair and their
/// weights are large enough. The weight threshold is not constructed.
inline double upper_bound_complete(const LaplacianState& s, const MeasureSpec& m, std::size_t k) {
  const auto spec = spectrum_of(s);
  const auto n = static_cast<Eigen::Index>(s.node_count());
  if (k == 0) return evaluate(m, s).value;
  if (static_cast<Eigen::Index>(k) >= n - 1) return limit_value(m, s.node_count());
  const auto kk = static_cast<Eigen::Index>(k);
  return spectral_value(m, detail::spectrum_slice(*spec, 1, n - 1 - kk), k, s.node_count());
}

/// Φ(∞, …, ∞), reached by n − 1 links forming a spanning tree with weights → ∞.
inline double spanning_tree_limit(const LaplacianState& s, const MeasureSpec& m) {
  return limit_value(m, s.node_count());
}

/// ρ(L + κ L_T) for the star spanning tree centred at node 0, one value per κ.
inline std::vector<double> spanning_tree_sweep(const LaplacianState& s, const MeasureSpec& m,
                                               std::span<const double> kappas) {
  std::vector<double> out;
  const auto n = s.node_count();
  for (double kappa : kappas) {
    Eigen::MatrixXd L = s.laplacian();
    for (node_t j = 1; j < n; ++j) add_edge_laplacian(L, {0, j}, kappa);
    out.push_back(evaluate(m, L).value);
  }
  return out;
}

/// sup_w [ρ(L) − ρ(L + wL_e)] = ψ(L^†) − ψ(L^† − r_e(L)^{-1} U_e); +∞ when ρ is unbounded below.
inline double max_single_link_gain(const LaplacianState& s, const Edge& e, const MeasureSpec& m) {
  const auto spec = spectrum_of(s);
  const double r1 = effective_resistance(s, 1, e);
  auto mu = downdated_inverse_spectrum(*spec, r1, e, infinity);
  // With c = 1/r_e the smallest downdated eigenvalue is exactly zero.
  std::sort(mu.begin(), mu.end());
  mu.front() = 0.0;
  const double base = evaluate(m, s).value;
  const double limit = companion_evaluate(m, mu).value;
  if (std::isinf(limit) && limit < 0.0) return infinity;
  if (std::isinf(base) && std::isfinite(limit)) return infinity;
  return base - limit;
}

struct BoundsReport {
  std::size_t k = 0;
  double lower = 0.0;
  std::optional<double> upper;  // only when the candidates form a complete graph
  std::optional<double> pi_k;   // percent enhancement; absent when undefined for the measure
  double limit_value = 0.0;
  bool upper_is_conditional = true;  // upper holds only for sufficiently large weights
};

/// Whether π_k = (ϱ_0 − ϱ_k)/ϱ_0 · 100 is defined: needs finite positive ϱ_0 and finite ϱ_k.
inline bool enhancement_defined(const MeasureSpec& m, double rho0) {
  if (m.kind == MeasureKind::uncertainty_volume || m.kind == MeasureKind::mq) return false;
  return std::isfinite(rho0) && rho0 > 0.0;
}

inline BoundsReport bounds_report(const LaplacianState& s, const MeasureSpec& m, std::size_t k, bool complete_candidates) {
  BoundsReport r;
  r.k = k;
  r.lower = lower_bound(s, m, k);
  if (complete_candidates) r.upper = upper_bound_complete(s, m, k);
  r.limit_value = limit_value(m, s.node_count());
  const double rho0 = evaluate(m, s).value;
  if (enhancement_defined(m, rho0) && std::isfinite(r.lower)) r.pi_k = (rho0 - r.lower) / rho0 * 100.0;
  return r;
}

struct EnhancementRow {
  std::size_t k = 0;
  double rho_k = 0.0;
  double pi_k = 0.0;
};

/// Rows k = 0 … k_max of (k, ϱ_k, π_k) from the lower bound.
inline std::vector<EnhancementRow> enhancement_table(const LaplacianState& s, const MeasureSpec& m, std::size_t k_max) {
  const double rho0 = evaluate(m, s).value;
  if (!enhancement_defined(m, rho0)) {
    throw error(errc::unsupported_measure, "percent enhancement is undefined for " + to_string(m));
  }
  std::vector<EnhancementRow> rows;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double rho_k = lower_bound(s, m, k);
    rows.push_back({k, rho_k, (rho0 - rho_k) / rho0 * 100.0});
  }
  return rows;
}

/// Smallest k with π_k ≥ target_percent, or nothing if even k = n − 1 falls short.
inline std::optional<std::size_t> min_links_for_target(const LaplacianState& s, const MeasureSpec& m,
                                                       double target_percent) {
  const auto rows = enhancement_table(s, m, s.node_count() - 1);
  for (const auto& row : rows) {
    if (row.pi_k >= target_percent - 1e-12) return row.k;
  }
  return std::nullopt;
}

}  // namespace netgrow

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "netgrow/error.hpp"

namespace netgrow {

namespace detail {

// Secular function 1 + rho Σ z_j² / ((d_j − origin) − tau), with poles shifted to the origin
// so that tau keeps full relative accuracy near the nearest pole.
inline double secular(const std::vector<double>& shifted, const std::vector<double>& z2, double rho,
                      double tau) {
  double sum = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) sum += z2[j] / (shifted[j] - tau);
  return 1.0 + rho * sum;
}

// Bisection for the unique root of an increasing secular function on (lo, hi) in tau space.
inline double bisect_secular(const std::vector<double>& shifted, const std::vector<double>& z2,
                             double rho, double lo, double hi, double origin) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double floor = 0.25 * eps * std::abs(origin);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= std::max(floor, eps * std::max(std::abs(lo), std::abs(hi)))) break;
    if (secular(shifted, z2, rho, mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Eigenvalues (ascending) of diag(d) + rho·z zᵀ for symmetric rank-one modifications.
/// d need not be sorted; rho may have either sign. Components with negligible z and
/// clusters of (numerically) equal d are deflated before solving the secular equation.
inline std::vector<double> rank_one_eigenvalues(std::vector<double> d, std::vector<double> z, double rho) {
  if (d.size() != z.size()) throw error(errc::invalid_parameter, "d and z sizes differ");
  const std::size_t m = d.size();
  if (m == 0) return {};

  // A downdate is the update of the negated problem.
  const bool negated = rho < 0.0;
  if (negated) {
    for (auto& x : d) x = -x;
    rho = -rho;
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  double dmax = 0.0, znorm2 = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    dmax = std::max(dmax, std::abs(d[k]));
    znorm2 += z[k] * z[k];
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double spread = rho * znorm2;
  const double tol = 8.0 * eps * std::max(dmax, spread);

  std::vector<double> result;
  result.reserve(m);
  std::vector<double> poles, weights;  // non-deflated part: sorted poles, squared z
  if (spread <= tol || znorm2 == 0.0) {
    for (std::size_t k = 0; k < m; ++k) result.push_back(d[k]);
  } else {
    const double znorm = std::sqrt(znorm2);
    for (std::size_t idx : order) {
      const double dk = d[idx];
      double zk = z[idx];
      if (rho * znorm * std::abs(zk) <= tol) {
        result.push_back(dk);
        continue;
      }
      // Merge into the previous pole when the two coincide numerically; the rotation
      // leaves one eigenvalue at the pole.
      if (!poles.empty() && dk - poles.back() <= tol) {
        weights.back() += zk * zk;
        result.push_back(dk);
        continue;
      }
      poles.push_back(dk);
      weights.push_back(zk * zk);
    }
  }

  const std::size_t p = poles.size();
  std::vector<double> shifted(p);
  double total_w = 0.0;
  for (double w : weights) total_w += w;
  for (std::size_t k = 0; k < p; ++k) {
    double origin, lo, hi;
    if (k + 1 < p) {
      // Root in (poles[k], poles[k+1]); pick the nearer pole as origin.
      const double gap = poles[k + 1] - poles[k];
      const double mid = 0.5 * gap;
      for (std::size_t j = 0; j < p; ++j) shifted[j] = poles[j] - poles[k];
      if (detail::secular(shifted, weights, rho, mid) >= 0.0) {
        origin = poles[k];
        lo = 0.0;
        hi = mid;
      } else {
        origin = poles[k + 1];
        for (std::size_t j = 0; j < p; ++j) shifted[j] = poles[j] - poles[k + 1];
        lo = mid - gap;
        hi = 0.0;
      }
    } else {
      // Largest root in (poles[p-1], poles[p-1] + rho Σ z²).
      origin = poles[k];
      for (std::size_t j = 0; j < p; ++j) shifted[j] = poles[j] - poles[k];
      lo = 0.0;
      hi = rho * total_w * (1.0 + 4.0 * eps);
    }
    result.push_back(origin + detail::bisect_secular(shifted, weights, rho, lo, hi, origin));
  }

  if (negated) {
    for (auto& x : result) x = -x;
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace netgrow

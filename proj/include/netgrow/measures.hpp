#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netgrow/error.hpp"
#include "netgrow/laplacian.hpp"

namespace netgrow {

enum class MeasureKind {
  zeta,                ///< ζ_q = (Σ λ_i^{-q})^{1/q}, q ≥ 1 (q = ∞ allowed)
  gamma_entropy,       ///< I_γ, +∞ when γ < 1/λ_2
  transient,           ///< τ_t = Σ (1 − e^{−λ_i t}) / (2λ_i)
  hankel,              ///< η = 1 / (2λ_2)
  uncertainty_volume,  ///< υ = (1 − n) log 2 − Σ log λ_i
  hardy_schatten,      ///< θ_p = α_0 ζ_{p−1}^{1−1/p}, p ∈ [2, ∞]
  mq,                  ///< 𝔪_q = −Σ λ_i^q, q ∈ [0, 1]
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// A systemic performance measure and its scalar parameter (q, γ, t or p; unused for η, υ).
struct MeasureSpec {
  MeasureKind kind = MeasureKind::zeta;
  double param = 1.0;

  static MeasureSpec zeta(double q) {
    if (!(q >= 1.0)) throw error(errc::invalid_parameter, "zeta requires q ≥ 1");
    return {MeasureKind::zeta, q};
  }
  static MeasureSpec gamma_entropy(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw error(errc::invalid_parameter, "gamma entropy requires γ > 0");
    return {MeasureKind::gamma_entropy, gamma};
  }
  static MeasureSpec transient(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw error(errc::invalid_parameter, "transient measure requires t > 0");
    return {MeasureKind::transient, t};
  }
  static MeasureSpec hankel() { return {MeasureKind::hankel, 0.0}; }
  static MeasureSpec uncertainty_volume() { return {MeasureKind::uncertainty_volume, 0.0}; }
  static MeasureSpec hardy_schatten(double p) {
    if (!(p >= 2.0)) throw error(errc::invalid_parameter, "Hardy-Schatten norm requires p ≥ 2");
    return {MeasureKind::hardy_schatten, p};
  }
  static MeasureSpec mq(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw error(errc::invalid_parameter, "m_q requires q in [0, 1]");
    return {MeasureKind::mq, q};
  }

  /// Supermodular over weighted graphs sharing a node set (gradient is operator-monotone).
  bool supermodular() const { return kind == MeasureKind::uncertainty_volume || kind == MeasureKind::mq; }

  /// False for the λ_2-only measures (η, ζ_∞, θ_∞), which are nonsmooth at repeated λ_2.
  bool differentiable() const {
    if (kind == MeasureKind::hankel) return false;
    if ((kind == MeasureKind::zeta || kind == MeasureKind::hardy_schatten) && std::isinf(param)) return false;
    return true;
  }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

struct MeasureValue {
  double value = 0.0;
  bool finite() const { return std::isfinite(value); }
};

// ---------------------------------------------------------------------------
// Spec string grammar: zeta:q=<f> gamma:gamma=<f> tau:t=<f> hankel volume hp:p=<f> mq:q=<f>

namespace detail {

inline double parse_real(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || std::isnan(value)) {
    throw error(errc::invalid_parameter, "bad number in measure spec '" + std::string(whole) + "'");
  }
  return value;
}

inline std::string format_param(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace detail

inline MeasureSpec parse_measure(std::string_view text) {
  if (text == "hankel") return MeasureSpec::hankel();
  if (text == "volume") return MeasureSpec::uncertainty_volume();
  const auto colon = text.find(':');
  const auto eq = text.find('=');
  if (colon == std::string_view::npos || eq == std::string_view::npos || eq < colon) {
    throw error(errc::invalid_parameter, "unrecognised measure spec '" + std::string(text) + "'");
  }
  const auto name = text.substr(0, colon);
  const auto key = text.substr(colon + 1, eq - colon - 1);
  const double value = detail::parse_real(text.substr(eq + 1), text);
  if (name == "zeta" && key == "q") return MeasureSpec::zeta(value);
  if (name == "gamma" && key == "gamma") return MeasureSpec::gamma_entropy(value);
  if (name == "tau" && key == "t") return MeasureSpec::transient(value);
  if (name == "hp" && key == "p") return MeasureSpec::hardy_schatten(value);
  if (name == "mq" && key == "q") return MeasureSpec::mq(value);
  throw error(errc::invalid_parameter, "unrecognised measure spec '" + std::string(text) + "'");
}

inline std::string to_string(const MeasureSpec& m) {
  switch (m.kind) {
    case MeasureKind::zeta: return "zeta:q=" + detail::format_param(m.param);
    case MeasureKind::gamma_entropy: return "gamma:gamma=" + detail::format_param(m.param);
    case MeasureKind::transient: return "tau:t=" + detail::format_param(m.param);
    case MeasureKind::hankel: return "hankel";
    case MeasureKind::uncertainty_volume: return "volume";
    case MeasureKind::hardy_schatten: return "hp:p=" + detail::format_param(m.param);
    case MeasureKind::mq: return "mq:q=" + detail::format_param(m.param);
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Spectral evaluation

/// log α_0 for θ_p, where α_0^{-p} = −β(p/2, −½) = 2√π Γ(p/2) / Γ((p−1)/2).
inline double hardy_schatten_log_alpha(double p) {
  if (std::isinf(p)) return 0.0;
  const double log_two_sqrt_pi = std::log(2.0) + 0.5 * std::log(std::numbers::pi);
  return -(log_two_sqrt_pi + std::lgamma(0.5 * p) - std::lgamma(0.5 * (p - 1.0))) / p;
}

/// f_γ(λ) = γ²(λ − √(λ² − γ^{-2})), written without cancellation.
inline double gamma_entropy_term(double lambda, double gamma) {
  const double s = std::sqrt(std::max(0.0, lambda * lambda - 1.0 / (gamma * gamma)));
  return 1.0 / (lambda + s);
}

inline double transient_term(double lambda, double t) { return -std::expm1(-lambda * t) / (2.0 * lambda); }

namespace detail {

// (Σ x_i^{-s})^{1/s} for x_i > 0, s > 0, evaluated relative to the smallest x.
inline double power_mean_inverse(std::span<const double> x, double s) {
  if (x.empty()) return 0.0;
  const double xmin = *std::min_element(x.begin(), x.end());
  double sum = 0.0;
  for (double v : x) sum += std::pow(xmin / v, s);
  return std::exp(-std::log(xmin) + std::log(sum) / s);
}

}  // namespace detail

/// Φ over an extended spectrum: the listed finite nonzero eigenvalues plus n_infinite
/// eigenvalues at +∞ (their limit contribution). n is the node count.
inline double spectral_value(const MeasureSpec& m, std::span<const double> lambdas, std::size_t n_infinite,
                             std::size_t n) {
  for (double x : lambdas) {
    if (!(x > 0.0)) throw error(errc::not_connected, "nonpositive eigenvalue in Φ");
  }
  const auto min_lambda = [&] { return *std::min_element(lambdas.begin(), lambdas.end()); };
  switch (m.kind) {
    case MeasureKind::zeta:
      if (lambdas.empty()) return 0.0;
      if (std::isinf(m.param)) return 1.0 / min_lambda();
      return detail::power_mean_inverse(lambdas, m.param);
    case MeasureKind::gamma_entropy: {
      if (lambdas.empty()) return 0.0;
      if (m.param * min_lambda() < 1.0) return infinity;
      double sum = 0.0;
      for (double x : lambdas) sum += gamma_entropy_term(x, m.param);
      return sum;
    }
    case MeasureKind::transient: {
      double sum = 0.0;
      for (double x : lambdas) sum += transient_term(x, m.param);
      return sum;
    }
    case MeasureKind::hankel:
      return lambdas.empty() ? 0.0 : 0.5 / min_lambda();
    case MeasureKind::uncertainty_volume: {
      if (n_infinite > 0) return -infinity;
      double sum = 0.0;
      for (double x : lambdas) sum += std::log(x);
      return (1.0 - static_cast<double>(n)) * std::numbers::ln2 - sum;
    }
    case MeasureKind::hardy_schatten: {
      if (lambdas.empty()) return 0.0;
      const double p = m.param;
      if (std::isinf(p)) return 1.0 / min_lambda();
      // α_0 (Σ λ^{1−p})^{1/p} = α_0 · ζ_{p−1}^{(p−1)/p}
      const double z = detail::power_mean_inverse(lambdas, p - 1.0);
      return std::exp(hardy_schatten_log_alpha(p) + (p - 1.0) / p * std::log(z));
    }
    case MeasureKind::mq: {
      if (n_infinite > 0 && m.param > 0.0) return -infinity;
      double sum = static_cast<double>(n_infinite);  // λ^0 = 1 for q = 0
      for (double x : lambdas) sum += std::pow(x, m.param);
      return -sum;
    }
  }
  return 0.0;
}

/// Φ(∞, …, ∞): the value approached when every nonzero eigenvalue grows without bound.
inline double limit_value(const MeasureSpec& m, std::size_t n) {
  return spectral_value(m, {}, n - 1, n);
}

/// ρ from the nonzero Laplacian eigenvalues λ_2 … λ_n.
inline MeasureValue evaluate_spectrum(const MeasureSpec& m, std::span<const double> nonzero) {
  return {spectral_value(m, nonzero, 0, nonzero.size() + 1)};
}

inline MeasureValue evaluate(const MeasureSpec& m, const LaplacianState& s) {
  const auto spec = spectrum_of(s);
  const Eigen::VectorXd lambdas = spec->nonzero();
  return evaluate_spectrum(m, std::span<const double>(lambdas.data(), static_cast<std::size_t>(lambdas.size())));
}

/// Full recompute from a Laplacian matrix (eigenvalues only).
inline MeasureValue evaluate(const MeasureSpec& m, const Eigen::MatrixXd& L) {
  const Eigen::VectorXd values = compute_eigenvalues(L);
  return evaluate_spectrum(m, std::span<const double>(values.data() + 1, static_cast<std::size_t>(values.size() - 1)));
}

/// Companion operator ψ evaluated on the nonzero spectrum μ_2 … μ_n of L^†.
/// A zero μ stands for an eigenvalue of L at +∞ and contributes its limit.
inline MeasureValue companion_evaluate(const MeasureSpec& m, std::span<const double> mu) {
  std::vector<double> pos;
  pos.reserve(mu.size());
  std::size_t zeros = 0;
  for (double x : mu) {
    if (x < 0.0 || std::isnan(x)) throw error(errc::invalid_parameter, "companion spectrum must be nonnegative");
    if (x == 0.0) {
      ++zeros;
    } else {
      pos.push_back(x);
    }
  }
  const std::size_t n = mu.size() + 1;
  const auto max_mu = [&] { return *std::max_element(pos.begin(), pos.end()); };
  const auto power_sum_root = [&](double q) {  // (Σ μ^q)^{1/q}, scaled by max μ
    const double top = max_mu();
    double sum = 0.0;
    for (double x : pos) sum += std::pow(x / top, q);
    return top * std::pow(sum, 1.0 / q);
  };
  switch (m.kind) {
    case MeasureKind::zeta:
      if (pos.empty()) return {0.0};
      if (std::isinf(m.param)) return {max_mu()};
      return {power_sum_root(m.param)};
    case MeasureKind::gamma_entropy: {
      if (pos.empty()) return {0.0};
      const double g = m.param;
      if (max_mu() > g) return {infinity};
      double sum = 0.0;
      // γ²(μ^{-1} − √(μ^{-2} − γ^{-2})) = μ / (1 + √(1 − μ²/γ²))
      for (double x : pos) sum += x / (1.0 + std::sqrt(std::max(0.0, 1.0 - (x / g) * (x / g))));
      return {sum};
    }
    case MeasureKind::transient: {
      double sum = 0.0;
      for (double x : pos) sum += -0.5 * x * std::expm1(-m.param / x);
      return {sum};
    }
    case MeasureKind::hankel:
      return {pos.empty() ? 0.0 : 0.5 * max_mu()};
    case MeasureKind::uncertainty_volume: {
      if (zeros > 0) return {-infinity};
      double sum = 0.0;
      for (double x : pos) sum += std::log(x);
      return {(1.0 - static_cast<double>(n)) * std::numbers::ln2 + sum};
    }
    case MeasureKind::hardy_schatten: {
      if (pos.empty()) return {0.0};
      const double p = m.param;
      if (std::isinf(p)) return {max_mu()};
      const double z = power_sum_root(p - 1.0);  // (Σ μ^{p−1})^{1/(p−1)}
      return {std::exp(hardy_schatten_log_alpha(p) + (p - 1.0) / p * std::log(z))};
    }
    case MeasureKind::mq: {
      if (zeros > 0 && m.param > 0.0) return {-infinity};
      double sum = static_cast<double>(zeros);
      for (double x : pos) sum += std::pow(x, -m.param);
      return {-sum};
    }
  }
  return {0.0};
}

// ---------------------------------------------------------------------------
// Derivatives

/// ∂Φ/∂λ_i for each nonzero eigenvalue (ascending λ_2 … λ_n).
inline std::vector<double> spectral_derivative(const MeasureSpec& m, std::span<const double> lambdas) {
  const std::size_t k = lambdas.size();
  std::vector<double> g(k, 0.0);
  if (k == 0) return g;
  const double lmin = *std::min_element(lambdas.begin(), lambdas.end());
  const auto simple_min = [&] {
    // λ_2 must be simple for the λ_2-only measures.
    const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
    std::size_t count = 0;
    for (double x : lambdas) count += (x - lmin <= 1e-8 * lmax) ? 1 : 0;
    if (count > 1) throw error(errc::non_differentiable, "λ_2 is a repeated eigenvalue");
  };
  // weights w_i = x_i^{-s} / Σ x_j^{-s}, scaled by the smallest x
  const auto normalised_weights = [&](double s) {
    std::vector<double> w(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += (w[i] = std::pow(lmin / lambdas[i], s));
    for (auto& x : w) x /= sum;
    return w;
  };

  switch (m.kind) {
    case MeasureKind::zeta: {
      if (std::isinf(m.param)) {
        simple_min();
        for (std::size_t i = 0; i < k; ++i) g[i] = lambdas[i] == lmin ? -1.0 / (lmin * lmin) : 0.0;
        return g;
      }
      const double z = detail::power_mean_inverse(lambdas, m.param);
      const auto w = normalised_weights(m.param);
      for (std::size_t i = 0; i < k; ++i) g[i] = -z * w[i] / lambdas[i];
      return g;
    }
    case MeasureKind::gamma_entropy: {
      const double inv_g2 = 1.0 / (m.param * m.param);
      if (m.param * lmin <= 1.0) {
        throw error(errc::non_differentiable, "γ-entropy is not differentiable for γ ≤ 1/λ_2");
      }
      for (std::size_t i = 0; i < k; ++i) {
        const double x = lambdas[i];
        const double s = std::sqrt(x * x - inv_g2);
        g[i] = -1.0 / (s * (x + s));
      }
      return g;
    }
    case MeasureKind::transient: {
      const double t = m.param;
      for (std::size_t i = 0; i < k; ++i) {
        const double x = lambdas[i];
        const double e = std::exp(-x * t);
        g[i] = (x * t * e + std::expm1(-x * t)) / (2.0 * x * x);
      }
      return g;
    }
    case MeasureKind::hankel:
      simple_min();
      for (std::size_t i = 0; i < k; ++i) g[i] = lambdas[i] == lmin ? -0.5 / (lmin * lmin) : 0.0;
      return g;
    case MeasureKind::uncertainty_volume:
      for (std::size_t i = 0; i < k; ++i) g[i] = -1.0 / lambdas[i];
      return g;
    case MeasureKind::hardy_schatten: {
      const double p = m.param;
      if (std::isinf(p)) {
        simple_min();
        for (std::size_t i = 0; i < k; ++i) g[i] = lambdas[i] == lmin ? -1.0 / (lmin * lmin) : 0.0;
        return g;
      }
      const double theta = spectral_value(m, lambdas, 0, k + 1);
      const auto w = normalised_weights(p - 1.0);
      for (std::size_t i = 0; i < k; ++i) g[i] = theta * (1.0 - p) / p * w[i] / lambdas[i];
      return g;
    }
    case MeasureKind::mq:
      for (std::size_t i = 0; i < k; ++i) g[i] = -m.param * std::pow(lambdas[i], m.param - 1.0);
      return g;
  }
  return g;
}

/// ∇ρ(L) = Σ_{i≥2} ∂Φ/∂λ_i · u_i u_iᵀ (acts on the range space 𝟙^⊥).
inline Eigen::MatrixXd gradient(const MeasureSpec& m, const LaplacianState& s) {
  const auto spec = spectrum_of(s);
  const Eigen::Index n = spec->values.size();
  const Eigen::VectorXd lambdas = spec->nonzero();
  const auto g = spectral_derivative(m, std::span<const double>(lambdas.data(), static_cast<std::size_t>(n - 1)));
  const auto W = spec->vectors.rightCols(n - 1);
  const Eigen::Map<const Eigen::VectorXd> coeffs(g.data(), n - 1);
  Eigen::MatrixXd grad = W * coeffs.asDiagonal() * W.transpose();
  return 0.5 * (grad + grad.transpose());
}

/// d/dε ρ(L + εL_e) at ε = 0, i.e. tr(∇ρ(L) L_e).
inline double directional_derivative(const Eigen::MatrixXd& grad, const Edge& e) {
  const auto i = static_cast<Eigen::Index>(e.u), j = static_cast<Eigen::Index>(e.v);
  return grad(i, i) + grad(j, j) - grad(i, j) - grad(j, i);
}

}  // namespace netgrow

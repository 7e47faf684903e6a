#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/random/normal_distribution.hpp>

#include "netgrow/error.hpp"
#include "netgrow/laplacian.hpp"
#include "netgrow/measures.hpp"
#include "netgrow/random.hpp"

namespace netgrow {

/// Euler–Maruyama settings for ẋ = −Lx + σξ, y = M_n x, x(0) = 0.
/// dt ≤ 0 and t_final ≤ 0 select defaults of 0.005/λ_n and 20/λ_2.
struct SimConfig {
  double dt = 0.0;
  double t_final = 0.0;
  std::size_t trials = 10000;
  std::uint64_t seed = 42;
  double noise_intensity = 1.0;
};

struct CovarianceEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double time = 0.0;
  double dt = 0.0;  // step actually used (≤ the configured dt)
  std::size_t steps = 0;
  std::size_t trials = 0;
};

inline constexpr double max_dt_lambda = 0.1;
inline constexpr double default_dt_lambda = 0.005;
inline constexpr double stationary_horizon_lambda = 20.0;
inline constexpr double validation_sigmas = 3.0;

/// Fills defaults and checks dt ≤ 0.1/λ_n and trials ≥ 100.
inline SimConfig resolve_config(const LaplacianState& s, SimConfig cfg) {
  const auto spec = spectrum_of(s);
  const double lambda_n = spec->values(spec->values.size() - 1);
  const double lambda_2 = spec->algebraic_connectivity();
  if (cfg.dt <= 0.0) cfg.dt = default_dt_lambda / lambda_n;
  if (cfg.t_final <= 0.0) cfg.t_final = stationary_horizon_lambda / lambda_2;
  if (!std::isfinite(cfg.dt) || cfg.dt * lambda_n > max_dt_lambda * (1.0 + 1e-12)) {
    throw error(errc::unstable_step_size, "dt must not exceed 0.1/lambda_n = " + std::to_string(max_dt_lambda / lambda_n));
  }
  if (cfg.trials < 100) throw error(errc::invalid_parameter, "at least 100 trials are required");
  if (!(cfg.noise_intensity >= 0.0) || !std::isfinite(cfg.noise_intensity)) {
    throw error(errc::invalid_parameter, "noise intensity must be finite and nonnegative");
  }
  return cfg;
}

namespace detail {

/// Independent stream per trial so estimates do not depend on blocking or scheduling.
inline rng_t trial_stream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return rng_t(seq);
}

inline constexpr std::size_t trial_block = 64;

/// Running mean and variance accumulated in trial order.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

inline Eigen::VectorXd output_energy(const Eigen::MatrixXd& X) {
  const Eigen::RowVectorXd mean = X.colwise().mean();
  return (X.rowwise() - mean).colwise().squaredNorm().transpose();
}

inline std::size_t step_count(double t, double dt) {
  if (t <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
}

}  // namespace detail

/// Ensemble estimate of E{yᵀ(t) y(t)} with its standard error.
inline CovarianceEstimate simulate_output_covariance(const LaplacianState& s, const SimConfig& config, double t) {
  const SimConfig cfg = resolve_config(s, config);
  if (!(t >= 0.0) || t > cfg.t_final * (1.0 + 1e-12)) {
    throw error(errc::invalid_parameter, "simulation time must lie in [0, t_final]");
  }
  const auto n = static_cast<Eigen::Index>(s.node_count());
  const std::size_t steps = detail::step_count(t, cfg.dt);
  const double h = steps == 0 ? cfg.dt : t / static_cast<double>(steps);
  const double scale = cfg.noise_intensity * std::sqrt(h);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - h * s.laplacian();

  boost::random::normal_distribution<double> normal;
  detail::Moments acc;
  std::vector<rng_t> streams;
  for (std::size_t b0 = 0; b0 < cfg.trials; b0 += detail::trial_block) {
    const std::size_t width = std::min(detail::trial_block, cfg.trials - b0);
    streams.clear();
    for (std::size_t j = 0; j < width; ++j) streams.push_back(detail::trial_stream(cfg.seed, b0 + j));
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(width));
    Eigen::MatrixXd noise(n, static_cast<Eigen::Index>(width));
    for (std::size_t k = 0; k < steps; ++k) {
      for (std::size_t j = 0; j < width; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) noise(i, static_cast<Eigen::Index>(j)) = normal(streams[j]);
      }
      X = A * X + scale * noise;
    }
    const Eigen::VectorXd energy = detail::output_energy(X);
    for (Eigen::Index j = 0; j < energy.size(); ++j) acc.add(energy(j));
  }
  return {acc.mean, acc.std_error(), t, h, steps, cfg.trials};
}

struct StepHalvingReport {
  CovarianceEstimate coarse;
  CovarianceEstimate fine;
  double difference = 0.0;  // fine − coarse

  /// Weak-order consistency: the shift from halving dt stays below one standard error.
  bool consistent() const { return std::abs(difference) < std::max(coarse.std_error, fine.std_error); }
};

/// Runs dt and dt/2 on the same Brownian paths (each coarse increment is the sum of two fine ones).
inline StepHalvingReport step_halving_check(const LaplacianState& s, const SimConfig& config, double t) {
  const SimConfig cfg = resolve_config(s, config);
  if (!(t > 0.0) || t > cfg.t_final * (1.0 + 1e-12)) {
    throw error(errc::invalid_parameter, "simulation time must lie in (0, t_final]");
  }
  const auto n = static_cast<Eigen::Index>(s.node_count());
  const std::size_t steps = detail::step_count(t, cfg.dt);
  const double h = t / static_cast<double>(steps);
  const double half = 0.5 * h;
  const Eigen::MatrixXd Ac = Eigen::MatrixXd::Identity(n, n) - h * s.laplacian();
  const Eigen::MatrixXd Af = Eigen::MatrixXd::Identity(n, n) - half * s.laplacian();
  const double sf = cfg.noise_intensity * std::sqrt(half);

  boost::random::normal_distribution<double> normal;
  detail::Moments coarse, fine;
  std::vector<rng_t> streams;
  for (std::size_t b0 = 0; b0 < cfg.trials; b0 += detail::trial_block) {
    const std::size_t width = std::min(detail::trial_block, cfg.trials - b0);
    const auto w = static_cast<Eigen::Index>(width);
    streams.clear();
    for (std::size_t j = 0; j < width; ++j) streams.push_back(detail::trial_stream(cfg.seed, b0 + j));
    Eigen::MatrixXd Xc = Eigen::MatrixXd::Zero(n, w), Xf = Eigen::MatrixXd::Zero(n, w);
    Eigen::MatrixXd d1(n, w), d2(n, w);
    for (std::size_t k = 0; k < steps; ++k) {
      for (std::size_t j = 0; j < width; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) d1(i, static_cast<Eigen::Index>(j)) = sf * normal(streams[j]);
        for (Eigen::Index i = 0; i < n; ++i) d2(i, static_cast<Eigen::Index>(j)) = sf * normal(streams[j]);
      }
      Xf = Af * Xf + d1;
      Xf = Af * Xf + d2;
      Xc = Ac * Xc + (d1 + d2);
    }
    const Eigen::VectorXd ec = detail::output_energy(Xc), ef = detail::output_energy(Xf);
    for (Eigen::Index j = 0; j < w; ++j) {
      coarse.add(ec(j));
      fine.add(ef(j));
    }
  }
  StepHalvingReport r;
  r.coarse = {coarse.mean, coarse.std_error(), t, h, steps, cfg.trials};
  r.fine = {fine.mean, fine.std_error(), t, half, 2 * steps, cfg.trials};
  r.difference = fine.mean - coarse.mean;
  return r;
}

struct ValidationReport {
  std::string measure;
  double closed_form = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
  double effect_size = 0.0;  // (estimate − closed_form) / closed_form
  bool passed = false;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::size_t trials = 0;
  double horizon = 0.0;  // simulated time
};

/// Compares a Monte Carlo estimate with ζ_1/2 (stationary, t = t_final) or τ_t.
/// The closed form τ_t = Σ(1 − e^{−λt})/(2λ) equals E{yᵀy} at time t/2, which is where τ_t is sampled.
inline ValidationReport validate_measure(const LaplacianState& s, const MeasureSpec& m, const SimConfig& config) {
  SimConfig cfg = resolve_config(s, config);
  ValidationReport r;
  r.measure = to_string(m);
  double horizon = 0.0;
  if (m.kind == MeasureKind::zeta && m.param == 1.0) {
    const double min_horizon = stationary_horizon_lambda / spectrum_of(s)->algebraic_connectivity();
    if (cfg.t_final < min_horizon * (1.0 - 1e-12)) {
      throw error(errc::invalid_parameter, "stationary validation needs t_final >= 20/lambda_2");
    }
    horizon = cfg.t_final;
    r.closed_form = 0.5 * evaluate(m, s).value;
  } else if (m.kind == MeasureKind::transient) {
    horizon = 0.5 * m.param;
    cfg.t_final = std::max(cfg.t_final, horizon);
    r.closed_form = evaluate(m, s).value;
  } else {
    throw error(errc::unsupported_measure, "Monte Carlo validation supports zeta:q=1 and tau only");
  }
  r.closed_form *= cfg.noise_intensity * cfg.noise_intensity;
  const auto est = simulate_output_covariance(s, cfg, horizon);
  r.estimate = est.estimate;
  r.std_error = est.std_error;
  const double diff = r.estimate - r.closed_form;
  r.z_score = r.std_error > 0.0 ? diff / r.std_error : (diff == 0.0 ? 0.0 : std::copysign(infinity, diff));
  r.effect_size = r.closed_form != 0.0 ? diff / r.closed_form : diff;
  r.passed = std::abs(r.z_score) <= validation_sigmas;
  r.seed = cfg.seed;
  r.dt = est.dt;
  r.trials = est.trials;
  r.horizon = horizon;
  return r;
}

}  // namespace netgrow

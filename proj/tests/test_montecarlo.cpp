#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace netgrow;
using namespace fixtures;

namespace {

// E{yᵀ(t) y(t)} for an Ornstein–Uhlenbeck mode is (1 − e^{−2λt}) / (2λ).
double output_energy_at(const LaplacianState& s, double t) {
  double sum = 0.0;
  const Eigen::VectorXd l = spectrum_of(s)->nonzero();
  for (Eigen::Index i = 0; i < l.size(); ++i) sum += -std::expm1(-2.0 * l(i) * t) / (2.0 * l(i));
  return sum;
}

}  // namespace

TEST(MonteCarlo, StationaryCompleteGraph) {
  const auto s = build_laplacian(complete_graph(3));
  SimConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 42;
  cfg.t_final = 10.0 / 3.0;
  const auto est = simulate_output_covariance(s, cfg, cfg.t_final);
  EXPECT_LE(std::abs(est.estimate - 1.0 / 3.0), 3.0 * est.std_error);
  EXPECT_GT(est.std_error, 0.0);
}

TEST(MonteCarlo, ZeroTimeIsExactlyZero) {
  const auto s = build_laplacian(complete_graph(3));
  SimConfig cfg;
  cfg.trials = 100;
  const auto est = simulate_output_covariance(s, cfg, 0.0);
  EXPECT_EQ(est.estimate, 0.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, NoNoiseStaysAtConsensus) {
  const auto s = build_laplacian(path_graph(5));
  SimConfig cfg;
  cfg.trials = 100;
  cfg.noise_intensity = 0.0;
  const auto est = simulate_output_covariance(s, cfg, 1.0);
  EXPECT_EQ(est.estimate, 0.0);
}

TEST(MonteCarlo, TransientClosedFormIsSampledAtHalfTime) {
  const auto s = build_laplacian(complete_graph(3));
  SimConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 7;
  const auto report = validate_measure(s, MeasureSpec::transient(0.5), cfg);
  EXPECT_NEAR(report.closed_form, 2.0 * (1.0 - std::exp(-1.5)) / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(report.horizon, 0.25);
  EXPECT_TRUE(report.passed) << report.z_score;

  // The raw statistic at time t follows the e^{−2λt} form.
  cfg.t_final = 1.0;
  const auto raw = simulate_output_covariance(s, cfg, 0.5);
  EXPECT_LE(std::abs(raw.estimate - output_energy_at(s, 0.5)), 3.0 * raw.std_error);
  EXPECT_GT(std::abs(raw.estimate - report.closed_form), 3.0 * raw.std_error);
}

TEST(MonteCarlo, ValidateStationaryOnRandomGraph) {
  rng_t rng(10);
  const auto s = build_laplacian(random_connected_graph(10, 20, rng, {0.5, 1.5}));
  SimConfig cfg;
  cfg.trials = 4000;
  cfg.seed = 99;
  const auto r = validate_measure(s, MeasureSpec::zeta(1), cfg);
  EXPECT_TRUE(r.passed) << r.z_score;
  EXPECT_NEAR(r.closed_form, 0.5 * evaluate(MeasureSpec::zeta(1), s).value, 1e-15);
  EXPECT_EQ(r.seed, 99u);
  EXPECT_EQ(r.trials, 4000u);
}

TEST(MonteCarlo, DoubledWeightsHalveStationaryEnergy) {
  rng_t rng(15);
  const auto g = random_connected_graph(10, 20, rng, {0.5, 1.5});
  WeightedGraph g2(g.node_count());
  for (const auto& [e, w] : g.edges()) g2.add_edge(e.u, e.v, 2.0 * w);
  const auto s1 = build_laplacian(g), s2 = build_laplacian(g2);
  SimConfig cfg;
  cfg.trials = 3000;
  cfg.seed = 5;
  const auto a = simulate_output_covariance(s1, cfg, resolve_config(s1, cfg).t_final);
  cfg.seed = 6;
  const auto b = simulate_output_covariance(s2, cfg, resolve_config(s2, cfg).t_final);
  const double ratio = b.estimate / a.estimate;
  const double se = ratio * std::hypot(a.std_error / a.estimate, b.std_error / b.estimate);
  EXPECT_LE(std::abs(ratio - 0.5), 3.0 * se) << ratio << " ± " << se;
}

TEST(MonteCarlo, StepHalvingWithinOneStandardError) {
  rng_t rng(16);
  const auto s = build_laplacian(random_connected_graph(10, 20, rng, {0.5, 1.5}));
  SimConfig cfg;
  cfg.trials = 2000;
  cfg.seed = 3;
  const auto resolved = resolve_config(s, cfg);
  const auto report = step_halving_check(s, cfg, resolved.t_final);
  EXPECT_TRUE(report.consistent()) << report.difference << " vs " << report.coarse.std_error;
  EXPECT_EQ(report.fine.steps, 2 * report.coarse.steps);
}

TEST(MonteCarlo, SeedDeterminism) {
  const auto s = build_laplacian(path_graph(4));
  SimConfig cfg;
  cfg.trials = 300;
  cfg.seed = 1234;
  const auto a = simulate_output_covariance(s, cfg, 1.0);
  const auto b = simulate_output_covariance(s, cfg, 1.0);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
  cfg.seed = 1235;
  EXPECT_NE(simulate_output_covariance(s, cfg, 1.0).estimate, a.estimate);
}

TEST(MonteCarlo, ConfigurationErrors) {
  const auto s = build_laplacian(complete_graph(3));
  SimConfig cfg;
  cfg.dt = 0.2 / 3.0;
  try {
    simulate_output_covariance(s, cfg, 1.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unstable_step_size);
  }
  cfg.dt = 0.0;
  cfg.trials = 99;
  try {
    simulate_output_covariance(s, cfg, 1.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_parameter);
  }
  cfg.trials = 100;
  cfg.t_final = 1.0;
  EXPECT_THROW(simulate_output_covariance(s, cfg, 2.0), error);
  EXPECT_THROW(validate_measure(s, MeasureSpec::hankel(), cfg), error);
  EXPECT_THROW(validate_measure(s, MeasureSpec::zeta(1), cfg), error);  // horizon below 20/λ_2
}

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace netgrow;
using namespace fixtures;

TEST(Limits, CompleteGraphExamples) {
  const auto k4 = build_laplacian(complete_graph(4));
  const auto z1 = MeasureSpec::zeta(1);
  EXPECT_NEAR(lower_bound(k4, z1, 1), 0.5, 1e-12);
  EXPECT_NEAR(upper_bound_complete(k4, z1, 1), 0.5, 1e-12);
  const auto k3 = build_laplacian(complete_graph(3));
  EXPECT_NEAR(lower_bound(k3, MeasureSpec::transient(1.0), 1), (1.0 - std::exp(-3.0)) / 6.0, 1e-14);
  EXPECT_EQ(lower_bound(k3, z1, 0), evaluate(z1, k3).value);
}

TEST(Limits, SaturatedK) {
  const auto s = build_laplacian(path_graph(5));
  for (std::size_t k : {4u, 5u, 9u}) {
    EXPECT_EQ(lower_bound(s, MeasureSpec::zeta(1), k), 0.0);
    EXPECT_EQ(lower_bound(s, MeasureSpec::transient(2.0), k), 0.0);
    EXPECT_EQ(lower_bound(s, MeasureSpec::gamma_entropy(5.0), k), 0.0);
    EXPECT_EQ(lower_bound(s, MeasureSpec::uncertainty_volume(), k), -infinity);
    EXPECT_EQ(upper_bound_complete(s, MeasureSpec::zeta(1), k), 0.0);
  }
  EXPECT_EQ(lower_bound(s, MeasureSpec::uncertainty_volume(), 1), -infinity);
  EXPECT_EQ(upper_bound_complete(build_laplacian(complete_graph(3)), MeasureSpec::uncertainty_volume(), 1), -infinity);
}

TEST(Limits, SpanningTree) {
  const auto s = build_laplacian(path_graph(4));
  EXPECT_EQ(spanning_tree_limit(s, MeasureSpec::zeta(1)), 0.0);
  EXPECT_EQ(spanning_tree_limit(s, MeasureSpec::uncertainty_volume()), -infinity);
  const std::vector<double> kappas{10.0, 1e2, 1e3, 1e4};
  const auto sweep = spanning_tree_sweep(s, MeasureSpec::zeta(1), kappas);
  for (std::size_t i = 1; i < sweep.size(); ++i) EXPECT_LT(sweep[i], sweep[i - 1]);
  EXPECT_LT(sweep.back(), 1e-3);
}

TEST(Limits, MonotoneInK) {
  rng_t rng(61);
  for (int t = 0; t < 10; ++t) {
    const auto s = build_laplacian(random_connected_graph(10, 6, rng, {0.3, 2.0}));
    for (const auto& m : all_kinds()) {
      for (std::size_t k = 1; k < 10; ++k) {
        EXPECT_LE(lower_bound(s, m, k), lower_bound(s, m, k - 1)) << to_string(m);
        EXPECT_LE(upper_bound_complete(s, m, k), upper_bound_complete(s, m, k - 1)) << to_string(m);
        EXPECT_LE(lower_bound(s, m, k), upper_bound_complete(s, m, k));
      }
    }
  }
}

TEST(Limits, SandwichAndStrictness) {
  rng_t rng(62);
  std::size_t runs = 0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 5 + t % 6;
    const auto g = random_connected_graph(n, 2, rng, {0.3, 2.0});
    const auto s = build_laplacian(g);
    const auto finite = random_candidates(g, 5, rng);
    // Large-weight complete candidate set with small random jitter so the spectrum has no ties.
    std::vector<Link> big;
    std::uniform_real_distribution<double> jitter(1.0, 1.1);
    for (const auto& l : CandidateSet::complete(n, 1.0)) big.push_back({l.edge, 1e6 * jitter(rng)});
    const CandidateSet heavy(big);
    for (const auto& m : all_kinds()) {
      for (std::size_t k = 1; k <= 3; ++k) {
        for (auto algo : {Algorithm::brute_force, Algorithm::greedy, Algorithm::linearized}) {
          if (algo == Algorithm::linearized && !m.differentiable()) continue;
          const auto r = grow(algo, s, finite, k, m);
          EXPECT_LT(lower_bound(s, m, k), r.final_value()) << to_string(m);
          ++runs;
          const auto h = grow(algo, s, heavy, k, m);
          EXPECT_LT(lower_bound(s, m, k), h.final_value()) << to_string(m);
          const double up = upper_bound_complete(s, m, k);
          if (algo == Algorithm::brute_force && std::isfinite(up)) {
            EXPECT_LE(h.final_value(), up + 1e-6) << to_string(m) << " k=" << k;
          }
        }
      }
    }
  }
  EXPECT_GT(runs, 100u);
}

TEST(Limits, SingleLinkGainCeiling) {
  const auto two = build_laplacian(single_edge());
  EXPECT_NEAR(max_single_link_gain(two, {0, 1}, MeasureSpec::zeta(1)), 0.5, 1e-12);
  EXPECT_NEAR(closed_form_delta(MeasureSpec::zeta(1), two, {0, 1}, 1e6), 0.5, 1e-5);
  EXPECT_EQ(max_single_link_gain(two, {0, 1}, MeasureSpec::uncertainty_volume()), infinity);

  rng_t rng(63);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_connected_graph(8 + t % 5, 5, rng, {0.3, 2.0});
    const auto s = build_laplacian(g);
    const Edge e = random_pairs(g, 1, false, rng).front();
    const auto r = edge_resistances(s, e);
    const double ceiling = max_single_link_gain(s, e, MeasureSpec::zeta(1));
    EXPECT_NEAR(ceiling, r.r2 / r.r1, 1e-9 * ceiling);
    for (double w : {0.01, 1.0, 100.0, 1e4}) {
      EXPECT_LE(closed_form_delta(MeasureSpec::zeta(1), r, w), ceiling + 1e-12);
    }
    for (const auto& m : all_kinds()) {
      if (!evaluate(m, s).finite()) continue;  // I_γ outside its domain
      const double gain = max_single_link_gain(s, e, m);
      Eigen::MatrixXd L = s.laplacian();
      add_edge_laplacian(L, e, 1e3);
      EXPECT_LE(evaluate(m, s).value - evaluate(m, L).value, gain + 1e-9 * std::max(1.0, std::abs(gain)))
          << to_string(m);
    }
  }
}

TEST(Limits, EnhancementTable) {
  const auto k4 = build_laplacian(complete_graph(4));
  const auto rows = enhancement_table(k4, MeasureSpec::zeta(1), 3);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(rows[1].rho_k, 0.5, 1e-12);
  EXPECT_NEAR(rows[1].pi_k, 100.0 / 3.0, 1e-10);
  EXPECT_NEAR(rows[3].pi_k, 100.0, 1e-12);
  EXPECT_EQ(*min_links_for_target(k4, MeasureSpec::zeta(1), 0.0), 0u);
  EXPECT_EQ(*min_links_for_target(k4, MeasureSpec::zeta(1), 50.0), 2u);

  rng_t rng(64);
  const auto s = build_laplacian(random_connected_graph(12, 8, rng, {0.3, 2.0}));
  for (const auto& m : {MeasureSpec::zeta(1), MeasureSpec::transient(1.0), MeasureSpec::gamma_entropy(10.0)}) {
    const auto table = enhancement_table(s, m, 11);
    for (std::size_t k = 1; k < table.size(); ++k) EXPECT_GE(table[k].pi_k, table[k - 1].pi_k);
    EXPECT_NEAR(table.back().pi_k, 100.0, 1e-12);
  }
  for (const auto& m : {MeasureSpec::uncertainty_volume(), MeasureSpec::mq(0.5)}) {
    try {
      enhancement_table(s, m, 3);
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::unsupported_measure);
    }
  }
}

TEST(Limits, BoundsReport) {
  const auto k4 = build_laplacian(complete_graph(4));
  const auto r = bounds_report(k4, MeasureSpec::zeta(1), 1, true);
  EXPECT_NEAR(r.lower, 0.5, 1e-12);
  ASSERT_TRUE(r.upper.has_value());
  EXPECT_TRUE(r.upper_is_conditional);
  ASSERT_TRUE(r.pi_k.has_value());
  EXPECT_EQ(r.limit_value, 0.0);
  const auto v = bounds_report(k4, MeasureSpec::uncertainty_volume(), 1, false);
  EXPECT_FALSE(v.upper.has_value());
  EXPECT_FALSE(v.pi_k.has_value());
}

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "mcs/domain.hpp"

using namespace mcs;

TEST(Domain, ComputationTime) {
  EXPECT_DOUBLE_EQ(compute_computation_time(250, 50e6, 1e9), 12.5);
  EXPECT_DOUBLE_EQ(compute_computation_time(300, 0, 1e9), 0.0);
  EXPECT_DOUBLE_EQ(compute_computation_time(200, 100e6, 2e9), 10.0);
  EXPECT_THROW(compute_computation_time(200, 1, 0.0), InvalidProfile);
  EXPECT_THROW(compute_computation_time(200, 1, -1.0), InvalidProfile);
}

TEST(Domain, ZeroVarianceExecution) {
  const auto sc = test::tiny_scenario(1, 1, 1, 5, 1);
  Rng rng(3);
  const auto out = sample_execution(sc.mus[0], sc.types[0], 0, {0.0, 0.0}, rng);
  EXPECT_DOUBLE_EQ(out.t_sense, 0.1);
  EXPECT_DOUBLE_EQ(out.t_comp, 12.5);
  EXPECT_DOUBLE_EQ(out.t_comm, 2.0);
  EXPECT_NEAR(out.total_time(), 14.6, 1e-12);
  EXPECT_NEAR(out.total_energy(), 12.95, 1e-12);
  EXPECT_NEAR(out.effort_cost, 0.1978, 1e-12);
  EXPECT_DOUBLE_EQ(out.quality, 0.5);
  EXPECT_DOUBLE_EQ(out.e_sense + out.e_comp + out.e_comm, out.total_energy());
}

TEST(Domain, ZeroTimesCostNothing) {
  auto sc = test::tiny_scenario(1, 1, 1, 5, 1);
  sc.mus[0].mean_sense_time = {0.0};
  sc.mus[0].mean_comm_time = {{0.0}};
  sc.types[0].data_bits = 0.0;
  Rng rng(1);
  EXPECT_DOUBLE_EQ(sample_execution(sc.mus[0], sc.types[0], 0, {0.0, 0.0}, rng).effort_cost, 0.0);
}

TEST(Domain, ExecutionReplays) {
  const auto sc = test::tiny_scenario(2, 1, 1, 5, 1);
  Rng a(99), b(99);
  const auto x = sample_execution(sc.mus[0], sc.types[0], 1, {0.2, 0.1}, a);
  const auto y = sample_execution(sc.mus[0], sc.types[0], 1, {0.2, 0.1}, b);
  EXPECT_EQ(x.t_sense, y.t_sense);
  EXPECT_EQ(x.t_comm, y.t_comm);
  EXPECT_EQ(x.quality, y.quality);
}

TEST(Domain, QualityClamped) {
  auto sc = test::tiny_scenario(1, 1, 1, 5, 1);
  sc.mus[0].quality_mean = {{0.99}};
  Rng rng(5);
  for (int n = 0; n < 2000; ++n) {
    const auto out = sample_execution(sc.mus[0], sc.types[0], 0, {0.2, 0.5}, rng);
    ASSERT_GE(out.quality, 0.0);
    ASSERT_LE(out.quality, 1.0);
  }
}

TEST(Domain, RealizedRevenue) {
  EXPECT_DOUBLE_EQ(realized_revenue(3.0, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(realized_revenue(3.0, 1.0), 6.0);
  EXPECT_DOUBLE_EQ(realized_revenue(10.0, 0.5), 15.0);
  EXPECT_THROW(realized_revenue(1.0, 1.1), ContractViolation);
  EXPECT_THROW(realized_revenue(1.0, -0.1), ContractViolation);
}

TEST(Domain, OfferUtilities) {
  EXPECT_DOUBLE_EQ(mcsp_offer_utility(1.5, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(mcsp_offer_utility(1.0, 1.0), 0.0);
  EXPECT_NEAR(mcsp_offer_utility(0.8, 1.0), -0.2, 1e-15);
  EXPECT_NEAR(mu_offer_utility(1.0, 0.2), 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(mu_offer_utility(0.2, 0.2), 0.0);
  EXPECT_NEAR(mu_offer_utility(0.1, 0.2), -0.1, 1e-15);
}

TEST(Domain, PaymentTelescopes) {
  const auto sc = test::tiny_scenario(1, 1, 1, 5, 1);
  Rng rng(17);
  for (double pay : {0.0, 0.3, 1.7}) {
    auto out = sample_execution(sc.mus[0], sc.types[0], 0, {0.2, 0.1}, rng);
    settle(out, 1.0, pay);
    EXPECT_NEAR(out.mcsp_utility + out.mu_utility, out.realized_revenue - out.effort_cost, 1e-12);
  }
}

TEST(Domain, PaymentGrid) {
  const auto g = make_payment_grid(1.5, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g.front(), 0.0);
  EXPECT_DOUBLE_EQ(g.back(), 3.0);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
}

TEST(Domain, GridLookups) {
  const auto sc = test::tiny_scenario(1, 1, 1, 21, 1);  // step 0.1
  EXPECT_EQ(sc.level_above(0, 0, 0.45), 5);
  EXPECT_EQ(sc.level_above(0, 0, 0.5), 6);
  EXPECT_EQ(sc.level_above(0, 0, 2.0), -1);
  EXPECT_EQ(sc.nearest_level(0, 0, 0.44), 4);
  EXPECT_EQ(sc.nearest_level(0, 0, 0.46), 5);
  EXPECT_EQ(sc.nearest_level(0, 0, 9.0), 20);
}

TEST(Domain, ExpectedCostMatchesZeroNoiseDraw) {
  const auto sc = test::tiny_scenario(1, 1, 1, 5, 1);
  Rng rng(1);
  const auto out = sample_execution(sc.mus[0], sc.types[0], 0, {0.0, 0.0}, rng);
  EXPECT_NEAR(expected_effort_cost(sc.mus[0], sc.types[0], 0), out.effort_cost, 1e-15);
}

TEST(Domain, ExpectedQualityOfClampedNormal) {
  EXPECT_DOUBLE_EQ(expected_quality(0.4, 0.0), 0.4);
  Rng rng(23);
  double s = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) s += std::clamp(rng.normal(0.95, 0.1), 0.0, 1.0);
  EXPECT_NEAR(expected_quality(0.95, 0.1), s / n, 1e-3);
}

TEST(Domain, GeneratedScenarioValidates) {
  ScenarioConfig cfg;
  const auto sc = generate_scenario(cfg, Rng(5));
  EXPECT_EQ(sc.I, 2);
  EXPECT_EQ(sc.K, 20);
  EXPECT_EQ(sc.total_tasks(), 20);
  EXPECT_NO_THROW(sc.validate());
  cfg.mus = 0;
  EXPECT_THROW(generate_scenario(cfg, Rng(5)), ConfigError);
}

TEST(Domain, InvalidProfilesRejected) {
  auto sc = test::tiny_scenario(1, 1, 1, 5, 1);
  sc.mus[0].f_local = 0;
  EXPECT_THROW(sc.mus[0].validate(), InvalidProfile);
  sc = test::tiny_scenario(1, 1, 1, 5, 1);
  sc.types[0].payment_grid[0][2] = sc.types[0].payment_grid[0][1];
  EXPECT_THROW(sc.types[0].validate(), InvalidProfile);
}

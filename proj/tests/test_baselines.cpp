#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bwlc/baselines.hpp"
#include "bwlc/environments.hpp"

namespace {

using bwlc::Matrix;

TEST(OptStochastic, TwoArmExample) {
  const auto spec = bwlc::make_stochastic_spec({1.0, 0.0}, Matrix(2, 1, std::vector<double>{1.0, -1.0}), 100);
  const auto b = bwlc::baselines(spec);
  EXPECT_NEAR(b.opt_stoc, 0.5, 1e-12);
  EXPECT_NEAR(b.opt_stoc_strategy[0], 0.5, 1e-12);
  EXPECT_NEAR(b.rho_stoc, 1.0, 1e-12);
  EXPECT_NEAR(b.safe_strategy[1], 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(b.opt_adv, 100.0);
}

TEST(OptStochastic, ThreeArmTwoConstraint) {
  const Matrix gbar = Matrix::from_rows({{0.5, -0.5}, {-0.5, 0.5}, {-0.25, -0.25}});
  const auto b = bwlc::baselines(bwlc::make_stochastic_spec({0.9, 0.5, 0.1}, gbar, 1000));
  EXPECT_NEAR(b.rho_stoc, 0.25, 1e-12);
  EXPECT_NEAR(b.opt_stoc, 0.7, 1e-12);
  EXPECT_DOUBLE_EQ(b.rho_adv, b.rho_stoc);
}

TEST(OptStochastic, InfeasibleMeansThrow) {
  EXPECT_THROW(bwlc::opt_stochastic(std::vector<double>{0.5, 0.5}, Matrix(2, 1, 0.5)), bwlc::AssumptionViolation);
}

TEST(ScriptedBaselines, Example1) {
  for (double rho : {0.2, 0.5, 1.0}) {
    const auto b = bwlc::baselines(bwlc::make_example1(30, rho));
    EXPECT_DOUBLE_EQ(b.opt_adv, 10.0);
    EXPECT_NEAR(b.rho_adv, rho, 1e-12);
    EXPECT_NEAR(b.safe_strategy[0], 1.0, 1e-12);
    EXPECT_NEAR(b.safe_strategy[1] + b.safe_strategy[2], 0.0, 1e-12);
  }
}

TEST(ScriptedBaselines, LowerBoundPair) {
  const auto pair = bwlc::make_lowerbound(40, 0.5, 0.2);
  const auto a = bwlc::baselines(pair.a);
  const auto b = bwlc::baselines(pair.b);
  EXPECT_DOUBLE_EQ(a.opt_adv, 20.0);
  EXPECT_DOUBLE_EQ(b.opt_adv, 40.0);
  EXPECT_NEAR(a.rho_adv, 0.5, 1e-12);
  EXPECT_NEAR(b.rho_adv, 0.1, 1e-12);
}

TEST(ContextualBaselines, SingleContextHandTable) {
  const auto spec = bwlc::make_contextual_linear(2, 2, 1, {1.0, 0.0, 0.0, -0.5}, {1.0, 0.0},
                                                 Matrix(1, 2, std::vector<double>{0.6, 0.8}), 10);
  const auto b = bwlc::baselines(spec);
  // Rewards (1, 0.5), costs (0.6, -0.4): the constraint caps action 0 at 0.4.
  EXPECT_NEAR(b.opt_stoc, 0.7, 1e-12);
  EXPECT_NEAR(b.rho_stoc, 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(b.opt_adv, 10.0);
}

// Two contexts with different feasible sets: the policy LP may satisfy the
// constraint on average rather than per context.
TEST(ContextualBaselines, PoolsConstraintAcrossContexts) {
  // Context 0: action 0 (reward 1, cost 0.5), action 1 (reward 0.5, cost -0.5).
  // Context 1: both actions reward 0.5; costs -0.5 and -0.5.
  const std::vector<double> features{1.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0, -1.0};
  const auto spec = bwlc::make_contextual_linear(2, 2, 2, features, {1.0, 0.0},
                                                 Matrix(1, 2, std::vector<double>{0.5, 0.5}), 10);
  const auto b = bwlc::baselines(spec);
  EXPECT_NEAR(b.opt_stoc, 0.75, 1e-12);
  EXPECT_NEAR(b.rho_stoc, 0.5, 1e-12);
}

// Oracle: min over a fine simplex grid of the worst row.
TEST(FeasibilityMargin, MatchesGrid) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    Matrix rows(4, 3);
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t x = 0; x < 3; ++x) rows(r, x) = u(rng);
    }
    double grid = 2.0;
    for (int i = 0; i <= 200; ++i) {
      for (int j = 0; i + j <= 200; ++j) {
        const double x[3] = {i / 200.0, j / 200.0, (200 - i - j) / 200.0};
        double worst = -2.0;
        for (std::size_t r = 0; r < 4; ++r) worst = std::max(worst, rows(r, 0) * x[0] + rows(r, 1) * x[1] + rows(r, 2) * x[2]);
        grid = std::min(grid, worst);
      }
    }
    const auto fm = bwlc::feasibility_margin(rows);
    EXPECT_GE(fm.rho, -grid - 1e-9);
    EXPECT_LE(fm.rho, -grid + 2.0 / 200);
    double worst = -2.0;
    for (std::size_t r = 0; r < 4; ++r) {
      worst = std::max(worst, rows(r, 0) * fm.strategy[0] + rows(r, 1) * fm.strategy[1] + rows(r, 2) * fm.strategy[2]);
    }
    EXPECT_NEAR(-worst, fm.rho, 1e-9);
  }
}

}  // namespace

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "bwlc/environments.hpp"

namespace {

using bwlc::Matrix;

TEST(Example1, Tables) {
  const double rho = 0.5;
  bwlc::ScriptedEnvironment env(bwlc::make_example1(9, rho));
  EXPECT_EQ(env.num_arms(), 3u);
  EXPECT_EQ(env.num_constraints(), 1u);
  EXPECT_EQ(env.table(1).rewards, (std::vector<double>{0.0, 0.0, 1.0}));
  EXPECT_EQ(env.table(4).rewards[1], 1.0);
  EXPECT_EQ(env.table(4).rewards[2], 0.0);
  EXPECT_EQ(env.table(7).rewards, (std::vector<double>{0.0, 0.0, 0.0}));
  for (std::size_t t = 1; t <= 9; ++t) EXPECT_EQ(env.table(t).costs(0, 0), -rho);
  EXPECT_EQ(env.table(6).costs(1, 0), 0.0);
  EXPECT_EQ(env.table(7).costs(1, 0), rho);
  EXPECT_EQ(env.table(9).costs(2, 0), rho);
}

TEST(Example1, RejectsBadArguments) {
  EXPECT_THROW(bwlc::make_example1(10, 0.5), std::invalid_argument);
  EXPECT_THROW(bwlc::make_example1(0, 0.5), std::invalid_argument);
  EXPECT_THROW(bwlc::make_example1(9, 0.0), std::invalid_argument);
}

TEST(ScriptedEnvironment, RoundBounds) {
  bwlc::ScriptedEnvironment env(bwlc::make_example1(9, 0.5));
  EXPECT_THROW(env.table(0), std::out_of_range);
  EXPECT_THROW(env.table(10), std::out_of_range);
  EXPECT_EQ(env.phase_of(3), 0u);
  EXPECT_EQ(env.phase_of(4), 1u);
  EXPECT_EQ(env.phase_of(9), 2u);
}

TEST(LowerBound, SharedPrefixThenSplit) {
  const auto pair = bwlc::make_lowerbound(8, 0.5, 0.2);
  bwlc::ScriptedEnvironment a(pair.a), b(pair.b);
  for (std::size_t t = 1; t <= 4; ++t) {
    EXPECT_EQ(a.table(t).rewards, b.table(t).rewards);
    EXPECT_EQ(a.table(t).costs.data(), b.table(t).costs.data());
    EXPECT_EQ(a.table(t).costs(0, 0), 1.0);
    EXPECT_EQ(a.table(t).costs(1, 0), -0.5);
  }
  EXPECT_EQ(a.table(5).rewards[0], 0.0);
  EXPECT_EQ(a.table(5).costs(0, 0), -1.0);
  EXPECT_EQ(b.table(5).rewards[0], 1.0);
  EXPECT_EQ(b.table(5).costs(0, 0), 1.0);
  EXPECT_NEAR(b.table(8).costs(1, 0), -0.1, 1e-15);
  EXPECT_THROW(bwlc::make_lowerbound(7, 0.5, 0.2), std::invalid_argument);
}

TEST(Validation, RejectsMalformedInstances) {
  auto spec = bwlc::make_example1(9, 0.5);
  spec.T = 12;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  EXPECT_THROW(bwlc::make_stochastic_spec({0.5, 1.5}, Matrix(2, 1, 0.0), 10), std::invalid_argument);
  EXPECT_THROW(bwlc::make_stochastic_spec({0.5, 0.5}, Matrix(2, 1, -1.5), 10), std::invalid_argument);
  EXPECT_THROW(bwlc::make_stochastic_spec({0.5}, Matrix(1, 1, 0.0), 10), std::invalid_argument);
  EXPECT_THROW(bwlc::make_contextual_linear(1, 2, 1, {1.0, 0.5}, {1.5}, Matrix(1, 1, 0.0), 10),
               std::invalid_argument);
}

TEST(Stochastic, DegenerateMeansAreDeterministic) {
  auto env = bwlc::make_stochastic({1.0, 0.0}, Matrix(2, 1, std::vector<double>{1.0, -1.0}), 50, 3);
  for (std::size_t t = 1; t <= 50; ++t) {
    const auto tab = env.draw(t);
    EXPECT_EQ(tab.rewards, (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(tab.costs(0, 0), 1.0);
    EXPECT_EQ(tab.costs(1, 0), -1.0);
  }
}

TEST(Stochastic, EmpiricalMeans) {
  constexpr std::size_t T = 100000;
  const std::vector<double> fbar{0.3, 0.8};
  const Matrix gbar(2, 1, std::vector<double>{0.4, -0.6});
  auto env = bwlc::make_stochastic(fbar, gbar, T, 11);
  double f[2] = {0, 0}, g[2] = {0, 0};
  for (std::size_t t = 1; t <= T; ++t) {
    const auto tab = env.draw(t);
    for (std::size_t x = 0; x < 2; ++x) {
      f[x] += tab.rewards[x];
      g[x] += tab.costs(x, 0);
      EXPECT_TRUE(tab.rewards[x] == 0.0 || tab.rewards[x] == 1.0);
      EXPECT_TRUE(tab.costs(x, 0) == -1.0 || tab.costs(x, 0) == 1.0);
    }
  }
  for (std::size_t x = 0; x < 2; ++x) {
    EXPECT_NEAR(f[x] / T, fbar[x], 3 * std::sqrt(fbar[x] * (1 - fbar[x]) / T));
    const double var = 1 - gbar(x, 0) * gbar(x, 0);
    EXPECT_NEAR(g[x] / T, gbar(x, 0), 3 * std::sqrt(var / T));
  }
}

TEST(Stochastic, ReproducibleAndOrdered) {
  const std::vector<double> fbar{0.5, 0.5, 0.5};
  const Matrix gbar(3, 2, 0.0);
  auto a = bwlc::make_stochastic(fbar, gbar, 100, 42);
  auto b = bwlc::make_stochastic(fbar, gbar, 100, 42);
  auto c = bwlc::make_stochastic(fbar, gbar, 100, 43);
  bool differs = false;
  for (std::size_t t = 1; t <= 100; ++t) {
    const auto ta = a.draw(t), tb = b.draw(t), tc = c.draw(t);
    EXPECT_EQ(ta.rewards, tb.rewards);
    EXPECT_EQ(ta.costs.data(), tb.costs.data());
    differs = differs || ta.rewards != tc.rewards;
  }
  EXPECT_TRUE(differs);
  auto d = bwlc::make_stochastic(fbar, gbar, 100, 1);
  EXPECT_THROW(d.draw(2), std::logic_error);
}

TEST(Contextual, ZeroParameterGivesHalfReward) {
  const auto spec = bwlc::make_contextual_linear(3, 4, 5, {0.0, 0.0, 0.0}, Matrix(1, 3, 0.0), 10, 9);
  bwlc::ContextualEnvironment env(spec, 1);
  for (std::size_t z = 0; z < 5; ++z) {
    for (std::size_t a = 0; a < 4; ++a) {
      EXPECT_DOUBLE_EQ(env.mean_reward(z, a), 0.5);
      EXPECT_DOUBLE_EQ(env.mean_cost(z, a, 0), 0.0);
    }
  }
}

TEST(Contextual, HandTable) {
  // One context, two actions, d = 2.
  const std::vector<double> features{1.0, 0.0, 0.0, -0.5};
  const auto spec = bwlc::make_contextual_linear(2, 2, 1, features, {1.0, 0.0},
                                                 Matrix(1, 2, std::vector<double>{0.6, 0.8}), 4,
                                                 bwlc::NoiseModel::kNone);
  bwlc::ContextualEnvironment env(spec, 1);
  EXPECT_DOUBLE_EQ(env.mean_reward(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(env.mean_reward(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(env.mean_cost(0, 0, 0), 0.6);
  EXPECT_DOUBLE_EQ(env.mean_cost(0, 1, 0), -0.4);
  const std::size_t z = env.next_context(1);
  const auto tab = env.draw(1, z);
  EXPECT_EQ(tab.rewards, (std::vector<double>{1.0, 0.5}));
  EXPECT_DOUBLE_EQ(tab.costs(1, 0), -0.4);
}

TEST(Contextual, GeneratedFeaturesAndOutcomeRanges) {
  const auto spec = bwlc::make_contextual_linear(4, 5, 8, {0.6, -0.3, 0.4, 0.2},
                                                 Matrix(1, 4, std::vector<double>{0.5, 0.4, -0.3, 0.2}), 200, 7);
  const auto& body = std::get<bwlc::ContextualSpec>(spec.body);
  for (std::size_t k = 0; k < 8 * 5; ++k) {
    double sq = 0.0;
    for (std::size_t j = 0; j < 4; ++j) sq += body.features[k * 4 + j] * body.features[k * 4 + j];
    EXPECT_GE(std::sqrt(sq), 0.5 - 1e-12);
    EXPECT_LE(std::sqrt(sq), 1.0 + 1e-12);
  }
  bwlc::ContextualEnvironment env(spec, 3);
  for (std::size_t t = 1; t <= 200; ++t) {
    const std::size_t z = env.next_context(t);
    EXPECT_LT(z, 8u);
    const auto tab = env.draw(t, z);
    for (std::size_t a = 0; a < 5; ++a) {
      EXPECT_GE(tab.rewards[a], 0.0);
      EXPECT_LE(tab.rewards[a], 1.0);
      EXPECT_GE(tab.costs(a, 0), -1.0);
      EXPECT_LE(tab.costs(a, 0), 1.0);
    }
  }
}

TEST(Contextual, ScheduleIsCyclic) {
  auto spec = bwlc::make_contextual_linear(1, 2, 3, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, {0.5},
                                           Matrix(1, 1, 0.5), 7);
  std::get<bwlc::ContextualSpec>(spec.body).schedule = {2, 0};
  bwlc::ContextualEnvironment env(spec, 1);
  const std::vector<std::size_t> expected{2, 0, 2, 0, 2, 0, 2};
  for (std::size_t t = 1; t <= 7; ++t) EXPECT_EQ(env.next_context(t), expected[t - 1]);
}

TEST(Switching, BestArmChanges) {
  bwlc::ScriptedEnvironment env(bwlc::make_switching(4, 10));
  EXPECT_EQ(env.table(5).rewards[0], 0.7);
  EXPECT_EQ(env.table(6).rewards[1], 0.7);
  EXPECT_EQ(env.table(6).rewards[0], 0.4);
  EXPECT_EQ(env.table(1).costs(3, 0), -1.0);
}

}  // namespace

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "bwlc/exp3six.hpp"
#include "bwlc/harness.hpp"

namespace {

using bwlc::DualVector;
using bwlc::Matrix;

TEST(RunPrimalDual, SingleRoundUtilityIsReward) {
  bwlc::ScriptedEnvironment env(bwlc::make_example1(3, 0.5));
  bwlc::Exp3Six primal(3, 1, 0.05);
  bwlc::OgdDual dual(1, 0.1);
  auto cfg = bwlc::FrameworkConfig::for_bandit(1, 1, 3, 0.05, 4);
  const auto trace = bwlc::run_primal_dual(cfg, env, primal, dual);
  ASSERT_EQ(trace.size(), 1u);
  const auto& rec = trace.records()[0];
  EXPECT_EQ(rec.lambda, DualVector({0.0}));
  EXPECT_EQ(rec.primal_utility, rec.outcome.reward);
}

TEST(RunPrimalDual, NonpositiveCostsKeepDualAtZero) {
  auto env = bwlc::make_stochastic({0.2, 0.6, 0.9}, Matrix(3, 2, std::vector<double>{-1, -1, -1, -1, -1, -1}), 500, 2);
  bwlc::Exp3Six primal(3, 500, 0.05);
  bwlc::OgdDual dual(2, 0.5);
  auto cfg = bwlc::FrameworkConfig::for_bandit(500, 2, 3, 0.05, 9);
  const auto trace = bwlc::run_primal_dual(cfg, env, primal, dual);
  for (const auto& rec : trace.records()) {
    EXPECT_EQ(rec.lambda, DualVector({0.0, 0.0}));
    EXPECT_EQ(rec.primal_utility, rec.outcome.reward);
  }
  EXPECT_EQ(trace.max_dual_l1(), 0.0);
}

TEST(RunPrimalDual, RejectsDimensionMismatch) {
  bwlc::ScriptedEnvironment env(bwlc::make_example1(3, 0.5));
  bwlc::Exp3Six primal(3, 3, 0.05);
  bwlc::OgdDual dual(2, 0.1);
  auto cfg = bwlc::FrameworkConfig::for_bandit(3, 1, 3, 0.05, 1);
  EXPECT_THROW(bwlc::run_primal_dual(cfg, env, primal, dual), std::invalid_argument);
  cfg.T = 6;
  bwlc::OgdDual ok(1, 0.1);
  EXPECT_THROW(bwlc::run_primal_dual(cfg, env, primal, ok), std::invalid_argument);
}

// Shared event log for checking the order of calls within a round.
using Log = std::shared_ptr<std::vector<std::string>>;

struct ProbePrimal {
  Log log;
  bwlc::ArmDraw act(bwlc::Rng&) const {
    log->push_back("act");
    return {0, 1.0};
  }
  void observe(const bwlc::ArmDraw&, double) { log->push_back("observe"); }
};

struct ProbeDual {
  Log log;
  DualVector lambda = DualVector({123.0});  // sentinel
  const DualVector& current() const {
    log->push_back("read");
    return lambda;
  }
  void step(std::span<const double>) { log->push_back("step"); }
};

struct ProbeEnv {
  Log log;
  bwlc::ScriptedEnvironment inner;
  std::size_t num_arms() const { return inner.num_arms(); }
  std::size_t num_constraints() const { return inner.num_constraints(); }
  std::size_t horizon() const { return inner.horizon(); }
  const bwlc::RoundTable& draw(std::size_t t) {
    log->push_back("draw");
    return inner.draw(t);
  }
};

TEST(RunPrimalDual, CallOrderWithinRound) {
  auto log = std::make_shared<std::vector<std::string>>();
  ProbeEnv env{log, bwlc::ScriptedEnvironment(bwlc::make_example1(3, 0.5))};
  ProbePrimal primal{log};
  ProbeDual dual{log};
  auto cfg = bwlc::FrameworkConfig::for_bandit(2, 1, 3, 0.05, 1);
  const auto trace = bwlc::run_primal_dual(cfg, env, primal, dual);
  // One dimension check before the loop, one read after it.
  const std::vector<std::string> round{"act", "read", "draw", "observe", "step"};
  std::vector<std::string> expected{"read"};
  for (int t = 0; t < 2; ++t) expected.insert(expected.end(), round.begin(), round.end());
  expected.push_back("read");
  EXPECT_EQ(*log, expected);
  EXPECT_EQ(trace.records()[0].lambda, DualVector({123.0}));
}

TEST(LazyCounterexample, ViolationAndRegrets) {
  for (double rho : {0.25, 0.5, 1.0}) {
    const std::size_t T = 30;
    const double M = 1.0 / rho;
    const auto r = bwlc::lazy_counterexample(T, rho, M);
    EXPECT_NEAR(r.violation, rho * T / 3, 1e-12);
    EXPECT_NEAR(r.dual_regret, 0.0, 1e-12);
    EXPECT_NEAR(r.primal_regret, 0.0, 1e-12);
  }
}

// Primal regret grows as (T/3)(2 M rho - 2) once M exceeds 1/rho.
TEST(LazyCounterexample, PrimalRegretAboveMinimalBox) {
  const auto r = bwlc::lazy_counterexample(9, 0.3, 4.0);
  EXPECT_NEAR(r.primal_regret, 3.0 * (2 * 4.0 * 0.3 - 2), 1e-12);
  EXPECT_NEAR(r.primal_regret, 1.2, 1e-12);
  EXPECT_NEAR(r.violation, 0.9, 1e-12);
  EXPECT_THROW(bwlc::lazy_counterexample(9, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(bwlc::lazy_counterexample(10, 0.5, 2.0), std::invalid_argument);
}

TEST(ComputeMetrics, EmptyTrace) {
  const auto m = bwlc::compute_metrics(bwlc::Trace(2), {}, 2, bwlc::RhoChoice::kAdversarial);
  EXPECT_EQ(m.rew, 0.0);
  EXPECT_EQ(m.violations, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(m.v_max, 0.0);
}

TEST(ComputeMetrics, HandBuiltTrace) {
  bwlc::Trace trace(1);
  const double rewards[3] = {1.0, 0.0, 1.0};
  const double costs[3] = {0.5, -1.0, 0.25};
  const double lams[3] = {0.0, 0.3, 0.7};
  for (std::size_t t = 0; t < 3; ++t) {
    const DualVector lam({lams[t]});
    trace.push({t + 1, 0, std::nullopt, lam, {rewards[t], {costs[t]}},
                bwlc::lagrangian(rewards[t], std::vector<double>{costs[t]}, lam), {costs[t]}});
  }
  bwlc::BaselineReport base;
  base.opt_adv = 3.0;
  base.opt_stoc = 0.5;
  base.rho_adv = 0.5;
  base.rho_stoc = 0.5;
  const auto m = bwlc::compute_metrics(trace, base, 1, bwlc::RhoChoice::kAdversarial);
  EXPECT_DOUBLE_EQ(m.rew, 2.0);
  EXPECT_DOUBLE_EQ(m.v_max, -0.25);
  EXPECT_DOUBLE_EQ(m.regret_stoc, -0.5);
  EXPECT_DOUBLE_EQ(m.competitive_gap, -1.0);
  EXPECT_DOUBLE_EQ(m.opt_used, 1.0);
  EXPECT_DOUBLE_EQ(m.max_dual_l1, 0.7);
  EXPECT_TRUE(m.self_bound_ok);
  EXPECT_DOUBLE_EQ(bwlc::compute_metrics(trace, base, 1, bwlc::RhoChoice::kStochastic).opt_used, 1.5);
  EXPECT_EQ(trace.aggregates(), bwlc::recompute_aggregates(trace.records(), 1));
}

TEST(ComputeMetrics, LazyTrace) {
  const auto r = bwlc::lazy_counterexample(9, 0.5, 2.0);
  const auto base = bwlc::baselines(bwlc::make_example1(9, 0.5));
  const auto m = bwlc::compute_metrics(r.trace, base, 1, bwlc::RhoChoice::kAdversarial);
  EXPECT_DOUBLE_EQ(m.rew, 6.0);
  EXPECT_DOUBLE_EQ(m.v_max, 1.5);
  EXPECT_DOUBLE_EQ(m.max_dual_l1, 2.0);
  EXPECT_NEAR(m.competitive_gap, 0.5 / 1.5 * 3.0 - 6.0, 1e-12);
}

// Direct evaluation over every arm, without compensated summation.
TEST(IntervalPrimalRegret, MatchesDirectEvaluation) {
  const auto spec = bwlc::make_example1(30, 0.4);
  bwlc::ScriptedEnvironment env(spec);
  bwlc::Exp3Six primal(3, 30, 0.05);
  bwlc::OgdDual dual(1, 0.3);
  auto cfg = bwlc::FrameworkConfig::for_bandit(30, 1, 3, 0.05, 6);
  const auto trace = bwlc::run_primal_dual(cfg, env, primal, dual);
  for (auto [first, last] : {std::pair<std::size_t, std::size_t>{1, 30}, {5, 12}, {21, 30}, {17, 17}}) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < 3; ++x) {
      double s = 0.0;
      for (std::size_t t = first; t <= last; ++t) {
        const auto& rec = trace.records()[t - 1];
        const double f = env.table(t).rewards[x], g = env.table(t).costs(x, 0);
        s += f - rec.lambda[0] * g - rec.primal_utility;
      }
      best = std::max(best, s);
    }
    EXPECT_NEAR(bwlc::interval_primal_regret(trace, env, first, last), best, 1e-12);
  }
  EXPECT_THROW(bwlc::interval_primal_regret(trace, env, 0, 3), std::invalid_argument);
  EXPECT_THROW(bwlc::interval_primal_regret(trace, env, 5, 31), std::invalid_argument);
}

TEST(DualRegretBox, CornerMaximizer) {
  const auto r = bwlc::lazy_counterexample(9, 0.5, 2.0);
  // All played costs are 0 except rounds 7-9 (0.5 each) with lambda = M.
  EXPECT_DOUBLE_EQ(bwlc::dual_regret_box(r.trace, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(bwlc::dual_regret_box(r.trace, 3.0), 1.5);
}

// Oracle returning the environment's own means.
struct TruthOracle {
  const bwlc::ContextualEnvironment* env;
  int coord;  // -1 for reward, else constraint index
  double predict(std::size_t z, std::size_t a) const {
    return coord < 0 ? env->mean_reward(z, a) : env->mean_cost(z, a, static_cast<std::size_t>(coord));
  }
  void update(std::size_t, std::size_t, double) {}
};

TEST(RunContextual, ZeroCostsKeepDualAtZero) {
  const std::size_t T = 300;
  // Cost is -0.7 |z_1| once first coordinates are made nonnegative.
  auto spec = bwlc::make_contextual_linear(2, 3, 4, {0.5, 0.5}, Matrix(1, 2, std::vector<double>{-0.7, 0.0}), T, 3,
                                           bwlc::NoiseModel::kNone);
  auto& body = std::get<bwlc::ContextualSpec>(spec.body);
  for (std::size_t k = 0; k < 4 * 3; ++k) body.features[k * 2] = std::abs(body.features[k * 2]);
  bwlc::ContextualEnvironment env(spec, 1);
  auto oracles = bwlc::make_linear_oracles(env);
  bwlc::OgdDual dual(1, 0.5);
  const bwlc::FrameworkConfig cfg{T, 1, 3, 0.05, 0.5, 1.0, 2};
  const auto out = bwlc::run_contextual(cfg, env, oracles, bwlc::IgwConfig::for_horizon(3, T), dual);
  for (const auto& rec : out.trace.records()) {
    EXPECT_LE(rec.outcome.costs[0], 0.0);
    EXPECT_EQ(rec.lambda, DualVector({0.0}));
  }
}

TEST(RunContextual, PerfectOraclesAndLargeRateAreGreedy) {
  const std::size_t T = 200;
  const auto spec = bwlc::make_contextual_linear(3, 4, 6, {0.6, -0.3, 0.4},
                                                 Matrix(1, 3, std::vector<double>{0.2, 0.1, -0.3}), T, 5);
  bwlc::ContextualEnvironment env(spec, 4);
  bwlc::ContextualOracles<TruthOracle> oracles{{&env, -1}, {{&env, 0}}};
  bwlc::NullDual dual(1);
  const bwlc::FrameworkConfig cfg{T, 1, 4, 0.05, 0.5, 1.0, 3};
  const auto out = bwlc::run_contextual(cfg, env, oracles, bwlc::IgwConfig{1e9, 4}, dual);
  for (const auto& rec : out.trace.records()) {
    const std::size_t z = *rec.context;
    std::size_t best = 0;
    for (std::size_t a = 1; a < 4; ++a) {
      if (env.mean_reward(z, a) > env.mean_reward(z, best)) best = a;
    }
    EXPECT_EQ(rec.action, best);
  }
  EXPECT_EQ(out.ledger.err_f, 0.0);
  EXPECT_EQ(out.ledger.err_lagrangian, 0.0);
}

TEST(RunContextual, LedgerAccumulatesAndBoundHolds) {
  const std::size_t T = 400;
  const auto spec = bwlc::make_contextual_linear(4, 5, 8, {0.6, -0.3, 0.4, 0.2},
                                                 Matrix::from_rows({{0.5, 0.4, -0.3, 0.2}, {-0.4, 0.3, 0.5, -0.2}}),
                                                 T, 7);
  bwlc::ContextualEnvironment env(spec, 11);
  auto oracles = bwlc::make_linear_oracles(env);
  bwlc::OgdDual dual(2, 0.05);
  const bwlc::FrameworkConfig cfg{T, 2, 5, 0.05, 0.05, 1.0, 12};
  const auto out = bwlc::run_contextual(cfg, env, oracles, bwlc::IgwConfig::for_horizon(5, T), dual);
  ASSERT_EQ(out.err_lagrangian_per_round.size(), T);
  double running = 0.0;
  for (double e : out.err_lagrangian_per_round) {
    EXPECT_GE(e, 0.0);
    running += e;
  }
  EXPECT_NEAR(running, out.ledger.err_lagrangian, 1e-9 * std::max(1.0, running));
  EXPECT_TRUE(bwlc::lagrangian_error_bound_check(out.ledger.err_f, out.ledger.err_costs,
                                                 out.trace.max_dual_l1(), out.ledger.err_lagrangian));
  EXPECT_EQ(out.trace.aggregates(), bwlc::recompute_aggregates(out.trace.records(), 2));
}

}  // namespace

#pragma once

// Primal-dual interaction loops (finite arms and contextual), the scripted
// "lazy" pair on the three-phase instance, and metrics against baselines.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bwlc/baselines.hpp"
#include "bwlc/core.hpp"
#include "bwlc/dual_ogd.hpp"
#include "bwlc/environments.hpp"
#include "bwlc/igw.hpp"
#include "bwlc/regression.hpp"
#include "bwlc/rng.hpp"

namespace bwlc {

template <class P>
concept PrimalLearner = requires(P p, const P cp, Rng& rng, const ArmDraw& draw, double u) {
  { cp.act(rng) } -> std::same_as<ArmDraw>;
  p.observe(draw, u);
};

template <class D>
concept DualLearner = requires(D d, const D cd, std::span<const double> g) {
  { cd.current() } -> std::convertible_to<const DualVector&>;
  d.step(g);
};

// Multiplier pinned at zero; turns the loop into plain reward maximization.
class NullDual {
 public:
  explicit NullDual(std::size_t m) : zero_(DualVector::zeros(m)) {}
  const DualVector& current() const { return zero_; }
  void step(std::span<const double>) {}

 private:
  DualVector zero_;
};

// Round order: the primal draws x_t before lambda_t is read, the environment
// reveals f_t(x_t) and g_t(x_t), the primal receives
// u_t = f_t(x_t) - <lambda_t, g_t(x_t)>, and the dual ascends along g_t(x_t).
template <PrimalLearner P, DualLearner D, BanditEnvironment E>
Trace run_primal_dual(const FrameworkConfig& cfg, E& env, P& primal, D& dual) {
  cfg.validate();
  if (env.num_arms() != cfg.K || env.num_constraints() != cfg.m) {
    throw std::invalid_argument("run_primal_dual: environment dimensions do not match config");
  }
  if (env.horizon() < cfg.T) throw std::invalid_argument("run_primal_dual: environment horizon shorter than T");
  if (dual.current().size() != cfg.m) throw std::invalid_argument("run_primal_dual: dual dimension mismatch");

  Rng rng = make_stream(cfg.seed, Stream::kPrimal);
  Trace trace(cfg.m);
  for (std::size_t t = 1; t <= cfg.T; ++t) {
    const ArmDraw draw = primal.act(rng);
    const DualVector lambda = dual.current();
    Outcome outcome = static_cast<const RoundTable&>(env.draw(t)).outcome(draw.arm);
    outcome.validate();
    const double utility = lagrangian(outcome.reward, outcome.costs, lambda);
    primal.observe(draw, utility);
    dual.step(outcome.costs);
    trace.push({t, draw.arm, std::nullopt, lambda, outcome, utility, outcome.costs});
  }
  trace.set_final_lambda(dual.current());
  return trace;
}

// ---------------------------------------------------------------------------
// Contextual loop.

template <RegressionOracle O>
struct ContextualOracles {
  O reward;
  std::vector<O> costs;
};

// Ridge oracles matched to a contextual linear environment. The reward label
// is mapped through y' = 2y - 1 so its mean is linear in the features.
inline ContextualOracles<LinearFeatureOracle> make_linear_oracles(const ContextualEnvironment& env,
                                                                  double lambda_reg = 1.0) {
  ContextualOracles<LinearFeatureOracle> out{
      LinearFeatureOracle(env.features(), kRewardRange, 2.0, -1.0, lambda_reg), {}};
  for (std::size_t i = 0; i < env.num_constraints(); ++i) {
    out.costs.emplace_back(env.features(), kCostRange, 1.0, 0.0, lambda_reg);
  }
  return out;
}

struct ContextualTrace {
  Trace trace;
  OracleErrorLedger ledger;
  std::vector<double> err_lagrangian_per_round;
};

template <RegressionOracle O, DualLearner D>
ContextualTrace run_contextual(const FrameworkConfig& cfg, ContextualEnvironment& env,
                               ContextualOracles<O>& oracles, const IgwConfig& igw, D& dual) {
  cfg.validate();
  if (env.num_arms() != cfg.K || env.num_constraints() != cfg.m || igw.K != cfg.K) {
    throw std::invalid_argument("run_contextual: dimensions do not match config");
  }
  if (oracles.costs.size() != cfg.m) throw std::invalid_argument("run_contextual: need one cost oracle per constraint");
  if (env.horizon() < cfg.T) throw std::invalid_argument("run_contextual: environment horizon shorter than T");

  Rng rng = make_stream(cfg.seed, Stream::kPrimal);
  ContextualTrace out{Trace(cfg.m), OracleErrorLedger(cfg.m), {}};
  out.err_lagrangian_per_round.reserve(cfg.T);
  std::vector<double> ghat(cfg.m), gbar(cfg.m);

  for (std::size_t t = 1; t <= cfg.T; ++t) {
    const std::size_t z = env.next_context(t);
    const DualVector lambda = dual.current();
    const IgwDecision decision = igw_act(oracles.reward, oracles.costs, z, lambda, igw, rng);
    const std::size_t a = decision.action;

    const double fhat = oracles.reward.predict(z, a);
    const double fbar = env.mean_reward(z, a);
    for (std::size_t i = 0; i < cfg.m; ++i) {
      ghat[i] = oracles.costs[i].predict(z, a);
      gbar[i] = env.mean_cost(z, a, i);
    }

    Outcome outcome = env.draw(t, z).outcome(a);
    outcome.validate();
    const double utility = lagrangian(outcome.reward, outcome.costs, lambda);

    auto& led = out.ledger;
    led.err_f += (fhat - fbar) * (fhat - fbar);
    led.realized_err_f += (fhat - outcome.reward) * (fhat - outcome.reward);
    for (std::size_t i = 0; i < cfg.m; ++i) {
      led.err_costs[i] += (ghat[i] - gbar[i]) * (ghat[i] - gbar[i]);
      led.realized_err_costs[i] += (ghat[i] - outcome.costs[i]) * (ghat[i] - outcome.costs[i]);
    }
    const double diff = lagrangian(fhat, ghat, lambda) - lagrangian(fbar, gbar, lambda);
    led.err_lagrangian += diff * diff;
    out.err_lagrangian_per_round.push_back(diff * diff);

    oracles.reward.update(z, a, outcome.reward);
    for (std::size_t i = 0; i < cfg.m; ++i) oracles.costs[i].update(z, a, outcome.costs[i]);
    dual.step(outcome.costs);
    out.trace.push({t, a, z, lambda, outcome, utility, outcome.costs});
  }
  out.trace.set_final_lambda(dual.current());
  return out;
}

// ---------------------------------------------------------------------------
// Regret evaluation against scripted tables.

// sup_x sum_{t in [first,last]} [L_t(x, lambda_t) - u_t]; rounds are 1-based.
inline double interval_primal_regret(const Trace& trace, const ScriptedEnvironment& env, std::size_t first,
                                     std::size_t last) {
  if (first < 1 || last > trace.size() || first > last) {
    throw std::invalid_argument("interval_primal_regret: interval outside the trace");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < env.num_arms(); ++x) {
    CompensatedSum s;
    for (std::size_t t = first; t <= last; ++t) {
      const auto& rec = trace.records()[t - 1];
      const auto& table = env.table(t);
      s.add(lagrangian(table.rewards[x], table.costs.row(x), rec.lambda) - rec.primal_utility);
    }
    best = std::max(best, s.value());
  }
  return best;
}

inline double primal_regret(const Trace& trace, const ScriptedEnvironment& env) {
  return interval_primal_regret(trace, env, 1, trace.size());
}

// sup over the box [0, M]^m of sum_t <lambda - lambda_t, g_t(x_t)>. The
// objective is linear and separable, so each coordinate sits at 0 or M.
inline double dual_regret_box(const Trace& trace, double M) {
  double total = 0.0;
  for (std::size_t i = 0; i < trace.m(); ++i) {
    CompensatedSum at_zero, at_max;
    for (const auto& rec : trace.records()) {
      const double g = rec.outcome.costs[i];
      at_zero.add(-rec.lambda[i] * g);
      at_max.add((M - rec.lambda[i]) * g);
    }
    total += std::max(at_zero.value(), at_max.value());
  }
  return total;
}

// ---------------------------------------------------------------------------
// Scripted non-learning pair on the three-phase instance.

class ScriptedPrimal {
 public:
  explicit ScriptedPrimal(std::vector<std::size_t> arms) : arms_(std::move(arms)) {}
  ArmDraw act(Rng&) const { return {arms_.at(round_), 1.0}; }
  void observe(const ArmDraw&, double) { ++round_; }

 private:
  std::vector<std::size_t> arms_;
  std::size_t round_ = 0;
};

class ScriptedDual {
 public:
  // lambdas[t] is the multiplier exposed in round t+1; one extra entry is the
  // value after the final step.
  explicit ScriptedDual(std::vector<DualVector> lambdas) : lambdas_(std::move(lambdas)) {}
  const DualVector& current() const { return lambdas_.at(round_); }
  void step(std::span<const double>) { ++round_; }

 private:
  std::vector<DualVector> lambdas_;
  std::size_t round_ = 0;
};

struct LazyCounterexampleReport {
  Trace trace;
  double primal_regret = 0.0;
  double dual_regret = 0.0;  // over the box [0, M]
  double violation = 0.0;    // V_1(T)
};

// Primal plays a3 on the first third and a2 afterwards; dual plays 0 on the
// first two thirds and M afterwards.
inline LazyCounterexampleReport lazy_counterexample(std::size_t T, double rho, double M) {
  if (T == 0 || T % 3 != 0) throw std::invalid_argument("lazy_counterexample: T must be a positive multiple of 3");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("lazy_counterexample: rho must lie in (0,1]");
  if (!(M * rho >= 1.0 - 1e-12)) throw std::invalid_argument("lazy_counterexample: M must be >= 1/rho");

  const ScriptedEnvironment env(make_example1(T, rho));
  std::vector<std::size_t> arms(T);
  std::vector<DualVector> lambdas;
  lambdas.reserve(T + 1);
  for (std::size_t t = 1; t <= T; ++t) {
    arms[t - 1] = t <= T / 3 ? 2 : 1;
    lambdas.push_back(DualVector({t <= 2 * T / 3 ? 0.0 : M}));
  }
  lambdas.push_back(DualVector({M}));

  ScriptedPrimal primal(std::move(arms));
  ScriptedDual dual(std::move(lambdas));
  FrameworkConfig cfg{T, 1, 3, 0.5, 1.0, 1.0, 0};
  ScriptedEnvironment run_env = env;
  LazyCounterexampleReport out;
  out.trace = run_primal_dual(cfg, run_env, primal, dual);
  out.primal_regret = primal_regret(out.trace, env);
  out.dual_regret = dual_regret_box(out.trace, M);
  out.violation = out.trace.cum_violations()[0];
  return out;
}

// ---------------------------------------------------------------------------
// Metrics.

enum class RhoChoice { kAdversarial, kStochastic };

struct MetricsReport {
  double rew = 0.0;
  std::vector<double> violations;
  double v_max = 0.0;
  double opt_used = 0.0;
  double regret_stoc = 0.0;      // T * OPT_Stoc - Rew
  double competitive_gap = 0.0;  // rho_adv / (1 + rho_adv) * OPT_Adv - Rew
  double max_dual_l1 = 0.0;
  bool self_bound_ok = true;     // max ||lambda||_1 <= 13 m / rho
};

inline MetricsReport compute_metrics(const Trace& trace, const BaselineReport& base, std::size_t m,
                                     RhoChoice rho_choice) {
  MetricsReport out;
  out.violations.assign(m, 0.0);
  if (trace.empty()) return out;
  if (trace.m() != m) throw std::invalid_argument("compute_metrics: constraint count mismatch");

  const double T = static_cast<double>(trace.size());
  out.rew = trace.cum_reward();
  out.violations = trace.cum_violations();
  out.v_max = *std::max_element(out.violations.begin(), out.violations.end());
  out.regret_stoc = T * base.opt_stoc - out.rew;
  const double adv_benchmark = base.rho_adv / (1.0 + base.rho_adv) * base.opt_adv;
  out.competitive_gap = adv_benchmark - out.rew;
  out.opt_used = rho_choice == RhoChoice::kStochastic ? T * base.opt_stoc : adv_benchmark;
  out.max_dual_l1 = trace.max_dual_l1();
  const double rho = rho_choice == RhoChoice::kStochastic ? base.rho_stoc : base.rho_adv;
  out.self_bound_ok = rho > 0.0 && out.max_dual_l1 <= 13.0 * static_cast<double>(m) / rho;
  return out;
}

}  // namespace bwlc

#pragma once

// One experiment run: resolve an instance (builtin name, JSON file or inline
// spec), run the selected algorithm, and collect metrics and audits.

#include <cmath>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bwlc/baselines.hpp"
#include "bwlc/core.hpp"
#include "bwlc/dual_ogd.hpp"
#include "bwlc/environments.hpp"
#include "bwlc/exp3six.hpp"
#include "bwlc/harness.hpp"
#include "bwlc/igw.hpp"
#include "bwlc/instance_json.hpp"

#ifndef BWLC_GIT_DESCRIBE
#define BWLC_GIT_DESCRIBE "unknown"
#endif

namespace bwlc {

inline std::string git_describe() { return BWLC_GIT_DESCRIBE; }

// ---------------------------------------------------------------------------
// Builtin instances.

// K = 3, m = 2. The LP margin is exactly 0.25 (arm 2 alone) and the best
// feasible mixture splits arms 0 and 1 evenly for 0.7 per round.
inline InstanceSpec make_stoch_k3m2(std::size_t T) {
  return make_stochastic_spec({0.9, 0.5, 0.1},
                              Matrix::from_rows({{0.5, -0.5}, {-0.5, 0.5}, {-0.25, -0.25}}), T);
}

inline constexpr std::uint64_t kContextualInstanceSeed = 7;

// d = 4, K = 5, m = 2 over 8 contexts; features are fixed across run seeds.
inline InstanceSpec make_contextual_d4k5m2(std::size_t T) {
  return make_contextual_linear(4, 5, 8, {0.6, -0.3, 0.4, 0.2},
                                Matrix::from_rows({{0.5, 0.4, -0.3, 0.2}, {-0.4, 0.3, 0.5, -0.2}}), T,
                                kContextualInstanceSeed);
}

struct BuiltinInstance {
  const char* name;
  const char* description;
  std::size_t default_T;
};

inline const std::vector<BuiltinInstance>& builtin_instances() {
  static const std::vector<BuiltinInstance> list{
      {"example1", "three-phase scripted instance where lazy play violates linearly (uses --rho)", 9999},
      {"lowerbound-a", "two-phase scripted lower-bound instance A (uses --rho, delta param 0.2)", 30000},
      {"lowerbound-b", "two-phase scripted lower-bound instance B (uses --rho, delta param 0.2)", 30000},
      {"stoch-k3m2", "stochastic K=3, m=2 with margin 0.25 and optimum 0.7 per round", 20000},
      {"switching-k4", "scripted K=4 bandit whose best arm switches at T/2", 20000},
      {"contextual-d4k5m2", "contextual linear, d=4, K=5, m=2, 8 contexts", 10000},
  };
  return list;
}

inline constexpr double kLowerBoundDeltaParam = 0.2;

inline std::optional<InstanceSpec> make_builtin(const std::string& name, std::size_t T, double rho) {
  if (name == "example1") return make_example1(T, rho);
  if (name == "lowerbound-a") return make_lowerbound(T, rho, kLowerBoundDeltaParam).a;
  if (name == "lowerbound-b") return make_lowerbound(T, rho, kLowerBoundDeltaParam).b;
  if (name == "stoch-k3m2") return make_stoch_k3m2(T);
  if (name == "switching-k4") return make_switching(4, T);
  if (name == "contextual-d4k5m2") return make_contextual_d4k5m2(T);
  return std::nullopt;
}

inline std::size_t builtin_default_T(const std::string& name) {
  for (const auto& b : builtin_instances()) {
    if (name == b.name) return b.default_T;
  }
  return 0;
}

// Replaces the horizon of a file or inline instance. Scripted instances carry
// phase boundaries and only accept their own T.
inline InstanceSpec with_horizon(InstanceSpec spec, std::size_t T) {
  if (T == 0 || T == spec.T) return spec;
  if (spec.kind() == InstanceKind::kAdversarialScripted) {
    throw std::invalid_argument("scripted instances fix their horizon; --T must match the file (" +
                                std::to_string(spec.T) + ")");
  }
  spec.T = T;
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Runs.

enum class Algo { kExp3Six, kContextual, kLazy };

inline Algo algo_from_string(const std::string& s) {
  if (s == "exp3six") return Algo::kExp3Six;
  if (s == "contextual") return Algo::kContextual;
  if (s == "lazy") return Algo::kLazy;
  throw std::invalid_argument("unknown algorithm '" + s + "' (expected exp3six, contextual or lazy)");
}

inline std::string to_string(Algo a) {
  switch (a) {
    case Algo::kExp3Six:
      return "exp3six";
    case Algo::kContextual:
      return "contextual";
    case Algo::kLazy:
      return "lazy";
  }
  return "unknown";
}

struct RunRequest {
  std::string instance = "stoch-k3m2";     // builtin name or path to a JSON instance
  std::optional<InstanceSpec> inline_spec;  // takes precedence over `instance`
  Algo algo = Algo::kExp3Six;
  std::size_t T = 0;  // 0 selects the instance default
  double rho = 0.5;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::optional<double> eta_override;
  std::optional<double> lazy_M;  // defaults to 1 / rho
  bool full_trace = false;
};

inline InstanceSpec resolve_instance(const RunRequest& req) {
  if (req.inline_spec) return with_horizon(*req.inline_spec, req.T);
  const std::size_t T = req.T ? req.T : builtin_default_T(req.instance);
  if (auto spec = make_builtin(req.instance, T, req.rho)) return *spec;
  if (!std::filesystem::exists(req.instance)) {
    throw std::invalid_argument("'" + req.instance + "' is neither a builtin instance nor a readable file");
  }
  return with_horizon(load_instance(req.instance), req.T);
}

struct RunResult {
  RunRequest request;
  InstanceSpec instance;
  Trace trace{1};
  BaselineReport base;
  MetricsReport metrics;
  double eta_dual = 0.0;
  bool dual_link_ok = true;
  bool drift_ok = true;
  std::optional<OracleErrorLedger> ledger;  // contextual runs
  std::optional<bool> oracle_bound_ok;      // contextual runs
  std::optional<double> primal_regret;      // scripted instances
  std::optional<double> dual_regret;        // lazy runs
};

namespace detail {

inline void fill_audits(RunResult& r) {
  const auto link = audit_dual_link(r.trace, r.eta_dual);
  r.dual_link_ok = std::all_of(link.begin(), link.end(), [](bool b) { return b; });
  r.drift_ok = drift_within_bound(r.trace, r.eta_dual);
}

}  // namespace detail

inline RunResult run_experiment(const RunRequest& req) {
  RunResult r;
  r.request = req;
  r.instance = resolve_instance(req);
  const InstanceSpec& spec = r.instance;

  switch (req.algo) {
    case Algo::kLazy: {
      if (req.inline_spec || req.instance != "example1") {
        throw std::invalid_argument("the lazy pair is defined on the example1 instance only");
      }
      const double M = req.lazy_M.value_or(1.0 / req.rho);
      auto lazy = lazy_counterexample(spec.T, req.rho, M);
      r.trace = std::move(lazy.trace);
      r.primal_regret = lazy.primal_regret;
      r.dual_regret = lazy.dual_regret;
      r.eta_dual = 1.0;
      r.base = baselines(spec);
      r.metrics = compute_metrics(r.trace, r.base, spec.m, RhoChoice::kAdversarial);
      return r;
    }
    case Algo::kExp3Six: {
      if (spec.kind() == InstanceKind::kContextualLinear) {
        throw std::invalid_argument("exp3six runs on scripted or stochastic instances; use --algo contextual");
      }
      FrameworkConfig cfg = FrameworkConfig::for_bandit(spec.T, spec.m, spec.K, req.delta, req.seed);
      cfg.eta_ogd_override = req.eta_override;
      r.eta_dual = cfg.dual_learning_rate();
      Exp3Six primal(spec.K, spec.T, req.delta);
      OgdDual dual(spec.m, r.eta_dual);
      if (spec.kind() == InstanceKind::kStochastic) {
        StochasticEnvironment env(spec, req.seed);
        r.trace = run_primal_dual(cfg, env, primal, dual);
      } else {
        ScriptedEnvironment env(spec);
        r.trace = run_primal_dual(cfg, env, primal, dual);
        r.primal_regret = primal_regret(r.trace, env);
      }
      r.base = baselines(spec);
      r.metrics = compute_metrics(r.trace, r.base, spec.m,
                                  spec.kind() == InstanceKind::kStochastic ? RhoChoice::kStochastic
                                                                           : RhoChoice::kAdversarial);
      detail::fill_audits(r);
      return r;
    }
    case Algo::kContextual: {
      if (spec.kind() != InstanceKind::kContextualLinear) {
        throw std::invalid_argument("--algo contextual needs a contextual-linear instance");
      }
      const auto& body = std::get<ContextualSpec>(spec.body);
      const double d = static_cast<double>(body.d);
      const double err_bar = d * std::log(std::max(static_cast<double>(spec.T) / d, std::exp(1.0)));
      FrameworkConfig cfg{spec.T, spec.m, spec.K, req.delta, req.eta_override,
                          contextual_primal_bound(spec.K, spec.T, spec.m, err_bar), req.seed};
      r.eta_dual = cfg.dual_learning_rate();
      ContextualEnvironment env(spec, req.seed);
      auto oracles = make_linear_oracles(env);
      OgdDual dual(spec.m, r.eta_dual);
      auto out = run_contextual(cfg, env, oracles, IgwConfig::for_horizon(spec.K, spec.T), dual);
      r.trace = std::move(out.trace);
      r.oracle_bound_ok = lagrangian_error_bound_check(out.ledger.err_f, out.ledger.err_costs,
                                                       r.trace.max_dual_l1(), out.ledger.err_lagrangian);
      r.ledger = std::move(out.ledger);
      r.base = baselines(spec);
      r.metrics = compute_metrics(r.trace, r.base, spec.m, RhoChoice::kStochastic);
      detail::fill_audits(r);
      return r;
    }
  }
  throw std::logic_error("run_experiment: unknown algorithm");
}

// ---------------------------------------------------------------------------
// JSON views.

inline nlohmann::json baselines_json(const BaselineReport& b) {
  return {{"opt_adv", b.opt_adv},
          {"opt_stoc", b.opt_stoc},
          {"rho_adv", b.rho_adv},
          {"rho_stoc", b.rho_stoc},
          {"safe_strategy", b.safe_strategy},
          {"opt_stoc_strategy", b.opt_stoc_strategy}};
}

inline nlohmann::json round_json(const RoundRecord& rec) {
  nlohmann::json j{{"type", "round"},
                   {"t", rec.t},
                   {"action", rec.action},
                   {"lambda", rec.lambda.values()},
                   {"reward", rec.outcome.reward},
                   {"costs", rec.outcome.costs},
                   {"primal_utility", rec.primal_utility}};
  if (rec.context) j["context"] = *rec.context;
  return j;
}

inline nlohmann::json run_config_json(const RunRequest& req, const InstanceSpec& spec) {
  nlohmann::json j{{"instance", req.inline_spec ? std::string("inline") : req.instance},
                   {"kind", to_string(spec.kind())},
                   {"algo", to_string(req.algo)},
                   {"T", spec.T},
                   {"K", spec.K},
                   {"m", spec.m},
                   {"rho", req.rho},
                   {"delta", req.delta},
                   {"seed", req.seed}};
  if (req.eta_override) j["eta_override"] = *req.eta_override;
  if (req.algo == Algo::kLazy) j["M"] = req.lazy_M.value_or(1.0 / req.rho);
  return j;
}

inline nlohmann::json summary_json(const RunResult& r) {
  const auto& mt = r.metrics;
  nlohmann::json j{{"type", "summary"},
                   {"git", git_describe()},
                   {"config", run_config_json(r.request, r.instance)},
                   {"eta_dual", r.eta_dual},
                   {"rew", mt.rew},
                   {"violations", mt.violations},
                   {"v_max", mt.v_max},
                   {"opt_used", mt.opt_used},
                   {"regret_stoc", mt.regret_stoc},
                   {"competitive_gap", mt.competitive_gap},
                   {"max_dual_l1", mt.max_dual_l1},
                   {"self_bound_ok", mt.self_bound_ok},
                   {"dual_link_ok", r.dual_link_ok},
                   {"drift_ok", r.drift_ok},
                   {"baselines", baselines_json(r.base)}};
  if (r.primal_regret) j["primal_regret"] = *r.primal_regret;
  if (r.dual_regret) j["dual_regret"] = *r.dual_regret;
  if (r.ledger) {
    j["oracle_errors"] = {{"err_f", r.ledger->err_f},
                          {"err_costs", r.ledger->err_costs},
                          {"err_lagrangian", r.ledger->err_lagrangian},
                          {"realized_err_f", r.ledger->realized_err_f},
                          {"realized_err_costs", r.ledger->realized_err_costs}};
  }
  if (r.oracle_bound_ok) j["oracle_bound_ok"] = *r.oracle_bound_ok;
  return j;
}

}  // namespace bwlc

#pragma once

// Acceptance criteria and a smaller property suite, runnable from the CLI
// and from the acceptance test binary. Statistical runs for criteria 2 to 5
// are memoized so the audits of criteria 7 and 8 reuse them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bwlc/baselines.hpp"
#include "bwlc/dual_ogd.hpp"
#include "bwlc/exp3six.hpp"
#include "bwlc/experiment.hpp"
#include "bwlc/harness.hpp"
#include "bwlc/igw.hpp"
#include "bwlc/parallel.hpp"
#include "bwlc/regression.hpp"

namespace bwlc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

namespace detail {

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

template <class Fn>
CriterionResult timed(int id, std::string name, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r{id, std::move(name)};
  fn(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

class AcceptanceSuite {
 public:
  static constexpr int kCount = 12;

  struct StatRun {
    MetricsReport metrics;
    BaselineReport base;
    bool link_ok = true;
    bool drift_ok = true;
  };

  explicit AcceptanceSuite(unsigned workers = default_workers()) : workers_(workers) {}

  static std::string name(int id) {
    static const char* names[kCount] = {
        "lazy pair: linear violation with no-regret players",
        "self-bounding multipliers",
        "sublinear violation scaling",
        "stochastic regret decay",
        "adversarial competitive ratio",
        "OGD interval regret",
        "OGD drift",
        "dual-link inequality",
        "IGW correctness",
        "Lagrangian oracle error bound",
        "regression oracle quality",
        "EXP3-SIX weak adaptivity",
    };
    if (id < 1 || id > kCount) throw std::out_of_range("no acceptance criterion " + std::to_string(id));
    return names[id - 1];
  }

  CriterionResult run(int id) {
    return detail::timed(id, name(id), [&](CriterionResult& r) {
      switch (id) {
        case 1: return lazy_pair(r);
        case 2: return self_bounding(r);
        case 3: return violation_scaling(r);
        case 4: return regret_decay(r);
        case 5: return competitive_ratio(r);
        case 6: return ogd_interval_regret(r);
        case 7: return drift(r);
        case 8: return dual_link(r);
        case 9: return igw(r);
        case 10: return oracle_error_bound(r);
        case 11: return oracle_quality(r);
        case 12: return weak_adaptivity(r);
      }
    });
  }

  std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCount; ++id) out.push_back(run(id));
    return out;
  }

  // Statistical parameters.
  static constexpr std::size_t kSelfBoundT = 20000;
  static constexpr std::size_t kSelfBoundSeeds = 20;
  static constexpr std::size_t kScalingSeeds = 10;
  static constexpr std::size_t kScalingT[3] = {2000, 8000, 32000};
  static constexpr std::size_t kRatioT = 30000;
  static constexpr std::size_t kRatioSeeds = 10;
  static constexpr double kRatioRho = 0.5;

  const std::vector<StatRun>& stat_runs(const std::string& instance, std::size_t T, std::size_t seeds,
                                        double rho = 0.5) {
    const auto key = instance + "/" + std::to_string(T) + "/" + std::to_string(seeds) + "/" + detail::fmt(rho);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<StatRun> runs(seeds);
    parallel_for(seeds, workers_, [&](std::size_t k) {
      RunRequest req;
      req.instance = instance;
      req.T = T;
      req.rho = rho;
      req.seed = k + 1;
      const RunResult res = run_experiment(req);
      runs[k] = {res.metrics, res.base, res.dual_link_ok, res.drift_ok};
    });
    return cache_.emplace(key, std::move(runs)).first->second;
  }

 private:
  // Criterion 1.
  static void lazy_pair(CriterionResult& r) {
    constexpr double kTol = 1e-9;
    std::size_t cells = 0, failed = 0;
    std::ostringstream notes;
    for (std::size_t T : {9, 99, 9999}) {
      for (double rho : {0.1, 0.3, 0.9}) {
        for (double mult : {1.0, 2.0}) {
          ++cells;
          const double M = mult / rho;
          const auto rep = lazy_counterexample(T, rho, M);
          const double v_expected = rho * static_cast<double>(T) / 3.0;
          const bool v_ok = std::abs(rep.violation - v_expected) <= kTol;
          const bool p_ok = rep.primal_regret <= kTol;
          const bool d_ok = std::abs(rep.dual_regret) <= kTol;
          if (!(v_ok && p_ok && d_ok)) {
            if (failed++ < 3) {
              notes << " [T=" << T << " rho=" << rho << " M=" << mult << "/rho: V=" << detail::fmt(rep.violation)
                    << " primal_regret=" << detail::fmt(rep.primal_regret)
                    << " dual_regret=" << detail::fmt(rep.dual_regret) << "]";
            }
          }
        }
      }
    }
    r.passed = failed == 0;
    r.detail = std::to_string(cells - failed) + "/" + std::to_string(cells) + " cells match" + notes.str();
  }

  // Criterion 2.
  void self_bounding(CriterionResult& r) {
    const auto& runs = stat_runs("stoch-k3m2", kSelfBoundT, kSelfBoundSeeds);
    const double rho = runs.front().base.rho_stoc;
    const double bound = 13.0 * 2.0 / rho;
    std::size_t ok = 0;
    double worst = 0.0;
    for (const auto& run : runs) {
      ok += run.metrics.max_dual_l1 <= bound;
      worst = std::max(worst, run.metrics.max_dual_l1);
    }
    const bool rho_exact = std::abs(rho - 0.25) <= 1e-12;
    r.passed = rho_exact && ok >= 19;
    r.detail = "rho_stoc=" + detail::fmt(rho, 17) + ", " + std::to_string(ok) + "/20 runs with max||lambda||_1 <= " +
               detail::fmt(bound) + " (largest " + detail::fmt(worst) + ")";
  }

  // Criterion 3.
  void violation_scaling(CriterionResult& r) {
    double med[3];
    for (int k = 0; k < 3; ++k) {
      std::vector<double> v;
      for (const auto& run : stat_runs("stoch-k3m2", kScalingT[k], kScalingSeeds)) v.push_back(run.metrics.v_max);
      med[k] = median(v);
    }
    // A nonpositive median means no net violation at that horizon.
    auto step_ok = [](double small, double large) { return small > 0.0 ? large <= 3.0 * small : large <= 0.0; };
    r.passed = step_ok(med[0], med[1]) && step_ok(med[1], med[2]);
    r.detail = "median V(T) at T=2000,8000,32000: " + detail::fmt(med[0]) + ", " + detail::fmt(med[1]) + ", " +
               detail::fmt(med[2]) + "; ratios " + detail::fmt(med[1] / med[0], 4) + ", " +
               detail::fmt(med[2] / med[1], 4) + " (limit 3)";
  }

  // Criterion 4.
  void regret_decay(CriterionResult& r) {
    double med[3];
    for (int k = 0; k < 3; ++k) {
      std::vector<double> v;
      for (const auto& run : stat_runs("stoch-k3m2", kScalingT[k], kScalingSeeds)) {
        v.push_back(run.metrics.regret_stoc / static_cast<double>(kScalingT[k]));
      }
      med[k] = median(v);
    }
    r.passed = med[1] < med[0] && med[2] < med[1];
    r.detail = "median (T*OPT_Stoc - Rew)/T: " + detail::fmt(med[0]) + ", " + detail::fmt(med[1]) + ", " +
               detail::fmt(med[2]);
  }

  // Criterion 5.
  void competitive_ratio(CriterionResult& r) {
    const auto& runs = stat_runs("lowerbound-b", kRatioT, kRatioSeeds, kRatioRho);
    std::vector<double> rew;
    for (const auto& run : runs) rew.push_back(run.metrics.rew);
    const double T = static_cast<double>(kRatioT);
    const double target =
        kRatioRho / (1.0 + kRatioRho) * runs.front().base.opt_adv - 40.0 * std::sqrt(T) * std::log(T);
    const double med = median(rew);
    r.passed = med >= target;
    r.detail = "median Rew=" + detail::fmt(med) + " vs target " + detail::fmt(target) +
               " (OPT_Adv=" + detail::fmt(runs.front().base.opt_adv) + ")";
  }

  // Criterion 6: sum_{t1..t2} <lambda - lambda_t, g_t> <= ||lambda - lambda_t1||^2/(2 eta) + eta m (t2-t1+1)/2.
  static void ogd_interval_regret(CriterionResult& r) {
    constexpr std::size_t kCases = 1000, T = 200, m = 3;
    Rng rng = make_stream(20240601, Stream::kInstanceGeneration);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), comp(0.0, 5.0), log_eta(std::log(1e-3), 0.0);
    std::uniform_int_distribution<std::size_t> round(0, T - 1);
    std::size_t ok = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < kCases; ++c) {
      const double eta = std::exp(log_eta(rng));
      std::vector<std::vector<double>> g(T, std::vector<double>(m));
      std::vector<std::vector<double>> lam(T + 1);
      DualState state = dual_init(m, eta);
      for (std::size_t t = 0; t < T; ++t) {
        for (double& v : g[t]) v = unit(rng);
        lam[t].assign(state.lambda.values().begin(), state.lambda.values().end());
        state = dual_step(state, g[t]);
      }
      std::vector<double> comparator(m);
      for (double& v : comparator) v = comp(rng);
      std::size_t t1 = round(rng), t2 = round(rng);
      if (t1 > t2) std::swap(t1, t2);
      double lhs = 0.0, dist2 = 0.0;
      for (std::size_t t = t1; t <= t2; ++t) {
        for (std::size_t i = 0; i < m; ++i) lhs += (comparator[i] - lam[t][i]) * g[t][i];
      }
      for (std::size_t i = 0; i < m; ++i) dist2 += (comparator[i] - lam[t1][i]) * (comparator[i] - lam[t1][i]);
      const double rhs = dist2 / (2.0 * eta) + eta * static_cast<double>(m * (t2 - t1 + 1)) / 2.0;
      ok += lhs <= rhs;
      worst_margin = std::min(worst_margin, rhs - lhs);
    }
    r.passed = ok == kCases;
    r.detail = std::to_string(ok) + "/1000 cases hold (smallest margin " + detail::fmt(worst_margin) + ")";
  }

  std::vector<const StatRun*> statistical_runs() {
    std::vector<const StatRun*> all;
    for (const auto& run : stat_runs("stoch-k3m2", kSelfBoundT, kSelfBoundSeeds)) all.push_back(&run);
    for (std::size_t T : kScalingT) {
      for (const auto& run : stat_runs("stoch-k3m2", T, kScalingSeeds)) all.push_back(&run);
    }
    for (const auto& run : stat_runs("lowerbound-b", kRatioT, kRatioSeeds, kRatioRho)) all.push_back(&run);
    return all;
  }

  // Criterion 7.
  void drift(CriterionResult& r) {
    const auto runs = statistical_runs();
    const auto bad = std::count_if(runs.begin(), runs.end(), [](const StatRun* s) { return !s->drift_ok; });
    r.passed = bad == 0;
    r.detail = std::to_string(runs.size() - static_cast<std::size_t>(bad)) + "/" + std::to_string(runs.size()) +
               " traces within m*eta at every step";
  }

  // Criterion 8.
  void dual_link(CriterionResult& r) {
    const auto runs = statistical_runs();
    const auto bad = std::count_if(runs.begin(), runs.end(), [](const StatRun* s) { return !s->link_ok; });
    r.passed = bad == 0;
    r.detail = std::to_string(runs.size() - static_cast<std::size_t>(bad)) + "/" + std::to_string(runs.size()) +
               " traces pass the audit on every constraint";
  }

  // Criterion 9.
  static void igw(CriterionResult& r) {
    Rng rng = make_stream(99, Stream::kInstanceGeneration);
    std::uniform_int_distribution<std::size_t> arms(2, 16);
    std::uniform_real_distribution<double> value(-3.0, 3.0), log_eta(0.0, std::log(1e4)), shift(-50.0, 50.0);
    double worst_norm = 0.0, worst_shift = 0.0;
    for (int n = 0; n < 100000; ++n) {
      std::vector<double> lhat(arms(rng));
      for (double& v : lhat) v = value(rng);
      const double eta = std::exp(log_eta(rng)) - 1.0;
      const auto d = igw_distribution(lhat, eta);
      double total = 0.0;
      for (double x : d.xi) total += x;
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
      if (n % 10 == 0) {
        const double c = shift(rng);
        std::vector<double> shifted(lhat);
        for (double& v : shifted) v += c;
        const auto ds = igw_distribution(shifted, eta);
        for (std::size_t a = 0; a < lhat.size(); ++a) worst_shift = std::max(worst_shift, std::abs(ds.xi[a] - d.xi[a]));
      }
    }
    const double two[2] = {1.0, 0.0};
    const auto closed = igw_distribution(two, 1.0);
    const double golden = std::numbers::phi;
    const double closed_err =
        std::max({std::abs(closed.mu - golden), std::abs(closed.xi[0] - 1.0 / golden),
                  std::abs(closed.xi[1] - 1.0 / (golden + 1.0))});
    r.passed = worst_norm <= 1e-9 && worst_shift <= 1e-9 && closed_err <= 1e-9;
    r.detail = "max |sum xi - 1|=" + detail::fmt(worst_norm, 3) + ", closed-form error " + detail::fmt(closed_err, 3) +
               ", max shift deviation " + detail::fmt(worst_shift, 3);
  }

  // Criterion 10.
  void oracle_error_bound(CriterionResult& r) {
    constexpr std::size_t kRuns = 20, T = 10000;
    std::vector<int> ok(kRuns, 0);
    std::vector<double> ratio(kRuns, 0.0);
    parallel_for(kRuns, workers_, [&](std::size_t k) {
      RunRequest req;
      req.instance = "contextual-d4k5m2";
      req.algo = Algo::kContextual;
      req.T = T;
      req.seed = k + 1;
      const auto res = run_experiment(req);
      ok[k] = res.oracle_bound_ok.value_or(false);
      const auto& led = *res.ledger;
      double sum_costs = 0.0;
      for (double e : led.err_costs) sum_costs += e;
      const double l1 = res.trace.max_dual_l1();
      ratio[k] = led.err_lagrangian / (2.0 * led.err_f + 2.0 * l1 * l1 * sum_costs);
    });
    const auto passed = std::count(ok.begin(), ok.end(), 1);
    r.passed = passed == static_cast<long>(kRuns);
    r.detail = std::to_string(passed) + "/20 contextual traces satisfy the bound (largest Err_L / bound " +
               detail::fmt(*std::max_element(ratio.begin(), ratio.end()), 4) + ")";
  }

  // Criterion 11.
  static void oracle_quality(CriterionResult& r) {
    constexpr std::size_t T = 5000;
    Rng rng = make_stream(11, Stream::kInstanceGeneration);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    constexpr std::size_t N = 16, Z = 10, A = 4;
    std::vector<std::vector<double>> tables(N, std::vector<double>(Z * A));
    for (auto& tab : tables) {
      for (double& v : tab) v = unit(rng);
    }
    std::vector<Regressor> fns;
    for (std::size_t f = 0; f < N; ++f) {
      fns.push_back([tab = tables[f]](std::size_t z, std::size_t a) { return tab[z * A + a]; });
    }
    FiniteClassOracle finite(std::move(fns), kRewardRange);
    const auto& truth = tables[5];
    std::uniform_int_distribution<std::size_t> ctx(0, Z - 1), act(0, A - 1);
    double err_finite = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t z = ctx(rng), a = act(rng);
      const double y = truth[z * A + a];
      const double e = finite.predict(z, a) - y;
      err_finite += e * e;
      finite.update(z, a, y);
    }

    constexpr std::size_t d = 4;
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&] {
      std::vector<double> v(d);
      double sq = 0.0;
      for (double& x : v) {
        x = gauss(rng);
        sq += x * x;
      }
      for (double& x : v) x /= std::sqrt(sq);
      return v;
    };
    const auto theta = random_unit();
    RidgeOracle ridge(d);
    double err_ridge = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      auto x = random_unit();
      const double radius = unit(rng);
      for (double& v : x) v *= radius;
      double y = 0.0;
      for (std::size_t i = 0; i < d; ++i) y += x[i] * theta[i];
      const double e = ridge.predict(x) - y;
      err_ridge += e * e;
      ridge.update(x, y);
    }
    const double finite_limit = 8.0 * std::log(16.0);
    const double ridge_limit = 8.0 * static_cast<double>(d) * std::log(static_cast<double>(T));
    r.passed = err_finite <= finite_limit && err_ridge <= ridge_limit;
    r.detail = "finite class Err=" + detail::fmt(err_finite) + " (limit " + detail::fmt(finite_limit) +
               "), ridge Err=" + detail::fmt(err_ridge) + " (limit " + detail::fmt(ridge_limit) + ")";
  }

  // Criterion 12.
  void weak_adaptivity(CriterionResult& r) {
    constexpr std::size_t K = 4, T = 20000, kSeeds = 20;
    const ScriptedEnvironment env(make_switching(K, T));
    std::vector<double> first(kSeeds), second(kSeeds);
    parallel_for(kSeeds, workers_, [&](std::size_t k) {
      const FrameworkConfig cfg = FrameworkConfig::for_bandit(T, 1, K, 0.05, k + 1);
      ScriptedEnvironment run_env = env;
      Exp3Six primal(K, T, 0.05);
      NullDual dual(1);
      const Trace trace = run_primal_dual(cfg, run_env, primal, dual);
      first[k] = interval_primal_regret(trace, env, 1, T / 2);
      second[k] = interval_primal_regret(trace, env, T / 2 + 1, T);
    });
    const double limit = 10.0 * std::sqrt(static_cast<double>(K * T) / 2.0) * std::log(static_cast<double>(K * T));
    const double m1 = median(first), m2 = median(second);
    r.passed = m1 <= limit && m2 <= limit;
    r.detail = "median phase regrets " + detail::fmt(m1) + ", " + detail::fmt(m2) + " (limit " + detail::fmt(limit) + ")";
  }

  unsigned workers_;
  std::map<std::string, std::vector<StatRun>> cache_;
};

// ---------------------------------------------------------------------------
// Property suite: quick randomized invariants exercised by `verify`.

inline std::vector<CriterionResult> run_properties() {
  std::vector<CriterionResult> out;
  int id = 0;

  out.push_back(detail::timed(++id, "EXP3-SIX distribution stays on the simplex", [](CriterionResult& r) {
    Rng rng = make_stream(1, Stream::kPrimal);
    std::uniform_real_distribution<double> util(-20.0, 20.0);
    Exp3Six learner(5, 1000, 0.05);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const auto draw = learner.act(rng);
      learner.observe(draw, util(rng));
      double s = 0.0;
      for (double p : learner.probabilities()) s += p;
      worst = std::max(worst, std::abs(s - 1.0));
    }
    r.passed = worst <= 1e-9;
    r.detail = "max |sum p - 1|=" + detail::fmt(worst, 3);
  }));

  out.push_back(detail::timed(++id, "dual stays at zero under nonpositive costs", [](CriterionResult& r) {
    Rng rng = make_stream(2, Stream::kEnvironmentNoise);
    std::uniform_real_distribution<double> neg(-1.0, 0.0);
    OgdDual dual(3, 0.5);
    bool ok = true;
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> g{neg(rng), neg(rng), neg(rng)};
      dual.step(g);
      ok = ok && dual.current().l1() == 0.0;
    }
    r.passed = ok;
    r.detail = ok ? "lambda = 0 throughout" : "lambda left zero";
  }));

  out.push_back(detail::timed(++id, "trace aggregates recompute exactly", [](CriterionResult& r) {
    RunRequest req;
    req.instance = "stoch-k3m2";
    req.T = 3000;
    req.seed = 3;
    const auto res = run_experiment(req);
    r.passed = recompute_aggregates(res.trace.records(), res.trace.m()) == res.trace.aggregates() &&
               compute_metrics(res.trace, res.base, 2, RhoChoice::kStochastic).rew == res.metrics.rew;
    r.detail = r.passed ? "bitwise equal" : "mismatch";
  }));

  out.push_back(detail::timed(++id, "primal draws ignore the current multiplier", [](CriterionResult& r) {
    const std::size_t T = 500;
    const auto spec = make_stoch_k3m2(T);
    FrameworkConfig cfg = FrameworkConfig::for_bandit(T, 2, 3, 0.05, 4);
    StochasticEnvironment env_a(spec, 4);
    Exp3Six primal_a(3, T, 0.05);
    NullDual null(2);
    const Trace a = run_primal_dual(cfg, env_a, primal_a, null);
    // Sentinel multipliers change the utilities; only the first draw, which
    // precedes any feedback, must agree.
    StochasticEnvironment env_b(spec, 4);
    Exp3Six primal_b(3, T, 0.05);
    std::vector<DualVector> sentinel(T + 1, DualVector({1e6, 1e6}));
    ScriptedDual loud(std::move(sentinel));
    const Trace b = run_primal_dual(cfg, env_b, primal_b, loud);
    r.passed = a.records().front().action == b.records().front().action;
    r.detail = r.passed ? "round-1 draws agree" : "round-1 draws differ";
  }));

  out.push_back(detail::timed(++id, "feasibility margin matches a grid search", [](CriterionResult& r) {
    Rng rng = make_stream(5, Stream::kInstanceGeneration);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    constexpr int kGrid = 200;
    double worst = 0.0;
    bool ok = true;
    for (int c = 0; c < 50; ++c) {
      Matrix rows(2, 3);
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t x = 0; x < 3; ++x) rows(i, x) = unit(rng);
      }
      const double lp = feasibility_margin(rows).rho;
      double grid = -std::numeric_limits<double>::infinity();
      for (int a = 0; a <= kGrid; ++a) {
        for (int b = 0; a + b <= kGrid; ++b) {
          const double xi[3] = {a / double(kGrid), b / double(kGrid), (kGrid - a - b) / double(kGrid)};
          double worst_row = -std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < 2; ++i) {
            worst_row = std::max(worst_row, rows(i, 0) * xi[0] + rows(i, 1) * xi[1] + rows(i, 2) * xi[2]);
          }
          grid = std::max(grid, -worst_row);
        }
      }
      // Grid points are feasible mixtures, so the LP can only do better, and
      // by at most the row Lipschitz constant times the grid spacing.
      ok = ok && lp >= grid - 1e-12 && lp <= grid + 4.0 / kGrid;
      worst = std::max(worst, lp - grid);
    }
    r.passed = ok;
    r.detail = "largest LP - grid gap " + detail::fmt(worst, 3);
  }));

  return out;
}

}  // namespace bwlc

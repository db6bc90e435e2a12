#pragma once

// Benchmarks of an instance: best fixed arm in hindsight, best
// constraint-satisfying mixture under the mean tables, and the feasibility
// margins rho together with the strategy attaining them.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bwlc/core.hpp"
#include "bwlc/environments.hpp"
#include "bwlc/lp.hpp"

namespace bwlc {

struct BaselineReport {
  double opt_adv = 0.0;   // cumulative, best fixed arm in hindsight
  double opt_stoc = 0.0;  // per round, best mixture feasible in expectation
  double rho_adv = 0.0;
  double rho_stoc = 0.0;
  std::vector<double> safe_strategy;      // attains rho_adv
  std::vector<double> opt_stoc_strategy;  // attains opt_stoc
};

inline constexpr std::size_t kMaxRhoRows = 10000;

struct FeasibilityMargin {
  double rho = 0.0;
  std::vector<double> strategy;
};

// rho = -min_{xi in simplex} max_r <row_r, xi>, solved as the epigraph LP
//   maximize -sigma  s.t.  <row_r, xi> - sigma <= -1,  xi in simplex,  sigma >= 0,
// with s = sigma - 1 (every row lies in [-1,1], so sigma in [0,2]).
inline FeasibilityMargin feasibility_margin(const Matrix& rows) {
  const std::size_t K = rows.cols();
  if (rows.rows() == 0) throw std::invalid_argument("feasibility_margin: no cost rows");
  // Duplicate rows add nothing to the max.
  std::vector<std::vector<double>> unique;
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    std::vector<double> row(rows.row(r).begin(), rows.row(r).end());
    if (std::find(unique.begin(), unique.end(), row) == unique.end()) unique.push_back(std::move(row));
  }
  if (unique.size() > kMaxRhoRows) throw std::invalid_argument("feasibility_margin: too many distinct cost rows");

  const std::size_t n = K + 1;
  Matrix A(unique.size() + 2, n);
  std::vector<double> b(unique.size() + 2);
  for (std::size_t r = 0; r < unique.size(); ++r) {
    for (std::size_t x = 0; x < K; ++x) A(r, x) = unique[r][x];
    A(r, K) = -1.0;
    b[r] = -1.0;
  }
  for (std::size_t x = 0; x < K; ++x) {
    A(unique.size(), x) = 1.0;
    A(unique.size() + 1, x) = -1.0;
  }
  b[unique.size()] = 1.0;
  b[unique.size() + 1] = -1.0;
  std::vector<double> c(n, 0.0);
  c[K] = -1.0;
  const auto sol = solve_standard_lp(c, A, b);
  return {1.0 - sol.x[K], std::vector<double>(sol.x.begin(), sol.x.begin() + static_cast<long>(K))};
}

// Best mixture with mean costs <= 0 on every constraint. Throws
// AssumptionViolation when no such mixture exists.
inline LpSolution opt_stochastic(std::span<const double> mean_rewards, const Matrix& mean_costs) {
  const std::size_t K = mean_rewards.size();
  const std::size_t m = mean_costs.cols();
  Matrix A(m, K);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t x = 0; x < K; ++x) A(i, x) = mean_costs(x, i);
  }
  return solve_lp(mean_rewards, A, std::vector<double>(m, 0.0));
}

namespace detail {

inline Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  }
  return out;
}

inline BaselineReport scripted_baselines(const InstanceSpec& spec) {
  const auto& phases = std::get<ScriptedSpec>(spec.body).phases;
  const std::size_t K = spec.K, m = spec.m;
  BaselineReport out;

  std::vector<double> total(K, 0.0);
  std::vector<double> mean_f(K, 0.0);
  Matrix mean_g(K, m);
  Matrix rows(phases.size() * m, K);
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const auto& ph = phases[p];
    const double len = static_cast<double>(ph.length());
    const double share = len / static_cast<double>(spec.T);
    for (std::size_t x = 0; x < K; ++x) {
      total[x] += len * ph.rewards[x];
      mean_f[x] += share * ph.rewards[x];
      for (std::size_t i = 0; i < m; ++i) {
        mean_g(x, i) += share * ph.costs(x, i);
        rows(p * m + i, x) = ph.costs(x, i);
      }
    }
  }
  out.opt_adv = *std::max_element(total.begin(), total.end());
  auto adv = feasibility_margin(rows);
  out.rho_adv = adv.rho;
  out.safe_strategy = std::move(adv.strategy);
  out.rho_stoc = feasibility_margin(transpose(mean_g)).rho;
  const auto stoc = opt_stochastic(mean_f, mean_g);
  out.opt_stoc = stoc.value;
  out.opt_stoc_strategy = stoc.x;
  return out;
}

inline BaselineReport stochastic_baselines(const InstanceSpec& spec) {
  const auto& s = std::get<StochasticSpec>(spec.body);
  BaselineReport out;
  out.opt_adv = static_cast<double>(spec.T) *
                *std::max_element(s.mean_rewards.begin(), s.mean_rewards.end());
  auto margin = feasibility_margin(transpose(s.mean_costs));
  out.rho_stoc = margin.rho;
  out.rho_adv = margin.rho;
  out.safe_strategy = std::move(margin.strategy);
  const auto stoc = opt_stochastic(s.mean_rewards, s.mean_costs);
  out.opt_stoc = stoc.value;
  out.opt_stoc_strategy = stoc.x;
  return out;
}

// Policies map contexts to mixtures; the LP variables are the C blocks of K
// action probabilities, weighted by the context distribution.
inline BaselineReport contextual_baselines(const InstanceSpec& spec) {
  const auto& c = std::get<ContextualSpec>(spec.body);
  const ContextualEnvironment env(spec, 0);
  const std::size_t C = c.n_contexts, K = spec.K, m = spec.m;

  std::vector<double> weight(C, 1.0 / static_cast<double>(C));
  if (!c.schedule.empty()) {
    std::fill(weight.begin(), weight.end(), 0.0);
    for (std::size_t t = 0; t < spec.T; ++t) weight[c.schedule[t % c.schedule.size()]] += 1.0;
    for (double& w : weight) w /= static_cast<double>(spec.T);
  }

  const std::size_t n = C * K;
  auto simplex_rows = [&](Matrix& A, std::vector<double>& b, std::size_t offset) {
    for (std::size_t z = 0; z < C; ++z) {
      for (std::size_t a = 0; a < K; ++a) {
        A(offset + 2 * z, z * K + a) = 1.0;
        A(offset + 2 * z + 1, z * K + a) = -1.0;
      }
      b[offset + 2 * z] = 1.0;
      b[offset + 2 * z + 1] = -1.0;
    }
  };

  BaselineReport out;
  double best_total = 0.0;
  for (std::size_t z = 0; z < C; ++z) {
    double best = 0.0;
    for (std::size_t a = 0; a < K; ++a) best = std::max(best, env.mean_reward(z, a));
    best_total += weight[z] * best;
  }
  out.opt_adv = static_cast<double>(spec.T) * best_total;

  {
    Matrix A(m + 2 * C, n);
    std::vector<double> b(m + 2 * C, 0.0);
    std::vector<double> obj(n);
    for (std::size_t z = 0; z < C; ++z) {
      for (std::size_t a = 0; a < K; ++a) {
        obj[z * K + a] = weight[z] * env.mean_reward(z, a);
        for (std::size_t i = 0; i < m; ++i) A(i, z * K + a) = weight[z] * env.mean_cost(z, a, i);
      }
    }
    simplex_rows(A, b, m);
    const auto sol = solve_standard_lp(obj, A, b);
    out.opt_stoc = sol.value;
    out.opt_stoc_strategy = sol.x;
  }
  {
    Matrix A(m + 2 * C, n + 1);
    std::vector<double> b(m + 2 * C, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t z = 0; z < C; ++z) {
        for (std::size_t a = 0; a < K; ++a) A(i, z * K + a) = weight[z] * env.mean_cost(z, a, i);
      }
      A(i, n) = -1.0;
      b[i] = -1.0;
    }
    simplex_rows(A, b, m);
    std::vector<double> obj(n + 1, 0.0);
    obj[n] = -1.0;
    const auto sol = solve_standard_lp(obj, A, b);
    out.rho_stoc = 1.0 - sol.x[n];
    out.rho_adv = out.rho_stoc;
    out.safe_strategy.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(n));
  }
  return out;
}

}  // namespace detail

// For stochastic and contextual instances rho_adv is reported from the mean
// tables (equal to rho_stoc); opt_adv is then T times the best mean reward.
// For scripted instances the "mean" tables are the time averages.
inline BaselineReport baselines(const InstanceSpec& spec) {
  spec.validate();
  switch (spec.kind()) {
    case InstanceKind::kAdversarialScripted:
      return detail::scripted_baselines(spec);
    case InstanceKind::kStochastic:
      return detail::stochastic_baselines(spec);
    case InstanceKind::kContextualLinear:
      return detail::contextual_baselines(spec);
  }
  throw std::logic_error("baselines: unknown instance kind");
}

}  // namespace bwlc

#pragma once

// Inverse-gap-weighting primal for contextual bandits:
//   xi(a) = 1 / (mu + eta_p * (max_a' lhat(a') - lhat(a))),
// with mu fixed implicitly by sum_a xi(a) = 1.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "bwlc/core.hpp"
#include "bwlc/regression.hpp"
#include "bwlc/rng.hpp"

namespace bwlc {

struct IgwConfig {
  double eta_p = 1.0;
  std::size_t K = 2;
  double bisection_tol = 1e-12;
  int max_iterations = 200;

  // eta_p = sqrt(K T).
  static IgwConfig for_horizon(std::size_t K, std::size_t T) {
    return {std::sqrt(static_cast<double>(K) * static_cast<double>(T)), K};
  }
};

struct IgwDistribution {
  std::vector<double> xi;
  double mu = 0.0;
};

// The normalizing sum is strictly decreasing in mu, at least 1 at mu = 1 (the
// maximizer alone contributes 1) and at most 1 at mu = K, so [1, K] brackets
// the root. Leftover mass after bisection goes to the first maximizer.
inline IgwDistribution igw_distribution(std::span<const double> lhat, double eta_p,
                                        double bisection_tol = 1e-12, int max_iterations = 200) {
  if (lhat.empty()) throw std::invalid_argument("igw_distribution: empty action set");
  if (!(eta_p >= 0.0) || !std::isfinite(eta_p)) {
    throw std::invalid_argument("igw_distribution: eta_p must be finite and >= 0");
  }
  for (double v : lhat) {
    if (!std::isfinite(v)) throw std::invalid_argument("igw_distribution: non-finite estimate");
  }
  const std::size_t K = lhat.size();
  const auto best_it = std::max_element(lhat.begin(), lhat.end());
  const double best = *best_it;
  const auto best_index = static_cast<std::size_t>(best_it - lhat.begin());

  std::vector<double> gap(K);
  for (std::size_t a = 0; a < K; ++a) gap[a] = eta_p * (best - lhat[a]);
  auto mass = [&](double mu) {
    double s = 0.0;
    for (double g : gap) s += 1.0 / (mu + g);
    return s;
  };

  double lo = 1.0;
  double hi = static_cast<double>(K);
  for (int it = 0; it < max_iterations && hi - lo > bisection_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  IgwDistribution out{std::vector<double>(K), hi};
  double total = 0.0;
  for (std::size_t a = 0; a < K; ++a) {
    out.xi[a] = 1.0 / (hi + gap[a]);
    total += out.xi[a];
  }
  out.xi[best_index] += 1.0 - total;
  return out;
}

struct IgwDecision {
  std::size_t action = 0;
  std::vector<double> xi;
  std::vector<double> lhat;
};

// Estimated Lagrangian per action from the oracles, IGW distribution, draw.
template <RegressionOracle O>
IgwDecision igw_act(const O& reward_oracle, const std::vector<O>& cost_oracles, std::size_t z,
                    const DualVector& lambda, const IgwConfig& cfg, Rng& rng) {
  if (cost_oracles.size() != lambda.size()) {
    throw std::invalid_argument("igw_act: one cost oracle per constraint required");
  }
  IgwDecision out;
  out.lhat.resize(cfg.K);
  std::vector<double> ghat(lambda.size());
  for (std::size_t a = 0; a < cfg.K; ++a) {
    for (std::size_t i = 0; i < ghat.size(); ++i) ghat[i] = cost_oracles[i].predict(z, a);
    out.lhat[a] = lagrangian(reward_oracle.predict(z, a), ghat, lambda);
  }
  auto dist = igw_distribution(out.lhat, cfg.eta_p, cfg.bisection_tol, cfg.max_iterations);
  out.xi = std::move(dist.xi);

  const double u = uniform01(rng);
  double cumulative = 0.0;
  out.action = cfg.K - 1;
  for (std::size_t a = 0; a < cfg.K; ++a) {
    cumulative += out.xi[a];
    if (u < cumulative) {
      out.action = a;
      break;
    }
  }
  while (out.xi[out.action] <= 0.0 && out.action > 0) --out.action;
  return out;
}

}  // namespace bwlc

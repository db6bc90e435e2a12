#pragma once

// EXP3 with implicit-exploration loss estimates and fixed-share mixing.
//
// Learning rate, IX parameter and share rate are functions of (K, T) only;
// nothing here reads the range of the utilities it is fed. Utilities are
// turned into signed losses l = -u with no affine normalization.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bwlc/core.hpp"
#include "bwlc/rng.hpp"

namespace bwlc {

struct Exp3SixState {
  std::vector<double> log_weights;
  double eta_exp = 0.0;
  double gamma_ix = 0.0;
  double sigma_share = 0.0;
  std::size_t K = 0;
};

inline Exp3SixState exp3six_init(std::size_t K, std::size_t T, double delta) {
  if (K < 2) throw std::invalid_argument("exp3six_init: K must be >= 2");
  if (T < 1) throw std::invalid_argument("exp3six_init: T must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("exp3six_init: delta must lie in (0,1)");
  }
  const double k = static_cast<double>(K);
  const double eta = std::sqrt(std::log(k) / (k * static_cast<double>(T)));
  return {std::vector<double>(K, 0.0), eta, eta / 2.0, 1.0 / static_cast<double>(T), K};
}

inline std::vector<double> exp3six_probabilities(const Exp3SixState& state) {
  const double top = *std::max_element(state.log_weights.begin(), state.log_weights.end());
  std::vector<double> p(state.K);
  double total = 0.0;
  for (std::size_t a = 0; a < state.K; ++a) {
    p[a] = std::exp(state.log_weights[a] - top);
    total += p[a];
  }
  for (double& x : p) x /= total;
  return p;
}

// Inverse-CDF draw; the returned probability is the one the draw used.
inline ArmDraw exp3six_sample(const Exp3SixState& state, Rng& rng) {
  const auto p = exp3six_probabilities(state);
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t arm = state.K - 1;
  for (std::size_t a = 0; a < state.K; ++a) {
    cumulative += p[a];
    if (u < cumulative) {
      arm = a;
      break;
    }
  }
  // Never return a zero-probability arm because of rounding in the tail.
  while (p[arm] <= 0.0 && arm > 0) --arm;
  return {arm, p[arm]};
}

// IX estimate l / (p_a + gamma) on the chosen arm, then fixed share
// w <- (1 - sigma) w + (sigma / K) sum_b w_b in weight space.
inline Exp3SixState exp3six_update(const Exp3SixState& state, std::size_t arm, double p_arm,
                                   double utility) {
  if (!(p_arm > 0.0 && p_arm <= 1.0)) {
    throw std::invalid_argument("exp3six_update: probability must lie in (0,1]");
  }
  if (arm >= state.K) throw std::invalid_argument("exp3six_update: arm out of range");
  if (!std::isfinite(utility)) throw std::invalid_argument("exp3six_update: non-finite utility");

  Exp3SixState next = state;
  const double loss = -utility;
  const double estimate = loss / (p_arm + state.gamma_ix);
  next.log_weights[arm] -= state.eta_exp * estimate;

  if (state.sigma_share > 0.0) {
    const double top = *std::max_element(next.log_weights.begin(), next.log_weights.end());
    std::vector<double> w(state.K);
    double total = 0.0;
    for (std::size_t a = 0; a < state.K; ++a) {
      w[a] = std::exp(next.log_weights[a] - top);
      total += w[a];
    }
    const double share = state.sigma_share / static_cast<double>(state.K) * total;
    for (std::size_t a = 0; a < state.K; ++a) {
      next.log_weights[a] = std::log((1.0 - state.sigma_share) * w[a] + share);
    }
  } else {
    const double top = *std::max_element(next.log_weights.begin(), next.log_weights.end());
    for (double& lw : next.log_weights) lw -= top;
  }
  return next;
}

// Primal learner wrapper for the interaction loop.
class Exp3Six {
 public:
  Exp3Six(std::size_t K, std::size_t T, double delta) : state_(exp3six_init(K, T, delta)) {}
  explicit Exp3Six(Exp3SixState state) : state_(std::move(state)) {}

  ArmDraw act(Rng& rng) const { return exp3six_sample(state_, rng); }
  void observe(const ArmDraw& draw, double utility) {
    state_ = exp3six_update(state_, draw.arm, draw.probability, utility);
  }
  std::vector<double> probabilities() const { return exp3six_probabilities(state_); }
  const Exp3SixState& state() const { return state_; }

 private:
  Exp3SixState state_;
};

}  // namespace bwlc

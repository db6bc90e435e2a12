#pragma once

// Dual player: projected online gradient ascent on the nonnegative orthant.
// There is deliberately no upper box; boundedness of the multipliers is a
// property to be checked on traces, not enforced.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bwlc/core.hpp"

namespace bwlc {

struct DualState {
  DualVector lambda;
  double eta = 0.0;
  std::size_t m = 0;
};

inline DualState dual_init(std::size_t m, double eta) {
  if (m < 1) throw std::invalid_argument("dual_init: m must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("dual_init: eta must be positive");
  return {DualVector::zeros(m), eta, m};
}

// lambda_i <- max(0, lambda_i + eta * g_i).
inline DualState dual_step(const DualState& state, std::span<const double> g_observed) {
  if (g_observed.size() != state.m) {
    throw std::invalid_argument("dual_step: gradient dimension mismatch");
  }
  std::vector<double> next(state.m);
  for (std::size_t i = 0; i < state.m; ++i) {
    const double g = g_observed[i];
    if (!(std::abs(g) <= 1.0)) {
      throw std::invalid_argument("dual_step: cost component outside [-1,1]");
    }
    next[i] = std::max(0.0, state.lambda[i] + state.eta * g);
  }
  return {DualVector(std::move(next)), state.eta, state.m};
}

// Learner wrapper used by the interaction loops.
class OgdDual {
 public:
  OgdDual(std::size_t m, double eta) : state_(dual_init(m, eta)) {}
  explicit OgdDual(DualState state) : state_(std::move(state)) {}

  const DualVector& current() const { return state_.lambda; }
  void step(std::span<const double> g) { state_ = dual_step(state_, g); }
  double eta() const { return state_.eta; }
  const DualState& state() const { return state_; }

 private:
  DualState state_;
};

namespace detail {
inline const DualVector& lambda_after(const Trace& trace, std::size_t round_index) {
  const auto& recs = trace.records();
  return round_index + 1 < recs.size() ? recs[round_index + 1].lambda : trace.final_lambda();
}
}  // namespace detail

// For every constraint i, whether sum_{tau<=t} g_{tau,i} <= lambda_{t+1,i} / eta
// held at every prefix t. Comparison carries a 1e-9 relative allowance for
// floating-point rounding in the recursion.
inline std::vector<bool> audit_dual_link(const Trace& trace, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("audit_dual_link: eta must be positive");
  const std::size_t m = trace.m();
  std::vector<bool> ok(m, true);
  std::vector<CompensatedSum> prefix(m);
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto& rec = trace.records()[t];
    const DualVector& next = detail::lambda_after(trace, t);
    for (std::size_t i = 0; i < m; ++i) {
      prefix[i].add(rec.outcome.costs[i]);
      const double lhs = prefix[i].value();
      const double rhs = next[i] / eta;
      const double slack = 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
      if (lhs > rhs + slack) ok[i] = false;
    }
  }
  return ok;
}

// Largest step change | ||lambda_{t+1}||_1 - ||lambda_t||_1 | across a trace.
inline double max_l1_drift(const Trace& trace) {
  double worst = 0.0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const double before = trace.records()[t].lambda.l1();
    const double after = detail::lambda_after(trace, t).l1();
    worst = std::max(worst, std::abs(after - before));
  }
  return worst;
}

// Drift bound: every step moves the l1 norm by at most m * eta. The allowance
// is a few ulps of the multipliers themselves, since lambda + eta * g rounds
// at the scale of lambda.
inline bool drift_within_bound(const Trace& trace, double eta) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  const double bound = static_cast<double>(trace.m()) * eta;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const double before = trace.records()[t].lambda.l1();
    const double after = detail::lambda_after(trace, t).l1();
    const double slack = 8.0 * kEps * (before + after + bound) * static_cast<double>(trace.m());
    if (std::abs(after - before) > bound + slack) return false;
  }
  return true;
}

}  // namespace bwlc

#pragma once

// Benchmark instances: scripted piecewise-constant adversarial sequences,
// stochastic Bernoulli / two-point environments, and contextual linear
// environments. An InstanceSpec is an immutable description; environments
// own the per-run random streams.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bwlc/core.hpp"
#include "bwlc/regression.hpp"
#include "bwlc/rng.hpp"

namespace bwlc {

enum class NoiseModel {
  kNone,       // outcomes equal the means
  kBernoulli,  // reward ~ Bernoulli(mean), cost = +1 w.p. (1 + mean)/2 else -1
};

enum class InstanceKind { kAdversarialScripted, kStochastic, kContextualLinear };

// Rounds first..last (1-based, inclusive) share one reward vector and one
// K x m cost table.
struct Phase {
  std::size_t first = 1;
  std::size_t last = 1;
  std::vector<double> rewards;
  Matrix costs;

  std::size_t length() const { return last - first + 1; }
};

struct ScriptedSpec {
  std::vector<Phase> phases;
};

struct StochasticSpec {
  std::vector<double> mean_rewards;
  Matrix mean_costs;  // K x m
  NoiseModel noise = NoiseModel::kBernoulli;
};

struct ContextualSpec {
  std::size_t d = 1;
  std::size_t n_contexts = 1;
  std::vector<double> features;  // n_contexts x K x d
  std::vector<double> theta_f;   // d
  Matrix theta_g;                // m x d
  std::vector<std::size_t> schedule;  // empty: contexts i.i.d. uniform
  NoiseModel noise = NoiseModel::kBernoulli;
};

struct InstanceSpec {
  std::size_t K = 2;
  std::size_t m = 1;
  std::size_t T = 1;
  std::variant<ScriptedSpec, StochasticSpec, ContextualSpec> body;

  InstanceKind kind() const { return static_cast<InstanceKind>(body.index()); }
  void validate() const;
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

inline void InstanceSpec::validate() const {
  using detail::require;
  require(K >= 2, "instance: K must be >= 2");
  require(m >= 1, "instance: m must be >= 1");
  require(T >= 1, "instance: T must be >= 1");
  if (const auto* s = std::get_if<ScriptedSpec>(&body)) {
    require(!s->phases.empty(), "instance: scripted instance needs at least one phase");
    std::size_t next = 1;
    for (const auto& ph : s->phases) {
      require(ph.first == next && ph.last >= ph.first, "instance: phases must partition [1,T]");
      require(ph.rewards.size() == K, "instance: phase reward vector must have K entries");
      require(ph.costs.rows() == K && ph.costs.cols() == m, "instance: phase cost table must be K x m");
      for (double r : ph.rewards) require(r >= 0.0 && r <= 1.0, "instance: reward outside [0,1]");
      for (double c : ph.costs.data()) require(c >= -1.0 && c <= 1.0, "instance: cost outside [-1,1]");
      next = ph.last + 1;
    }
    require(next == T + 1, "instance: phases must partition [1,T]");
  } else if (const auto* s = std::get_if<StochasticSpec>(&body)) {
    require(s->mean_rewards.size() == K, "instance: mean rewards must have K entries");
    require(s->mean_costs.rows() == K && s->mean_costs.cols() == m, "instance: mean costs must be K x m");
    for (double r : s->mean_rewards) require(r >= 0.0 && r <= 1.0, "instance: mean reward outside [0,1]");
    for (double c : s->mean_costs.data()) require(c >= -1.0 && c <= 1.0, "instance: mean cost outside [-1,1]");
  } else {
    const auto& c = std::get<ContextualSpec>(body);
    require(c.d >= 1 && c.n_contexts >= 1, "instance: contextual d and n_contexts must be >= 1");
    require(c.features.size() == c.n_contexts * K * c.d, "instance: feature table has wrong size");
    require(c.theta_f.size() == c.d, "instance: theta_f must have d entries");
    require(c.theta_g.rows() == m && c.theta_g.cols() == c.d, "instance: theta_g must be m x d");
    require(detail::norm2(c.theta_f) <= 1.0 + 1e-12, "instance: ||theta_f|| exceeds 1");
    for (std::size_t i = 0; i < m; ++i) {
      require(detail::norm2(c.theta_g.row(i)) <= 1.0 + 1e-12, "instance: ||theta_g|| exceeds 1");
    }
    for (std::size_t k = 0; k < c.n_contexts * K; ++k) {
      std::span<const double> z(c.features.data() + k * c.d, c.d);
      require(detail::norm2(z) <= 1.0 + 1e-12, "instance: feature norm exceeds 1");
    }
    for (std::size_t z : c.schedule) require(z < c.n_contexts, "instance: schedule names unknown context");
  }
}

// Full-information outcome table of one round: K rewards and a K x m cost table.
struct RoundTable {
  std::vector<double> rewards;
  Matrix costs;

  Outcome outcome(std::size_t arm) const {
    const auto row = costs.row(arm);
    return {rewards.at(arm), std::vector<double>(row.begin(), row.end())};
  }
};

template <class E>
concept BanditEnvironment = requires(E e, const E ce, std::size_t t) {
  { ce.num_arms() } -> std::convertible_to<std::size_t>;
  { ce.num_constraints() } -> std::convertible_to<std::size_t>;
  { ce.horizon() } -> std::convertible_to<std::size_t>;
  { e.draw(t) } -> std::convertible_to<RoundTable>;
};

// ---------------------------------------------------------------------------

class ScriptedEnvironment {
 public:
  explicit ScriptedEnvironment(InstanceSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.kind() != InstanceKind::kAdversarialScripted) {
      throw std::invalid_argument("ScriptedEnvironment: instance is not scripted");
    }
    for (const auto& ph : phases()) tables_.push_back({ph.rewards, ph.costs});
  }

  std::size_t num_arms() const { return spec_.K; }
  std::size_t num_constraints() const { return spec_.m; }
  std::size_t horizon() const { return spec_.T; }
  const InstanceSpec& spec() const { return spec_; }
  const std::vector<Phase>& phases() const { return std::get<ScriptedSpec>(spec_.body).phases; }

  std::size_t phase_of(std::size_t t) const {
    if (t < 1 || t > spec_.T) throw std::out_of_range("ScriptedEnvironment: round outside [1,T]");
    const auto& ph = phases();
    const auto it = std::upper_bound(ph.begin(), ph.end(), t,
                                     [](std::size_t v, const Phase& p) { return v < p.first; });
    return static_cast<std::size_t>(it - ph.begin()) - 1;
  }

  const RoundTable& table(std::size_t t) const { return tables_[phase_of(t)]; }
  const RoundTable& draw(std::size_t t) const { return table(t); }

 private:
  InstanceSpec spec_;
  std::vector<RoundTable> tables_;
};

// Rounds must be drawn in order 1, 2, ..., T; every arm's outcome is drawn
// each round so the noise stream does not depend on which arm is played.
class StochasticEnvironment {
 public:
  StochasticEnvironment(InstanceSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)), rng_(make_stream(seed, Stream::kEnvironmentNoise)) {
    spec_.validate();
    if (spec_.kind() != InstanceKind::kStochastic) {
      throw std::invalid_argument("StochasticEnvironment: instance is not stochastic");
    }
  }

  std::size_t num_arms() const { return spec_.K; }
  std::size_t num_constraints() const { return spec_.m; }
  std::size_t horizon() const { return spec_.T; }
  const InstanceSpec& spec() const { return spec_; }
  const StochasticSpec& means() const { return std::get<StochasticSpec>(spec_.body); }

  RoundTable draw(std::size_t t) {
    if (t != next_round_) throw std::logic_error("StochasticEnvironment: rounds must be drawn in order");
    if (t > spec_.T) throw std::out_of_range("StochasticEnvironment: horizon exhausted");
    ++next_round_;
    const auto& mu = means();
    RoundTable out{std::vector<double>(spec_.K), Matrix(spec_.K, spec_.m)};
    for (std::size_t x = 0; x < spec_.K; ++x) {
      out.rewards[x] = sample_reward(mu.mean_rewards[x]);
      for (std::size_t i = 0; i < spec_.m; ++i) out.costs(x, i) = sample_cost(mu.mean_costs(x, i));
    }
    return out;
  }

 private:
  double sample_reward(double mean) {
    if (means().noise == NoiseModel::kNone) return mean;
    return uniform01(rng_) < mean ? 1.0 : 0.0;
  }
  double sample_cost(double mean) {
    if (means().noise == NoiseModel::kNone) return mean;
    return uniform01(rng_) < 0.5 * (1.0 + mean) ? 1.0 : -1.0;
  }

  InstanceSpec spec_;
  Rng rng_;
  std::size_t next_round_ = 1;
};

// Contextual linear environment: mean reward (1 + <z_a, theta_f>)/2, mean
// cost i <z_a, theta_{g,i}>, noise as in the stochastic environment.
class ContextualEnvironment {
 public:
  ContextualEnvironment(InstanceSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)),
        noise_rng_(make_stream(seed, Stream::kEnvironmentNoise)),
        context_rng_(make_stream(seed, Stream::kContexts)) {
    spec_.validate();
    if (spec_.kind() != InstanceKind::kContextualLinear) {
      throw std::invalid_argument("ContextualEnvironment: instance is not contextual");
    }
    const auto& c = body();
    features_ = std::make_shared<const FeatureTable>(c.n_contexts, spec_.K, c.d, c.features);
  }

  std::size_t num_arms() const { return spec_.K; }
  std::size_t num_constraints() const { return spec_.m; }
  std::size_t horizon() const { return spec_.T; }
  std::size_t num_contexts() const { return body().n_contexts; }
  const InstanceSpec& spec() const { return spec_; }
  const ContextualSpec& body() const { return std::get<ContextualSpec>(spec_.body); }
  std::shared_ptr<const FeatureTable> features() const { return features_; }

  double mean_reward(std::size_t z, std::size_t a) const {
    return std::clamp(0.5 * (1.0 + detail::dot(features_->feature(z, a), body().theta_f)), 0.0, 1.0);
  }
  double mean_cost(std::size_t z, std::size_t a, std::size_t i) const {
    return std::clamp(detail::dot(features_->feature(z, a), body().theta_g.row(i)), -1.0, 1.0);
  }

  std::size_t next_context(std::size_t t) {
    if (t != next_context_round_) throw std::logic_error("ContextualEnvironment: contexts drawn out of order");
    if (t > spec_.T) throw std::out_of_range("ContextualEnvironment: horizon exhausted");
    ++next_context_round_;
    const auto& sched = body().schedule;
    if (!sched.empty()) return sched[(t - 1) % sched.size()];
    return std::uniform_int_distribution<std::size_t>(0, body().n_contexts - 1)(context_rng_);
  }

  RoundTable draw(std::size_t t, std::size_t z) {
    if (t != next_round_) throw std::logic_error("ContextualEnvironment: rounds must be drawn in order");
    ++next_round_;
    RoundTable out{std::vector<double>(spec_.K), Matrix(spec_.K, spec_.m)};
    const bool noisy = body().noise == NoiseModel::kBernoulli;
    for (std::size_t a = 0; a < spec_.K; ++a) {
      const double fr = mean_reward(z, a);
      out.rewards[a] = noisy ? (uniform01(noise_rng_) < fr ? 1.0 : 0.0) : fr;
      for (std::size_t i = 0; i < spec_.m; ++i) {
        const double gc = mean_cost(z, a, i);
        out.costs(a, i) = noisy ? (uniform01(noise_rng_) < 0.5 * (1.0 + gc) ? 1.0 : -1.0) : gc;
      }
    }
    return out;
  }

 private:
  InstanceSpec spec_;
  Rng noise_rng_;
  Rng context_rng_;
  std::shared_ptr<const FeatureTable> features_;
  std::size_t next_round_ = 1;
  std::size_t next_context_round_ = 1;
};

// ---------------------------------------------------------------------------
// Instance constructors.

// Three arms, one constraint. a1 always has reward 0 and cost -rho. a3 pays 1
// on the first third, a2 on the second third; both cost 0 until 2T/3 and rho
// afterwards.
inline InstanceSpec make_example1(std::size_t T, double rho) {
  if (T == 0 || T % 3 != 0) throw std::invalid_argument("make_example1: T must be a positive multiple of 3");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("make_example1: rho must lie in (0,1]");
  const std::size_t third = T / 3;
  auto costs = [&](double late) { return Matrix(3, 1, std::vector<double>{-rho, late, late}); };
  ScriptedSpec s;
  s.phases.push_back({1, third, {0.0, 0.0, 1.0}, costs(0.0)});
  s.phases.push_back({third + 1, 2 * third, {0.0, 1.0, 0.0}, costs(0.0)});
  s.phases.push_back({2 * third + 1, T, {0.0, 0.0, 0.0}, costs(rho)});
  return {3, 1, T, std::move(s)};
}

struct LowerBoundPair {
  InstanceSpec a;
  InstanceSpec b;
};

// Two instances identical on the first T/2 rounds. In A, a1 pays 1 and costs 1
// early, then pays 0 and costs -1; a2 pays 0 and costs -rho throughout. In B,
// a1 pays 1 and costs 1 throughout; a2 costs -rho early and -delta*rho late.
inline LowerBoundPair make_lowerbound(std::size_t T, double rho, double delta_param) {
  if (T == 0 || T % 2 != 0) throw std::invalid_argument("make_lowerbound: T must be a positive even number");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("make_lowerbound: rho must lie in (0,1)");
  if (!(delta_param > 0.0) || delta_param * rho > 1.0) {
    throw std::invalid_argument("make_lowerbound: delta parameter must be positive with delta*rho <= 1");
  }
  const std::size_t half = T / 2;
  auto costs = [](double g1, double g2) { return Matrix(2, 1, std::vector<double>{g1, g2}); };
  ScriptedSpec a;
  a.phases.push_back({1, half, {1.0, 0.0}, costs(1.0, -rho)});
  a.phases.push_back({half + 1, T, {0.0, 0.0}, costs(-1.0, -rho)});
  ScriptedSpec b;
  b.phases.push_back({1, half, {1.0, 0.0}, costs(1.0, -rho)});
  b.phases.push_back({half + 1, T, {1.0, 0.0}, costs(1.0, -delta_param * rho)});
  return {{2, 1, T, std::move(a)}, {2, 1, T, std::move(b)}};
}

inline InstanceSpec make_stochastic_spec(std::vector<double> mean_rewards, Matrix mean_costs, std::size_t T,
                                         NoiseModel noise = NoiseModel::kBernoulli) {
  const std::size_t K = mean_rewards.size();
  const std::size_t m = mean_costs.cols();
  InstanceSpec spec{K, m, T, StochasticSpec{std::move(mean_rewards), std::move(mean_costs), noise}};
  spec.validate();
  return spec;
}

inline StochasticEnvironment make_stochastic(std::vector<double> mean_rewards, Matrix mean_costs, std::size_t T,
                                             std::uint64_t seed) {
  return {make_stochastic_spec(std::move(mean_rewards), std::move(mean_costs), T), seed};
}

// Contextual linear instance over an explicit feature table.
inline InstanceSpec make_contextual_linear(std::size_t d, std::size_t K, std::size_t n_contexts,
                                           std::vector<double> features, std::vector<double> theta_f,
                                           Matrix theta_g, std::size_t T,
                                           NoiseModel noise = NoiseModel::kBernoulli) {
  ContextualSpec c{d, n_contexts, std::move(features), std::move(theta_f), std::move(theta_g), {}, noise};
  InstanceSpec spec{K, c.theta_g.rows(), T, std::move(c)};
  spec.validate();
  return spec;
}

// Contextual linear instance with features drawn from `seed`: uniform
// directions with norms uniform in [0.5, 1].
inline InstanceSpec make_contextual_linear(std::size_t d, std::size_t K, std::size_t n_contexts,
                                           std::vector<double> theta_f, Matrix theta_g, std::size_t T,
                                           std::uint64_t seed, NoiseModel noise = NoiseModel::kBernoulli) {
  Rng rng = make_stream(seed, Stream::kInstanceGeneration);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.5, 1.0);
  std::vector<double> features(n_contexts * K * d);
  for (std::size_t k = 0; k < n_contexts * K; ++k) {
    std::span<double> z(features.data() + k * d, d);
    double sq = 0.0;
    for (double& v : z) {
      v = gauss(rng);
      sq += v * v;
    }
    const double scale = radius(rng) / std::max(std::sqrt(sq), 1e-300);
    for (double& v : z) v *= scale;
  }
  return make_contextual_linear(d, K, n_contexts, std::move(features), std::move(theta_f), std::move(theta_g),
                                T, noise);
}

// Unconstrained switching bandit: the best arm changes at T/2. Costs are a
// constant -1 on one constraint so the instance is trivially feasible.
inline InstanceSpec make_switching(std::size_t K, std::size_t T, double high = 0.7, double low = 0.4) {
  if (K < 2 || T < 2) throw std::invalid_argument("make_switching: need K >= 2 and T >= 2");
  const std::size_t half = T / 2;
  std::vector<double> first(K, low), second(K, low);
  first[0] = high;
  second[1] = high;
  ScriptedSpec s;
  s.phases.push_back({1, half, first, Matrix(K, 1, -1.0)});
  s.phases.push_back({half + 1, T, second, Matrix(K, 1, -1.0)});
  InstanceSpec spec{K, 1, T, std::move(s)};
  spec.validate();
  return spec;
}

}  // namespace bwlc

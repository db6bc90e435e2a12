#pragma once

// Domain types shared by every module: outcomes, dual vectors, run
// configuration, per-round records and traces, the Lagrangian and the
// learning-rate constants of the dual player.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bwlc {

// Neumaier-compensated running sum. Two accumulators fed the same sequence
// produce bit-identical results, which keeps trace aggregate checks exact.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Row-major dense matrix used for reward/cost tables and LP constraint rows.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("Matrix: data size does not match shape");
    }
  }
  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix out(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != out.cols_) {
        throw std::invalid_argument("Matrix: ragged rows");
      }
      std::copy(rows[r].begin(), rows[r].end(), out.data_.begin() + r * out.cols_);
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// One round's feedback at the played action: reward in [0,1] and an
// m-vector of costs in [-1,1].
struct Outcome {
  double reward = 0.0;
  std::vector<double> costs;

  void validate() const {
    if (!(reward >= 0.0 && reward <= 1.0)) {
      throw std::invalid_argument("Outcome: reward outside [0,1]");
    }
    for (double c : costs) {
      if (!(c >= -1.0 && c <= 1.0)) {
        throw std::invalid_argument("Outcome: cost outside [-1,1]");
      }
    }
  }
  bool operator==(const Outcome&) const = default;
};

// Nonnegative vector of Lagrange multipliers.
class DualVector {
 public:
  DualVector() = default;
  explicit DualVector(std::vector<double> components) : v_(std::move(components)) {
    for (double x : v_) {
      if (!(x >= 0.0)) throw std::invalid_argument("DualVector: negative component");
    }
  }
  static DualVector zeros(std::size_t m) { return DualVector(std::vector<double>(m, 0.0)); }

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<const double> values() const { return v_; }
  double l1() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s;
  }
  bool operator==(const DualVector&) const = default;

 private:
  std::vector<double> v_;
};

// L(f, g, lambda) = f - <lambda, g>.
inline double lagrangian(double f_val, std::span<const double> g_vec, const DualVector& lambda) {
  if (g_vec.size() != lambda.size()) {
    throw std::invalid_argument("lagrangian: dimension mismatch between costs and multipliers");
  }
  double penalty = 0.0;
  for (std::size_t i = 0; i < g_vec.size(); ++i) penalty += lambda[i] * g_vec[i];
  return f_val - penalty;
}

// E_{T,delta} = sqrt(16 T ln(2T/delta)), natural logarithm.
inline double concentration_constant(std::size_t T, double delta) {
  if (T < 1) throw std::invalid_argument("concentration_constant: T must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("concentration_constant: delta must lie in (0,1)");
  }
  const double t = static_cast<double>(T);
  return std::sqrt(16.0 * t * std::log(2.0 * t / delta));
}

// Dual learning rate 1 / (800 m max(primal_bound, E)).
inline double eta_ogd(std::size_t m, double primal_bound, double E) {
  if (m < 1) throw std::invalid_argument("eta_ogd: m must be >= 1");
  if (!(primal_bound > 0.0) || !(E > 0.0)) {
    throw std::invalid_argument("eta_ogd: primal_bound and E must be positive");
  }
  return 1.0 / (800.0 * static_cast<double>(m) * std::max(primal_bound, E));
}

// Interval-regret bound sqrt(KT) ln(KT/delta) of the fixed-share IX primal.
inline double default_primal_bound(std::size_t K, std::size_t T, double delta) {
  const double kt = static_cast<double>(K) * static_cast<double>(T);
  return std::sqrt(kt) * std::log(kt / delta);
}

// m * Err * sqrt(KT): interval-regret scale of the inverse-gap-weighting primal
// given an oracle error bound `oracle_error_bound`.
inline double contextual_primal_bound(std::size_t K, std::size_t T, std::size_t m,
                                      double oracle_error_bound) {
  const double kt = static_cast<double>(K) * static_cast<double>(T);
  return static_cast<double>(m) * std::max(oracle_error_bound, 1.0) * std::sqrt(kt);
}

struct FrameworkConfig {
  std::size_t T = 1;
  std::size_t m = 1;
  std::size_t K = 2;
  double delta = 0.05;
  std::optional<double> eta_ogd_override;
  double primal_bound_estimate = 1.0;
  std::uint64_t seed = 0;

  static FrameworkConfig for_bandit(std::size_t T, std::size_t m, std::size_t K, double delta,
                                    std::uint64_t seed) {
    FrameworkConfig cfg{T, m, K, delta, std::nullopt, default_primal_bound(K, T, delta), seed};
    cfg.validate();
    return cfg;
  }

  void validate() const {
    if (T < 1) throw std::invalid_argument("FrameworkConfig: T must be >= 1");
    if (m < 1) throw std::invalid_argument("FrameworkConfig: m must be >= 1");
    if (K < 2) throw std::invalid_argument("FrameworkConfig: K must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) {
      throw std::invalid_argument("FrameworkConfig: delta must lie in (0,1)");
    }
    if (eta_ogd_override && !(*eta_ogd_override > 0.0)) {
      throw std::invalid_argument("FrameworkConfig: eta override must be positive");
    }
    if (!(primal_bound_estimate > 0.0)) {
      throw std::invalid_argument("FrameworkConfig: primal bound estimate must be positive");
    }
  }

  double dual_learning_rate() const {
    if (eta_ogd_override) return *eta_ogd_override;
    return eta_ogd(m, primal_bound_estimate, concentration_constant(T, delta));
  }
};

struct RoundRecord {
  std::size_t t = 0;  // 1-based round index
  std::size_t action = 0;
  std::optional<std::size_t> context;
  DualVector lambda;  // multiplier in force during round t
  Outcome outcome;
  double primal_utility = 0.0;
  std::vector<double> dual_gradient;
};

struct TraceAggregates {
  double cum_reward = 0.0;
  std::vector<double> cum_violations;
  double max_dual_l1 = 0.0;
  double utility_range = 0.0;

  bool operator==(const TraceAggregates&) const = default;
};

// Aggregates rebuilt from scratch; the same summation order as Trace::push.
inline TraceAggregates recompute_aggregates(std::span<const RoundRecord> records, std::size_t m) {
  CompensatedSum reward;
  std::vector<CompensatedSum> viol(m);
  TraceAggregates out;
  for (const auto& r : records) {
    reward.add(r.outcome.reward);
    for (std::size_t i = 0; i < m; ++i) viol[i].add(r.outcome.costs.at(i));
    out.max_dual_l1 = std::max(out.max_dual_l1, r.lambda.l1());
    out.utility_range = std::max(out.utility_range, std::abs(r.primal_utility));
  }
  out.cum_reward = reward.value();
  out.cum_violations.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.cum_violations[i] = viol[i].value();
  return out;
}

// Per-round log of a primal-dual run plus running aggregates.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::size_t m) : m_(m), violations_(m) {
    final_lambda_ = DualVector::zeros(m);
  }

  void push(RoundRecord record) {
    if (record.outcome.costs.size() != m_ || record.lambda.size() != m_) {
      throw std::invalid_argument("Trace: record dimension mismatch");
    }
    reward_.add(record.outcome.reward);
    for (std::size_t i = 0; i < m_; ++i) violations_[i].add(record.outcome.costs[i]);
    max_dual_l1_ = std::max(max_dual_l1_, record.lambda.l1());
    utility_range_ = std::max(utility_range_, std::abs(record.primal_utility));
    records_.push_back(std::move(record));
  }

  // Multiplier after the last dual step (lambda_{T+1}).
  void set_final_lambda(DualVector lambda) { final_lambda_ = std::move(lambda); }
  const DualVector& final_lambda() const { return final_lambda_; }

  // Test hook for constructing corrupted traces.
  std::vector<RoundRecord>& mutable_records() { return records_; }

  std::size_t m() const { return m_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<RoundRecord>& records() const { return records_; }

  double cum_reward() const { return reward_.value(); }
  std::vector<double> cum_violations() const {
    std::vector<double> out(m_);
    for (std::size_t i = 0; i < m_; ++i) out[i] = violations_[i].value();
    return out;
  }
  double max_violation() const {
    if (m_ == 0) return 0.0;
    const auto v = cum_violations();
    return *std::max_element(v.begin(), v.end());
  }
  double max_dual_l1() const { return max_dual_l1_; }
  double utility_range() const { return utility_range_; }

  TraceAggregates aggregates() const {
    return {cum_reward(), cum_violations(), max_dual_l1_, utility_range_};
  }

 private:
  std::size_t m_ = 0;
  std::vector<RoundRecord> records_;
  DualVector final_lambda_;
  CompensatedSum reward_;
  std::vector<CompensatedSum> violations_;
  double max_dual_l1_ = 0.0;
  double utility_range_ = 0.0;
};

// Arm drawn by a randomized learner together with the probability it used.
struct ArmDraw {
  std::size_t arm = 0;
  double probability = 1.0;
};

}  // namespace bwlc

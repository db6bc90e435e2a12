#pragma once

// Online regression oracles for the contextual primal: an exponentially
// weighted forecaster over a finite class and a Vovk-Azoury-Warmuth ridge
// forecaster over linear features, plus cumulative error accounting.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "bwlc/core.hpp"

namespace bwlc {

struct TargetRange {
  double lo = 0.0;
  double hi = 1.0;
  double clip(double y) const { return std::clamp(y, lo, hi); }
  bool contains(double y) const { return y >= lo && y <= hi; }
};

inline constexpr TargetRange kRewardRange{0.0, 1.0};
inline constexpr TargetRange kCostRange{-1.0, 1.0};

// Any oracle usable by the contextual primal: predicts at (context, action)
// and learns from a labeled point at (context, action).
template <class O>
concept RegressionOracle = requires(O o, const O co, std::size_t z, std::size_t a, double y) {
  { co.predict(z, a) } -> std::convertible_to<double>;
  o.update(z, a, y);
};

using Regressor = std::function<double(std::size_t context, std::size_t action)>;

// Exponentially weighted mean forecaster over N candidate regressors.
class FiniteClassOracle {
 public:
  static constexpr double kDefaultEta = 0.5;

  FiniteClassOracle(std::vector<Regressor> functions, TargetRange range, double eta_v = kDefaultEta)
      : functions_(std::move(functions)),
        log_weights_(functions_.size(), 0.0),
        eta_v_(eta_v),
        range_(range) {
    if (functions_.empty()) throw std::invalid_argument("FiniteClassOracle: empty class");
    if (!(eta_v_ > 0.0)) throw std::invalid_argument("FiniteClassOracle: eta must be positive");
  }

  std::size_t size() const { return functions_.size(); }
  double eta() const { return eta_v_; }
  const TargetRange& range() const { return range_; }

  std::vector<double> weights() const {
    const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
    std::vector<double> w(log_weights_.size());
    double total = 0.0;
    for (std::size_t f = 0; f < w.size(); ++f) {
      w[f] = std::exp(log_weights_[f] - top);
      total += w[f];
    }
    for (double& x : w) x /= total;
    return w;
  }

  // Replace the weight vector (must be a probability vector).
  void set_weights(std::span<const double> w) {
    if (w.size() != functions_.size()) throw std::invalid_argument("set_weights: size mismatch");
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) throw std::invalid_argument("set_weights: negative weight");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("set_weights: not normalized");
    for (std::size_t f = 0; f < w.size(); ++f) {
      log_weights_[f] = w[f] > 0.0 ? std::log(w[f]) : -std::numeric_limits<double>::infinity();
    }
  }

  double predict(std::size_t z, std::size_t a) const {
    const auto w = weights();
    double y = 0.0;
    for (std::size_t f = 0; f < functions_.size(); ++f) {
      if (w[f] > 0.0) y += w[f] * functions_[f](z, a);
    }
    return range_.clip(y);
  }

  // w_f <- w_f exp(-eta (f(z,a) - y)^2), renormalized.
  void update(std::size_t z, std::size_t a, double y) {
    for (std::size_t f = 0; f < functions_.size(); ++f) {
      const double r = functions_[f](z, a) - y;
      log_weights_[f] -= eta_v_ * r * r;
    }
    const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
    for (double& lw : log_weights_) lw -= top;
  }

 private:
  std::vector<Regressor> functions_;
  std::vector<double> log_weights_;
  double eta_v_;
  TargetRange range_;
};

// Online ridge forecaster in Vovk-Azoury form: the query feature enters the
// Gram matrix before prediction.
class RidgeOracle {
 public:
  explicit RidgeOracle(std::size_t d, double lambda_reg = 1.0, TargetRange range = kCostRange)
      : gram_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                        static_cast<Eigen::Index>(d)) *
              lambda_reg),
        moment_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))),
        lambda_reg_(lambda_reg),
        range_(range) {
    if (d < 1) throw std::invalid_argument("RidgeOracle: d must be >= 1");
    if (!(lambda_reg > 0.0)) throw std::invalid_argument("RidgeOracle: lambda_reg must be positive");
  }

  std::size_t dim() const { return static_cast<std::size_t>(moment_.size()); }
  double lambda_reg() const { return lambda_reg_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& moment() const { return moment_; }
  const TargetRange& range() const { return range_; }

  double predict(std::span<const double> feature) const {
    const Eigen::VectorXd x = to_vector(feature);
    const Eigen::MatrixXd system = gram_ + x * x.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("RidgeOracle: Gram system is not positive definite");
    }
    const Eigen::VectorXd theta = llt.solve(moment_);
    return range_.clip(x.dot(theta));
  }

  void update(std::span<const double> feature, double y) {
    const Eigen::VectorXd x = to_vector(feature);
    gram_.noalias() += x * x.transpose();
    moment_ += y * x;
  }

 private:
  Eigen::VectorXd to_vector(std::span<const double> feature) const {
    if (feature.size() != dim()) throw std::invalid_argument("RidgeOracle: feature dimension");
    double sq = 0.0;
    for (double v : feature) sq += v * v;
    if (sq > 1.0 + 1e-9) throw std::invalid_argument("RidgeOracle: feature norm exceeds 1");
    return Eigen::Map<const Eigen::VectorXd>(feature.data(),
                                             static_cast<Eigen::Index>(feature.size()));
  }

  Eigen::MatrixXd gram_;
  Eigen::VectorXd moment_;
  double lambda_reg_;
  TargetRange range_;
};

// Feature vectors z_{c,a} in R^d, stored context-major then action-major.
class FeatureTable {
 public:
  FeatureTable(std::size_t n_contexts, std::size_t K, std::size_t d, std::vector<double> values)
      : n_contexts_(n_contexts), K_(K), d_(d), values_(std::move(values)) {
    if (values_.size() != n_contexts_ * K_ * d_) {
      throw std::invalid_argument("FeatureTable: size does not match n_contexts * K * d");
    }
  }
  std::size_t contexts() const { return n_contexts_; }
  std::size_t actions() const { return K_; }
  std::size_t dim() const { return d_; }
  std::span<const double> feature(std::size_t z, std::size_t a) const {
    return {values_.data() + (z * K_ + a) * d_, d_};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t n_contexts_, K_, d_;
  std::vector<double> values_;
};

// Ridge oracle over a feature table. Labels pass through y' = scale * y + offset
// before fitting, and predictions are mapped back; this keeps an affine target
// like (1 + <z,theta>)/2 realizable by a linear fit.
class LinearFeatureOracle {
 public:
  LinearFeatureOracle(std::shared_ptr<const FeatureTable> features, TargetRange range,
                      double label_scale = 1.0, double label_offset = 0.0,
                      double lambda_reg = 1.0)
      : features_(std::move(features)),
        ridge_(features_->dim(), lambda_reg, TargetRange{-1e300, 1e300}),
        range_(range),
        scale_(label_scale),
        offset_(label_offset) {
    if (scale_ == 0.0) throw std::invalid_argument("LinearFeatureOracle: zero label scale");
  }

  double predict(std::size_t z, std::size_t a) const {
    const double raw = ridge_.predict(features_->feature(z, a));
    return range_.clip((raw - offset_) / scale_);
  }
  void update(std::size_t z, std::size_t a, double y) {
    ridge_.update(features_->feature(z, a), scale_ * y + offset_);
  }
  const RidgeOracle& ridge() const { return ridge_; }

 private:
  std::shared_ptr<const FeatureTable> features_;
  RidgeOracle ridge_;
  TargetRange range_;
  double scale_;
  double offset_;
};

// Cumulative squared errors against the true mean regressor and, as a
// diagnostic, against the realized labels.
struct OracleErrorLedger {
  double err_f = 0.0;
  std::vector<double> err_costs;
  double err_lagrangian = 0.0;
  double realized_err_f = 0.0;
  std::vector<double> realized_err_costs;

  explicit OracleErrorLedger(std::size_t m = 0) : err_costs(m, 0.0), realized_err_costs(m, 0.0) {}
};

// Err(O_L) <= 2 Err(O_f) + 2 (sup ||lambda||_1)^2 sum_i Err(O_i); boundary inclusive.
inline bool lagrangian_error_bound_check(double err_f, std::span<const double> err_costs,
                                         double max_dual_l1, double err_L) {
  double total = 0.0;
  for (double e : err_costs) total += e;
  const double bound = 2.0 * err_f + 2.0 * max_dual_l1 * max_dual_l1 * total;
  return err_L <= bound;
}

}  // namespace bwlc

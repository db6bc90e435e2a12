#pragma once

// Dense simplex for the small LPs behind the baselines. Dictionary (condensed
// tableau) form: storage is (rows + 1) x (vars + 1), so a few thousand
// constraint rows over a handful of arms stay cheap. Bland's rule throughout,
// auxiliary-variable phase one when the origin is infeasible.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bwlc/core.hpp"

namespace bwlc {

// Infeasible baseline LP: no mixture satisfies the constraints.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LpSolution {
  std::vector<double> x;
  double value = 0.0;
};

namespace detail {

class Dictionary {
 public:
  // Rows: basic_i = rhs_i - sum_j a_ij * nonbasic_j. Objective: z = v + sum_j c_j * nonbasic_j.
  Dictionary(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), tab_((rows + 1) * (cols + 1), 0.0), basic_(rows), nonbasic_(cols) {}

  double& at(std::size_t r, std::size_t c) { return tab_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return tab_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& obj(std::size_t c) { return at(rows_, c); }
  double& obj_value() { return at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basic() { return basic_; }
  std::vector<std::size_t>& nonbasic() { return nonbasic_; }

  // Exchange nonbasic column e with basic row l.
  void pivot(std::size_t l, std::size_t e) {
    const double piv = at(l, e);
    for (std::size_t c = 0; c <= cols_; ++c) {
      if (c != e) at(l, c) /= piv;
    }
    at(l, e) = 1.0 / piv;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == l) continue;
      const double factor = at(r, e);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (c != e) at(r, c) -= factor * at(l, c);
      }
      // Constraint rows carry "rhs - sum", the objective row "value + sum".
      if (r == rows_) {
        at(r, cols_) += factor * at(l, cols_);
      } else {
        at(r, cols_) -= factor * at(l, cols_);
      }
      at(r, e) = -factor * at(l, e);
    }
    std::swap(basic_[l], nonbasic_[e]);
  }

  // Bland's rule. Returns false if unbounded.
  bool optimize(double eps) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (obj(c) > eps && (enter == cols_ || nonbasic_[c] < nonbasic_[enter])) enter = c;
      }
      if (enter == cols_) return true;
      std::size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= eps) continue;
        const double ratio = at(r, cols_) / a;
        if (ratio < best_ratio - eps ||
            (std::abs(ratio - best_ratio) <= eps && basic_[r] < basic_[leave])) {
          best_ratio = std::min(best_ratio, ratio);
          leave = r;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> tab_;
  std::vector<std::size_t> basic_, nonbasic_;
};

}  // namespace detail

// maximize c.x  subject to  A x <= b,  x >= 0.
inline LpSolution solve_standard_lp(std::span<const double> c, const Matrix& A,
                                    std::span<const double> b) {
  constexpr double kEps = 1e-11;
  const std::size_t n = c.size();
  const std::size_t p = A.rows();
  if (A.cols() != n && p > 0) throw std::invalid_argument("solve_lp: A has wrong column count");
  if (b.size() != p) throw std::invalid_argument("solve_lp: b has wrong length");

  // Variable ids: [0,n) originals, [n,n+p) slacks, n+p auxiliary.
  const std::size_t aux = n + p;
  detail::Dictionary dict(p, n + 1);
  for (std::size_t j = 0; j < n; ++j) dict.nonbasic()[j] = j;
  dict.nonbasic()[n] = aux;
  std::size_t most_negative = p;
  for (std::size_t r = 0; r < p; ++r) {
    dict.basic()[r] = n + r;
    for (std::size_t j = 0; j < n; ++j) dict.at(r, j) = A(r, j);
    dict.at(r, n) = -1.0;
    dict.rhs(r) = b[r];
    if (b[r] < 0.0 && (most_negative == p || b[r] < b[most_negative])) most_negative = r;
  }

  if (most_negative != p) {
    // Phase one: maximize -x_aux.
    dict.obj(n) = -1.0;
    dict.pivot(most_negative, n);
    dict.optimize(kEps);
    if (dict.obj_value() < -1e-9) {
      throw AssumptionViolation("infeasible LP: no mixture satisfies the constraints");
    }
    for (std::size_t r = 0; r < p; ++r) {
      if (dict.basic()[r] != aux) continue;
      for (std::size_t col = 0; col <= n; ++col) {
        if (std::abs(dict.at(r, col)) > kEps) {
          dict.pivot(r, col);
          break;
        }
      }
      break;
    }
  }

  // Drop the auxiliary column by zeroing it and excluding it from entering.
  // If it stayed basic its row is identically zero and it can be ignored.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t aux_col = kNone;
  for (std::size_t col = 0; col <= n; ++col) {
    if (dict.nonbasic()[col] == aux) aux_col = col;
  }
  if (aux_col != kNone) {
    for (std::size_t r = 0; r < p; ++r) dict.at(r, aux_col) = 0.0;
  }

  // Restore the true objective in terms of the current nonbasics.
  for (std::size_t col = 0; col <= n; ++col) dict.obj(col) = 0.0;
  dict.obj_value() = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    bool placed = false;
    for (std::size_t col = 0; col <= n && !placed; ++col) {
      if (dict.nonbasic()[col] == j) {
        dict.obj(col) += c[j];
        placed = true;
      }
    }
    for (std::size_t r = 0; r < p && !placed; ++r) {
      if (dict.basic()[r] == j) {
        dict.obj_value() += c[j] * dict.rhs(r);
        for (std::size_t col = 0; col <= n; ++col) dict.obj(col) -= c[j] * dict.at(r, col);
        placed = true;
      }
    }
  }
  if (aux_col != kNone) dict.obj(aux_col) = 0.0;

  if (!dict.optimize(kEps)) throw std::runtime_error("solve_lp: unbounded LP");

  LpSolution out{std::vector<double>(n, 0.0), 0.0};
  for (std::size_t r = 0; r < p; ++r) {
    if (dict.basic()[r] < n) out.x[dict.basic()[r]] = std::max(0.0, dict.rhs(r));
  }
  for (std::size_t j = 0; j < n; ++j) out.value += c[j] * out.x[j];
  return out;
}

// maximize c.x over the probability simplex subject to A x <= b.
inline LpSolution solve_lp(std::span<const double> c, const Matrix& A, std::span<const double> b) {
  const std::size_t n = c.size();
  if (n == 0) throw std::invalid_argument("solve_lp: empty variable set");
  if (A.rows() > 0 && A.cols() != n) throw std::invalid_argument("solve_lp: A has wrong column count");
  Matrix full(A.rows() + 2, n);
  std::vector<double> rhs(A.rows() + 2);
  for (std::size_t r = 0; r < A.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) full(r, j) = A(r, j);
    rhs[r] = b[r];
  }
  for (std::size_t j = 0; j < n; ++j) {
    full(A.rows(), j) = 1.0;
    full(A.rows() + 1, j) = -1.0;
  }
  rhs[A.rows()] = 1.0;
  rhs[A.rows() + 1] = -1.0;
  return solve_standard_lp(c, full, rhs);
}

}  // namespace bwlc

#pragma once

// Dense bounded-variable simplex with Bland's anti-cycling rule.
//
// Problems are small (at most a few thousand columns, a handful of rows in
// the common metronoid queries), so the whole tableau is kept explicitly.
// Nonbasic variables sit at either bound; upper bounds never become rows.

#include "metronoid/core.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace metronoid {

enum class LpSense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

/// objective . x subject to eq_matrix x = eq_rhs, le_matrix x <= le_rhs,
/// lower <= x <= upper. Empty bound vectors mean 0 <= x < +inf.
struct LpProblem {
  Vector objective;
  LpSense sense = LpSense::Maximize;
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix le_matrix;
  Vector le_rhs;
  Vector lower;
  Vector upper;

  Eigen::Index num_vars() const { return objective.size(); }
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  double max_residual = 0.0;
  int iterations = 0;
  /// Multipliers for eq rows then le rows: at an optimum of a problem with
  /// no finite upper bounds, objective == duals . (eq_rhs, le_rhs) plus the
  /// lower-bound contribution.
  Vector duals;

  bool optimal() const { return status == LpStatus::Optimal; }
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class BoundedSimplex {
 public:
  enum class State : unsigned char { Basic, AtLower, AtUpper, Excluded };

  // min cost.z  s.t.  a z = b,  0 <= z <= upper
  BoundedSimplex(Matrix a, Vector b, Vector cost, Vector upper)
      : rows_(a.rows()), structural_(a.cols()), cost_(std::move(cost)) {
    const Eigen::Index cols = structural_ + rows_;
    tableau_ = Matrix::Zero(rows_, cols);
    upper_ = Vector::Constant(cols, kInf);
    upper_.head(structural_) = upper;
    state_.assign(static_cast<std::size_t>(cols), State::AtLower);
    basis_.resize(static_cast<std::size_t>(rows_));
    values_ = Vector(rows_);
    row_factor_ = Vector::Ones(rows_);
    removed_.assign(static_cast<std::size_t>(rows_), false);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      double scale = a.row(i).cwiseAbs().maxCoeff();
      if (!(scale > 0.0)) scale = 1.0;
      double sign = b(i) < 0.0 ? -1.0 : 1.0;
      row_factor_(i) = sign / scale;
      tableau_.row(i).head(structural_) = a.row(i) * (sign / scale);
      values_(i) = b(i) * sign / scale;
      tableau_(i, structural_ + i) = 1.0;
      basis_[static_cast<std::size_t>(i)] = structural_ + i;
      state_[static_cast<std::size_t>(structural_ + i)] = State::Basic;
      rhs_scale_ = std::max(rhs_scale_, std::abs(values_(i)));
    }
  }

  LpStatus solve() {
    // Phase 1: minimize the sum of artificials.
    Vector phase1 = Vector::Zero(tableau_.cols());
    phase1.tail(rows_).setOnes();
    if (run(phase1) == LpStatus::Unbounded) {
      throw NumericalError("lp_solve: phase 1 reported unbounded (corrupt tableau)");
    }
    double infeasibility = 0.0;
    for (Eigen::Index i = 0; i < active_rows(); ++i) {
      if (is_artificial(basis_[static_cast<std::size_t>(i)])) infeasibility += std::abs(values_(i));
    }
    if (infeasibility > tol::kFeasibility * std::max(1.0, rhs_scale_)) return LpStatus::Infeasible;
    drive_out_artificials();
    Vector phase2 = Vector::Zero(tableau_.cols());
    phase2.head(structural_) = cost_;
    return run(phase2);
  }

  Vector solution() const {
    Vector z(structural_);
    for (Eigen::Index j = 0; j < structural_; ++j) {
      auto s = state_[static_cast<std::size_t>(j)];
      z(j) = s == State::AtUpper ? upper_(j) : 0.0;
    }
    for (Eigen::Index i = 0; i < active_rows(); ++i) {
      Eigen::Index j = basis_[static_cast<std::size_t>(i)];
      if (j < structural_) z(j) = std::clamp(values_(i), 0.0, upper_(j));
    }
    return z;
  }

  int iterations() const { return iterations_; }

  /// Row multipliers of the original (unscaled) rows for min cost.z.
  Vector duals() const {
    Vector y = Vector::Zero(rows_);
    if (reduced_.size() == 0) return y;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (removed_[static_cast<std::size_t>(i)]) continue;
      y(i) = -reduced_(structural_ + i) * row_factor_(i);
    }
    return y;
  }

 private:
  Eigen::Index active_rows() const { return static_cast<Eigen::Index>(basis_.size()); }
  bool is_artificial(Eigen::Index j) const { return j >= structural_; }

  LpStatus run(const Vector& cost) {
    const Eigen::Index cols = tableau_.cols();
    const Eigen::Index m = active_rows();
    Vector reduced = cost;
    for (Eigen::Index i = 0; i < m; ++i) {
      double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) reduced -= cb * tableau_.row(i).transpose();
    }
    const int cap = 200 * static_cast<int>(m + cols) + 1000;
    // Dantzig pricing; after a run of degenerate pivots switch to Bland's
    // rule until the objective moves again, which rules out cycling.
    int degenerate = 0;
    for (int guard = 0; guard < cap; ++guard) {
      const bool bland = degenerate > 50;
      Eigen::Index enter = -1;
      double dir = 0.0;
      double best = 0.0;
      for (Eigen::Index j = 0; j < cols; ++j) {
        auto s = state_[static_cast<std::size_t>(j)];
        double gain = 0.0;
        if (s == State::AtLower && reduced(j) < -tol::kOptimality) gain = -reduced(j);
        if (s == State::AtUpper && reduced(j) > tol::kOptimality) gain = reduced(j);
        if (gain > best) {
          best = gain;
          enter = j;
          dir = s == State::AtLower ? 1.0 : -1.0;
          if (bland) break;
        }
      }
      if (enter < 0) {
        reduced_ = reduced;
        return LpStatus::Optimal;
      }
      ++iterations_;

      double step = upper_(enter);
      Eigen::Index leave_row = -1;
      bool leave_to_upper = false;
      for (Eigen::Index i = 0; i < m; ++i) {
        double alpha = dir * tableau_(i, enter);
        double t;
        bool to_upper;
        if (alpha > kPivotTol) {
          t = std::max(0.0, values_(i)) / alpha;
          to_upper = false;
        } else if (alpha < -kPivotTol) {
          double ub = upper_(basis_[static_cast<std::size_t>(i)]);
          if (!std::isfinite(ub)) continue;
          t = std::max(0.0, ub - values_(i)) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        const double band = std::isfinite(step) ? 1e-14 * std::max(1.0, step) : 0.0;
        bool better = t < step - band;
        bool tie = !better && t <= step + band;
        if (better || (tie && leave_row >= 0 &&
                       basis_[static_cast<std::size_t>(i)] <
                           basis_[static_cast<std::size_t>(leave_row)])) {
          step = t;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      if (!std::isfinite(step)) return LpStatus::Unbounded;
      degenerate = step * best <= 1e-14 * std::max(1.0, rhs_scale_) ? degenerate + 1 : 0;

      values_ -= (dir * step) * tableau_.col(enter);
      auto& es = state_[static_cast<std::size_t>(enter)];
      if (leave_row < 0) {
        es = es == State::AtLower ? State::AtUpper : State::AtLower;
        continue;
      }
      double entering_value = (es == State::AtLower ? 0.0 : upper_(enter)) + dir * step;
      Eigen::Index leaving = basis_[static_cast<std::size_t>(leave_row)];
      state_[static_cast<std::size_t>(leaving)] = leave_to_upper ? State::AtUpper : State::AtLower;
      es = State::Basic;
      basis_[static_cast<std::size_t>(leave_row)] = enter;
      pivot(leave_row, enter);
      values_(leave_row) = entering_value;
      reduced -= reduced(enter) * tableau_.row(leave_row).transpose();
      reduced(enter) = 0.0;
    }
    throw NumericalError("lp_solve: iteration cap reached (possible cycling)");
  }

  void pivot(Eigen::Index r, Eigen::Index e) {
    double p = tableau_(r, e);
    if (std::abs(p) < kPivotTol) {
      std::ostringstream os;
      os << "lp_solve: numerically singular basis (pivot " << p << ")";
      throw NumericalError(os.str());
    }
    tableau_.row(r) /= p;
    for (Eigen::Index i = 0; i < active_rows(); ++i) {
      if (i == r) continue;
      double f = tableau_(i, e);
      if (f != 0.0) tableau_.row(i) -= f * tableau_.row(r);
    }
    double growth = tableau_.cwiseAbs().maxCoeff();
    if (growth > 1e14) {
      std::ostringstream os;
      os << "lp_solve: numerically singular basis (tableau growth " << growth
         << ", condition estimate exceeds 1e14)";
      throw NumericalError(os.str());
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < active_rows();) {
      Eigen::Index b = basis_[static_cast<std::size_t>(i)];
      if (!is_artificial(b)) {
        ++i;
        continue;
      }
      Eigen::Index best = -1;
      double best_abs = 1e-9;
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == State::Basic) continue;
        double a = std::abs(tableau_(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best < 0) {
        remove_row(i);
        continue;
      }
      double v = state_[static_cast<std::size_t>(best)] == State::AtUpper ? upper_(best) : 0.0;
      state_[static_cast<std::size_t>(b)] = State::AtLower;
      state_[static_cast<std::size_t>(best)] = State::Basic;
      basis_[static_cast<std::size_t>(i)] = best;
      pivot(i, best);
      values_(i) = v;
      ++i;
    }
    for (Eigen::Index j = structural_; j < tableau_.cols(); ++j) {
      if (state_[static_cast<std::size_t>(j)] != State::Basic) state_[static_cast<std::size_t>(j)] = State::Excluded;
    }
  }

  void remove_row(Eigen::Index r) {
    Eigen::Index last = active_rows() - 1;
    Eigen::Index art = basis_[static_cast<std::size_t>(r)];
    if (r != last) {
      tableau_.row(r) = tableau_.row(last);
      values_(r) = values_(last);
      basis_[static_cast<std::size_t>(r)] = basis_[static_cast<std::size_t>(last)];
    }
    basis_.pop_back();
    removed_[static_cast<std::size_t>(art - structural_)] = true;
    Matrix shrunk = tableau_.topRows(last);
    tableau_ = std::move(shrunk);
    Vector v = values_.head(last);
    values_ = std::move(v);
    state_[static_cast<std::size_t>(art)] = State::Excluded;
  }

  static constexpr double kPivotTol = 1e-11;

  Eigen::Index rows_;
  Eigen::Index structural_;
  Vector cost_;
  Matrix tableau_;
  Vector upper_;
  Vector values_;
  Vector row_factor_;
  Vector reduced_;
  std::vector<bool> removed_;
  std::vector<State> state_;
  std::vector<Eigen::Index> basis_;
  double rhs_scale_ = 0.0;
  int iterations_ = 0;
};

}  // namespace detail

inline LpResult lp_solve(const LpProblem& problem) {
  using detail::kInf;
  const Eigen::Index n = problem.num_vars();
  if (n == 0) throw DimensionError("lp_solve: empty objective");
  Vector lower = problem.lower.size() == 0 ? Vector::Zero(n) : problem.lower;
  Vector upper = problem.upper.size() == 0 ? Vector::Constant(n, kInf) : problem.upper;
  const Eigen::Index meq = problem.eq_rhs.size();
  const Eigen::Index mle = problem.le_rhs.size();
  if (lower.size() != n || upper.size() != n ||
      (meq > 0 && (problem.eq_matrix.rows() != meq || problem.eq_matrix.cols() != n)) ||
      (mle > 0 && (problem.le_matrix.rows() != mle || problem.le_matrix.cols() != n))) {
    throw DimensionError("lp_solve: inconsistent problem dimensions");
  }

  LpResult result;
  // Map each original variable to internal nonnegative columns:
  // x_j = offset_j + sum_k coef_k z_k.
  struct Term {
    Eigen::Index col;
    double coef;
  };
  std::vector<std::vector<Term>> terms(static_cast<std::size_t>(n));
  Vector offset = Vector::Zero(n);
  std::vector<double> zupper;
  for (Eigen::Index j = 0; j < n; ++j) {
    double l = lower(j), u = upper(j);
    if (std::isfinite(l) && std::isfinite(u) && u < l - tol::kFeasibility) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    auto& t = terms[static_cast<std::size_t>(j)];
    auto col = static_cast<Eigen::Index>(zupper.size());
    if (std::isfinite(l)) {
      offset(j) = l;
      t.push_back({col, 1.0});
      zupper.push_back(std::isfinite(u) ? std::max(0.0, u - l) : kInf);
    } else if (std::isfinite(u)) {
      offset(j) = u;
      t.push_back({col, -1.0});
      zupper.push_back(kInf);
    } else {
      t.push_back({col, 1.0});
      t.push_back({col + 1, -1.0});
      zupper.push_back(kInf);
      zupper.push_back(kInf);
    }
  }
  const auto nz = static_cast<Eigen::Index>(zupper.size());
  const Eigen::Index cols = nz + mle;
  const Eigen::Index rows = meq + mle;

  Matrix a = Matrix::Zero(rows, cols);
  Vector b(rows);
  Vector cost = Vector::Zero(cols);
  Vector ub = Vector::Constant(cols, kInf);
  for (Eigen::Index k = 0; k < nz; ++k) ub(k) = zupper[static_cast<std::size_t>(k)];
  const double sign = problem.sense == LpSense::Maximize ? -1.0 : 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (const auto& t : terms[static_cast<std::size_t>(j)]) {
      cost(t.col) += sign * problem.objective(j) * t.coef;
      for (Eigen::Index i = 0; i < meq; ++i) a(i, t.col) += problem.eq_matrix(i, j) * t.coef;
      for (Eigen::Index i = 0; i < mle; ++i) a(meq + i, t.col) += problem.le_matrix(i, j) * t.coef;
    }
  }
  for (Eigen::Index i = 0; i < meq; ++i) b(i) = problem.eq_rhs(i) - problem.eq_matrix.row(i).dot(offset);
  for (Eigen::Index i = 0; i < mle; ++i) {
    b(meq + i) = problem.le_rhs(i) - problem.le_matrix.row(i).dot(offset);
    a(meq + i, nz + i) = 1.0;
  }

  Vector z;
  if (rows == 0) {
    // Only bounds: each column independently sits at its better bound.
    z = Vector::Zero(cols);
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (cost(k) < 0.0) {
        if (!std::isfinite(ub(k))) {
          result.status = LpStatus::Unbounded;
          return result;
        }
        z(k) = ub(k);
      }
    }
    result.status = LpStatus::Optimal;
  } else {
    // Power-of-two equilibration (exact in floating point): columns, then
    // rows, to unit max magnitude, so the fixed simplex tolerances are
    // relative to the data.
    auto pow2 = [](double m) { return m > 0.0 && std::isfinite(m) ? std::ldexp(1.0, -std::ilogb(m)) : 1.0; };
    Vector colscale(cols), rowscale(rows);
    for (Eigen::Index k = 0; k < cols; ++k) {
      colscale(k) = pow2(a.col(k).cwiseAbs().maxCoeff());
      a.col(k) *= colscale(k);
      cost(k) *= colscale(k);
      ub(k) /= colscale(k);
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      rowscale(i) = pow2(a.row(i).cwiseAbs().maxCoeff());
      a.row(i) *= rowscale(i);
      b(i) *= rowscale(i);
    }
    detail::BoundedSimplex simplex(a, b, cost, ub);
    result.status = simplex.solve();
    result.iterations = simplex.iterations();
    if (result.status != LpStatus::Optimal) return result;
    z = simplex.solution().cwiseProduct(colscale);
    Vector y = simplex.duals().cwiseProduct(rowscale);
    result.duals = problem.sense == LpSense::Maximize ? Vector(-y) : y;
  }

  Vector x = offset;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (const auto& t : terms[static_cast<std::size_t>(j)]) x(j) += t.coef * z(t.col);
  }
  double scale = 1.0;
  double residual = 0.0;
  for (Eigen::Index i = 0; i < meq; ++i) {
    scale = std::max(scale, std::abs(problem.eq_rhs(i)));
    residual = std::max(residual, std::abs(problem.eq_matrix.row(i).dot(x) - problem.eq_rhs(i)));
  }
  for (Eigen::Index i = 0; i < mle; ++i) {
    scale = std::max(scale, std::abs(problem.le_rhs(i)));
    residual = std::max(residual, problem.le_matrix.row(i).dot(x) - problem.le_rhs(i));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    residual = std::max(residual, lower(j) - x(j));
    residual = std::max(residual, x(j) - upper(j));
  }
  result.x = std::move(x);
  result.objective = problem.objective.dot(result.x);
  result.max_residual = residual;
  if (residual > tol::kFeasibility * scale) {
    std::ostringstream os;
    os << "lp_solve: solution residual " << residual << " exceeds feasibility tolerance";
    throw NumericalError(os.str());
  }
  return result;
}

}  // namespace metronoid

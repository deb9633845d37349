#pragma once

#include <persuasion/error.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace persuasion {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

inline const char* to_string(LpStatus status)
{
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericalFailure: return "numerical failure";
  }
  return "unknown";
}

template <typename Scalar>
struct BasicConstraint {
  Eigen::SparseVector<Scalar> coeffs;
  Relation relation = Relation::LessEqual;
  Scalar rhs = 0;
};

/// maximize objective . x  subject to  constraints,  lower <= x <= upper.
/// Lower bounds default to 0 and upper bounds to +infinity; either may be
/// infinite.
template <typename Scalar>
class BasicLinearProgram {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Constraint = BasicConstraint<Scalar>;
  using Term = std::pair<Eigen::Index, Scalar>;

  explicit BasicLinearProgram(Eigen::Index variables)
    : objective(Vector::Zero(variables)),
      lower(Vector::Zero(variables)),
      upper(Vector::Constant(variables, std::numeric_limits<Scalar>::infinity()))
  {}

  Eigen::Index variables() const { return objective.size(); }
  Eigen::Index rows() const { return static_cast<Eigen::Index>(constraints.size()); }

  Eigen::Index add_constraint(Eigen::SparseVector<Scalar> coeffs, Relation relation, Scalar rhs)
  {
    constraints.push_back(Constraint{std::move(coeffs), relation, rhs});
    return rows() - 1;
  }

  /// Duplicate indices in terms are summed.
  Eigen::Index add_constraint(const std::vector<Term>& terms, Relation relation, Scalar rhs)
  {
    Eigen::SparseVector<Scalar> coeffs(variables());
    for (const auto& [index, value] : terms)
      coeffs.coeffRef(index) += value;
    return add_constraint(std::move(coeffs), relation, rhs);
  }

  void set_bounds(Eigen::Index j, Scalar lo, Scalar hi)
  {
    lower(j) = lo;
    upper(j) = hi;
  }

  Vector objective;
  std::vector<Constraint> constraints;
  Vector lower;
  Vector upper;
};

template <typename Scalar>
struct BasicLpOutcome {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::NumericalFailure;
  Scalar value = 0;
  Vector point;
  /// Row duals when optimal; a Farkas-style phase-one multiplier vector when
  /// infeasible; empty otherwise.
  Vector duals;
  /// Improving direction when unbounded.
  Vector ray;
  Scalar primal_residual = 0;
  Scalar duality_gap = 0;
  Eigen::Index iterations = 0;
  std::string message;

  bool optimal() const { return status == LpStatus::Optimal; }
};

struct SimplexOptions {
  double pivot_tolerance = 1e-10;
  double feasibility_tolerance = 1e-8;
  double optimality_tolerance = 1e-9;
  double gap_tolerance = 1e-7;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_switch = 50;
  Eigen::Index max_iterations = 0; // 0 selects a size-based limit
};

/// Seam for substituting another LP backend behind the same contract.
template <typename Scalar>
class BasicLpSolver {
public:
  virtual ~BasicLpSolver() = default;
  virtual BasicLpOutcome<Scalar> solve(const BasicLinearProgram<Scalar>& lp) const = 0;
};

namespace detail {

/// Bounded-variable primal simplex on a dense row-major tableau.
template <typename Scalar>
class SimplexTableau {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Index = Eigen::Index;

  enum class Outcome { Optimal, Unbounded, IterationLimit };

  SimplexTableau(const BasicLinearProgram<Scalar>& lp, const SimplexOptions& options)
    : lp_(lp), opt_(options)
  {}

  BasicLpOutcome<Scalar> run()
  {
    BasicLpOutcome<Scalar> out;
    if (!standardize(out))
      return out;

    // Phase one: drive the artificials to zero.
    Vector phase1_cost = Vector::Zero(cols_);
    for (Index i = 0; i < rows_; ++i)
      if (upper_(art_begin_ + i) > 0)
        phase1_cost(art_begin_ + i) = -1;
    set_costs(phase1_cost);
    Outcome phase1 = iterate();
    out.iterations = iterations_;
    if (phase1 == Outcome::IterationLimit) {
      out.status = LpStatus::NumericalFailure;
      out.message = "iteration limit in phase one";
      return out;
    }
    Scalar infeasibility = 0;
    for (Index i = 0; i < rows_; ++i)
      if (basis_(i) >= art_begin_)
        infeasibility += std::max<Scalar>(beta_(i), 0);
    const Scalar scale = std::max<Scalar>(1, rhs_scale_);
    if (infeasibility > opt_.feasibility_tolerance * scale) {
      out.status = LpStatus::Infeasible;
      out.message = "phase one ended with positive infeasibility";
      out.duals = row_duals(phase1_cost);
      return out;
    }
    expel_artificials();

    // Phase two.
    set_costs(cost_);
    Outcome phase2 = iterate();
    out.iterations = iterations_;
    if (phase2 == Outcome::IterationLimit) {
      out.status = LpStatus::NumericalFailure;
      out.message = "iteration limit in phase two";
      return out;
    }
    if (phase2 == Outcome::Unbounded) {
      out.status = LpStatus::Unbounded;
      out.message = "objective is unbounded above";
      out.ray = map_direction(ray_);
      return out;
    }
    return finish(out);
  }

private:
  enum class Map { Shift, Negate, Split };
  struct VarMap {
    Map kind;
    Index column;
    Scalar offset;
  };

  bool standardize(BasicLpOutcome<Scalar>& out)
  {
    const Index n = lp_.variables();
    if (lp_.lower.size() != n || lp_.upper.size() != n) {
      out.status = LpStatus::NumericalFailure;
      out.message = "bound vectors do not match the variable count";
      return false;
    }
    Index structural = 0;
    maps_.reserve(static_cast<std::size_t>(n));
    std::vector<Scalar> col_upper;
    constant_ = 0;
    for (Index j = 0; j < n; ++j) {
      const Scalar lo = lp_.lower(j);
      const Scalar hi = lp_.upper(j);
      if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == inf() || hi == -inf()) {
        out.status = LpStatus::Infeasible;
        out.message = "variable " + std::to_string(j) + " has empty bounds";
        return false;
      }
      if (std::isfinite(lo)) {
        maps_.push_back({Map::Shift, structural++, lo});
        col_upper.push_back(std::isfinite(hi) ? hi - lo : inf());
        constant_ += lp_.objective(j) * lo;
      } else if (std::isfinite(hi)) {
        maps_.push_back({Map::Negate, structural++, hi});
        col_upper.push_back(inf());
        constant_ += lp_.objective(j) * hi;
      } else {
        maps_.push_back({Map::Split, structural, 0});
        structural += 2;
        col_upper.push_back(inf());
        col_upper.push_back(inf());
      }
    }

    rows_ = lp_.rows();
    Index slacks = 0;
    for (const auto& c : lp_.constraints) {
      if (c.coeffs.size() != n) {
        out.status = LpStatus::NumericalFailure;
        out.message = "constraint dimension differs from the variable count";
        return false;
      }
      if (!std::isfinite(c.rhs)) {
        out.status = LpStatus::NumericalFailure;
        out.message = "constraint right-hand side is not finite";
        return false;
      }
      if (c.relation != Relation::Equal)
        ++slacks;
    }
    slack_begin_ = structural;
    art_begin_ = structural + slacks;
    cols_ = art_begin_ + rows_;

    a0_ = RowMatrix::Zero(rows_, cols_);
    b_ = Vector::Zero(rows_);
    row_sign_ = Vector::Ones(rows_);
    upper_ = Vector::Zero(cols_);
    for (Index k = 0; k < structural; ++k)
      upper_(k) = col_upper[static_cast<std::size_t>(k)];
    for (Index k = slack_begin_; k < art_begin_; ++k)
      upper_(k) = inf();

    cost_ = Vector::Zero(cols_);
    for (Index j = 0; j < n; ++j) {
      const VarMap& m = maps_[static_cast<std::size_t>(j)];
      switch (m.kind) {
        case Map::Shift: cost_(m.column) = lp_.objective(j); break;
        case Map::Negate: cost_(m.column) = -lp_.objective(j); break;
        case Map::Split:
          cost_(m.column) = lp_.objective(j);
          cost_(m.column + 1) = -lp_.objective(j);
          break;
      }
    }

    std::vector<Index> slack_of_row(static_cast<std::size_t>(rows_), -1);
    Index slack = slack_begin_;
    rhs_scale_ = 0;
    for (Index i = 0; i < rows_; ++i) {
      const auto& c = lp_.constraints[static_cast<std::size_t>(i)];
      Scalar rhs = c.rhs;
      for (typename Eigen::SparseVector<Scalar>::InnerIterator it(c.coeffs); it; ++it) {
        const VarMap& m = maps_[static_cast<std::size_t>(it.index())];
        const Scalar a = it.value();
        switch (m.kind) {
          case Map::Shift:
            a0_(i, m.column) += a;
            rhs -= a * m.offset;
            break;
          case Map::Negate:
            a0_(i, m.column) -= a;
            rhs -= a * m.offset;
            break;
          case Map::Split:
            a0_(i, m.column) += a;
            a0_(i, m.column + 1) -= a;
            break;
        }
      }
      if (c.relation == Relation::LessEqual) {
        a0_(i, slack) = 1;
        slack_of_row[static_cast<std::size_t>(i)] = slack++;
      } else if (c.relation == Relation::GreaterEqual) {
        a0_(i, slack) = -1;
        slack_of_row[static_cast<std::size_t>(i)] = slack++;
      }
      if (rhs < 0) {
        a0_.row(i) *= -1;
        rhs = -rhs;
        row_sign_(i) = -1;
      }
      a0_(i, art_begin_ + i) = 1;
      b_(i) = rhs;
      rhs_scale_ = std::max(rhs_scale_, rhs);
    }

    // Initial basis: a slack with coefficient +1 where available, otherwise
    // the row's artificial. Unused artificials are fixed at zero.
    tableau_ = a0_;
    beta_ = b_;
    basis_.resize(rows_);
    at_upper_.assign(static_cast<std::size_t>(cols_), false);
    for (Index i = 0; i < rows_; ++i) {
      const Index s = slack_of_row[static_cast<std::size_t>(i)];
      if (s >= 0 && a0_(i, s) > 0) {
        basis_(i) = s;
        upper_(art_begin_ + i) = 0;
      } else {
        basis_(i) = art_begin_ + i;
        upper_(art_begin_ + i) = inf();
      }
    }
    // The slack-basic rows already have identity columns; the artificial
    // columns of those rows are the same unit vectors, so no elimination is
    // needed to reach canonical form.
    in_basis_.assign(static_cast<std::size_t>(cols_), false);
    for (Index i = 0; i < rows_; ++i)
      in_basis_[static_cast<std::size_t>(basis_(i))] = true;

    max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations
                                              : 50 * (rows_ + cols_) + 10000;
    return true;
  }

  void set_costs(const Vector& c)
  {
    active_cost_ = c;
    reduced_ = c;
    for (Index i = 0; i < rows_; ++i) {
      const Scalar cb = c(basis_(i));
      if (cb != 0)
        reduced_ -= cb * tableau_.row(i).transpose();
    }
  }

  bool fixed(Index j) const { return upper_(j) <= 0; }

  Index choose_entering(bool bland) const
  {
    Index best = -1;
    Scalar best_score = 0;
    for (Index j = 0; j < cols_; ++j) {
      if (in_basis_[static_cast<std::size_t>(j)] || fixed(j))
        continue;
      const Scalar d = reduced_(j);
      const bool up = at_upper_[static_cast<std::size_t>(j)];
      const Scalar score = up ? -d : d;
      if (score <= opt_.optimality_tolerance)
        continue;
      if (bland)
        return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  Outcome iterate()
  {
    int degenerate_run = 0;
    while (true) {
      if (iterations_ >= max_iterations_)
        return Outcome::IterationLimit;
      const bool bland = degenerate_run >= opt_.degenerate_switch;
      const Index q = choose_entering(bland);
      if (q < 0)
        return Outcome::Optimal;
      ++iterations_;

      const bool from_upper = at_upper_[static_cast<std::size_t>(q)];
      const Scalar dir = from_upper ? -1 : 1;

      // Ratio test. Basic variable i moves at rate -dir * T(i, q).
      Scalar step = upper_(q);
      Index leave = -1;
      Scalar leave_pivot = 0;
      for (Index i = 0; i < rows_; ++i) {
        const Scalar t = tableau_(i, q);
        if (std::abs(t) <= opt_.pivot_tolerance)
          continue;
        const Scalar rate = -dir * t;
        const Index bvar = basis_(i);
        Scalar limit;
        if (rate < 0) {
          limit = std::max<Scalar>(beta_(i), 0) / -rate;
        } else if (std::isfinite(upper_(bvar))) {
          limit = std::max<Scalar>(upper_(bvar) - beta_(i), 0) / rate;
        } else {
          continue;
        }
        bool take = false;
        if (leave < 0 || limit < step - 1e-12) {
          take = limit <= step;
        } else if (limit <= step + 1e-12) {
          take = bland ? (bvar < basis_(leave)) : (std::abs(t) > std::abs(leave_pivot));
        }
        if (take) {
          step = std::min(step, limit);
          leave = i;
          leave_pivot = t;
        }
      }

      if (leave < 0 && !std::isfinite(step)) {
        ray_ = Vector::Zero(cols_);
        ray_(q) = dir;
        for (Index i = 0; i < rows_; ++i)
          ray_(basis_(i)) = -dir * tableau_(i, q);
        return Outcome::Unbounded;
      }

      if (step <= 1e-12)
        ++degenerate_run;
      else
        degenerate_run = 0;

      for (Index i = 0; i < rows_; ++i)
        beta_(i) += -dir * tableau_(i, q) * step;

      if (leave < 0) {
        // Bound flip: the entering variable reaches its opposite bound first.
        at_upper_[static_cast<std::size_t>(q)] = !from_upper;
        continue;
      }

      const Index out_var = basis_(leave);
      const Scalar rate = -dir * tableau_(leave, q);
      const Scalar entering_value = (from_upper ? upper_(q) : Scalar(0)) + dir * step;
      at_upper_[static_cast<std::size_t>(out_var)] = rate > 0;
      in_basis_[static_cast<std::size_t>(out_var)] = false;
      pivot(leave, q);
      basis_(leave) = q;
      in_basis_[static_cast<std::size_t>(q)] = true;
      at_upper_[static_cast<std::size_t>(q)] = false;
      beta_(leave) = entering_value;
    }
  }

  void pivot(Index r, Index q)
  {
    const Scalar p = tableau_(r, q);
    tableau_.row(r) /= p;
    for (Index i = 0; i < rows_; ++i) {
      if (i == r)
        continue;
      const Scalar f = tableau_(i, q);
      if (f != 0)
        tableau_.row(i) -= f * tableau_.row(r);
    }
    const Scalar f = reduced_(q);
    if (f != 0)
      reduced_ -= f * tableau_.row(r).transpose();
  }

  void expel_artificials()
  {
    for (Index i = 0; i < rows_; ++i) {
      if (basis_(i) < art_begin_)
        continue;
      Index best = -1;
      Scalar best_abs = opt_.pivot_tolerance;
      for (Index j = 0; j < art_begin_; ++j) {
        if (in_basis_[static_cast<std::size_t>(j)] || fixed(j))
          continue;
        const Scalar a = std::abs(tableau_(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best < 0)
        continue; // redundant row; the artificial stays basic at zero
      const Index out_var = basis_(i);
      const Scalar value = at_upper_[static_cast<std::size_t>(best)] ? upper_(best) : Scalar(0);
      // Degenerate pivot: the entering variable keeps its current value.
      const Scalar shift = beta_(i);
      in_basis_[static_cast<std::size_t>(out_var)] = false;
      at_upper_[static_cast<std::size_t>(out_var)] = false;
      pivot(i, best);
      basis_(i) = best;
      in_basis_[static_cast<std::size_t>(best)] = true;
      at_upper_[static_cast<std::size_t>(best)] = false;
      // beta of other rows is unchanged up to the artificial's residual.
      beta_(i) = value;
      (void)shift;
    }
    for (Index i = 0; i < rows_; ++i)
      upper_(art_begin_ + i) = 0;
    recompute_basic_values();
  }

  /// Recompute basic values from the original columns:
  /// B x_B = b - sum over nonbasic-at-upper columns of A_j u_j.
  void recompute_basic_values()
  {
    if (rows_ == 0)
      return;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis(rows_, rows_);
    for (Index i = 0; i < rows_; ++i)
      basis.col(i) = a0_.col(basis_(i));
    Vector rhs = b_;
    for (Index j = 0; j < cols_; ++j)
      if (!in_basis_[static_cast<std::size_t>(j)] && at_upper_[static_cast<std::size_t>(j)])
        rhs -= a0_.col(j) * upper_(j);
    lu_ = Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(basis);
    beta_ = lu_.solve(rhs);
  }

  Vector row_duals(const Vector& cost) const
  {
    if (rows_ == 0)
      return Vector();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis(rows_, rows_);
    Vector cb(rows_);
    for (Index i = 0; i < rows_; ++i) {
      basis.col(i) = a0_.col(basis_(i));
      cb(i) = cost(basis_(i));
    }
    Vector y = basis.transpose().partialPivLu().solve(cb);
    return y.cwiseProduct(row_sign_);
  }

  Vector map_direction(const Vector& dir) const
  {
    Vector out = Vector::Zero(lp_.variables());
    for (Index j = 0; j < lp_.variables(); ++j) {
      const VarMap& m = maps_[static_cast<std::size_t>(j)];
      switch (m.kind) {
        case Map::Shift: out(j) = dir(m.column); break;
        case Map::Negate: out(j) = -dir(m.column); break;
        case Map::Split: out(j) = dir(m.column) - dir(m.column + 1); break;
      }
    }
    return out;
  }

  BasicLpOutcome<Scalar> finish(BasicLpOutcome<Scalar>& out)
  {
    recompute_basic_values();
    Vector x = Vector::Zero(cols_);
    for (Index j = 0; j < cols_; ++j)
      if (!in_basis_[static_cast<std::size_t>(j)] && at_upper_[static_cast<std::size_t>(j)])
        x(j) = upper_(j);
    for (Index i = 0; i < rows_; ++i)
      x(basis_(i)) = beta_(i);

    // Clip tiny bound violations introduced by round-off.
    Scalar bound_violation = 0;
    for (Index j = 0; j < cols_; ++j) {
      if (x(j) < 0) {
        bound_violation = std::max(bound_violation, -x(j));
        x(j) = 0;
      } else if (x(j) > upper_(j)) {
        bound_violation = std::max(bound_violation, x(j) - upper_(j));
        x(j) = upper_(j);
      }
    }

    Vector point(lp_.variables());
    for (Index j = 0; j < lp_.variables(); ++j) {
      const VarMap& m = maps_[static_cast<std::size_t>(j)];
      switch (m.kind) {
        case Map::Shift: point(j) = m.offset + x(m.column); break;
        case Map::Negate: point(j) = m.offset - x(m.column); break;
        case Map::Split: point(j) = x(m.column) - x(m.column + 1); break;
      }
    }

    Scalar residual = bound_violation;
    for (const auto& c : lp_.constraints) {
      const Scalar lhs = c.coeffs.dot(point);
      Scalar violation = 0;
      switch (c.relation) {
        case Relation::LessEqual: violation = lhs - c.rhs; break;
        case Relation::GreaterEqual: violation = c.rhs - lhs; break;
        case Relation::Equal: violation = std::abs(lhs - c.rhs); break;
      }
      residual = std::max(residual, violation);
    }

    out.point = point;
    out.value = lp_.objective.dot(point);
    out.primal_residual = residual;

    // Duals and the dual bound y.b + sum over bounded columns of u_j max(d_j, 0).
    Vector y_std = Vector::Zero(rows_);
    if (rows_ > 0) {
      Vector cb(rows_);
      for (Index i = 0; i < rows_; ++i)
        cb(i) = cost_(basis_(i));
      y_std = lu_.transpose().solve(cb);
    }
    Vector d = cost_ - a0_.transpose() * y_std;
    Scalar dual_value = constant_ + y_std.dot(b_);
    Scalar dual_infeasibility = 0;
    for (Index j = 0; j < cols_; ++j) {
      if (d(j) <= 0)
        continue;
      if (std::isfinite(upper_(j)))
        dual_value += upper_(j) * d(j);
      else
        dual_infeasibility = std::max(dual_infeasibility, d(j));
    }
    out.duals = y_std.cwiseProduct(row_sign_);
    out.duality_gap = std::abs(dual_value - out.value);

    const Scalar scale = 1 + std::abs(out.value);
    if (residual > opt_.feasibility_tolerance) {
      out.status = LpStatus::NumericalFailure;
      out.message = "primal residual " + std::to_string(static_cast<double>(residual)) +
                    " exceeds tolerance";
    } else if (dual_infeasibility > 1e-6 || out.duality_gap > opt_.gap_tolerance * scale) {
      out.status = LpStatus::NumericalFailure;
      out.message = "duality gap " + std::to_string(static_cast<double>(out.duality_gap)) +
                    " exceeds tolerance";
    } else {
      out.status = LpStatus::Optimal;
    }
    return out;
  }

  static Scalar inf() { return std::numeric_limits<Scalar>::infinity(); }

  const BasicLinearProgram<Scalar>& lp_;
  SimplexOptions opt_;

  std::vector<VarMap> maps_;
  Scalar constant_ = 0;
  Index rows_ = 0;
  Index cols_ = 0;
  Index slack_begin_ = 0;
  Index art_begin_ = 0;
  Scalar rhs_scale_ = 0;

  RowMatrix a0_;
  RowMatrix tableau_;
  Vector b_;
  Vector row_sign_;
  Vector upper_;
  Vector cost_;
  Vector active_cost_;
  Vector reduced_;
  Vector beta_;
  Vector ray_;
  Eigen::Matrix<Index, Eigen::Dynamic, 1> basis_;
  std::vector<bool> in_basis_;
  std::vector<bool> at_upper_;
  Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu_;
  Index iterations_ = 0;
  Index max_iterations_ = 0;
};

} // namespace detail

/// Dense two-phase primal simplex with native bounds. Dantzig pricing,
/// falling back to Bland's rule after a run of degenerate pivots.
template <typename Scalar>
class BasicDenseSimplex : public BasicLpSolver<Scalar> {
public:
  BasicDenseSimplex() = default;
  explicit BasicDenseSimplex(SimplexOptions options) : options_(options) {}

  BasicLpOutcome<Scalar> solve(const BasicLinearProgram<Scalar>& lp) const override
  {
    return detail::SimplexTableau<Scalar>(lp, options_).run();
  }

  const SimplexOptions& options() const { return options_; }

private:
  SimplexOptions options_;
};

using LinearProgram = BasicLinearProgram<double>;
using LpOutcome = BasicLpOutcome<double>;
using LpSolver = BasicLpSolver<double>;
using DenseSimplex = BasicDenseSimplex<double>;

inline const LpSolver& default_lp_solver()
{
  static const DenseSimplex solver;
  return solver;
}

template <typename Scalar>
BasicLpOutcome<Scalar> solve(const BasicLinearProgram<Scalar>& lp)
{
  return BasicDenseSimplex<Scalar>().solve(lp);
}

/// Solve and require an optimal outcome; any other status becomes an Error.
inline LpOutcome solve_or_throw(const LinearProgram& lp, const LpSolver& solver,
                                const std::string& what)
{
  LpOutcome out = solver.solve(lp);
  if (out.status == LpStatus::Optimal)
    return out;
  const ErrorKind kind =
    out.status == LpStatus::Infeasible ? ErrorKind::Infeasible : ErrorKind::NumericalFailure;
  throw Error(kind, what + ": LP " + to_string(out.status) +
                      (out.message.empty() ? "" : " (" + out.message + ")"));
}

} // namespace persuasion

#include <persuasion/khintchine.hpp>

#include <cmath>
#include <string>

namespace persuasion {

namespace {

constexpr double kSignatureTolerance = 1e-9;

inline bool plus_type(Index mask, Index i, Index n)
{
  return ((mask >> (n - 1 - i)) & 1) != 0;
}

void check_length(Index n, Index cap)
{
  if (n < 1)
    throw Error(ErrorKind::InvalidArgument, "coefficient vector is empty");
  if (n > cap)
    throw Error(ErrorKind::TooLarge, "n = " + std::to_string(n) + " exceeds the cap of " +
                                       std::to_string(cap));
}

} // namespace

double khintchine_constant(const Vector& a)
{
  const Index n = a.size();
  check_length(n, kMaxKhintchineBrute);
  const Index count = Index{1} << n;
  double total = 0.0;
  for (Index mask = 0; mask < count; ++mask) {
    double dot = 0.0;
    for (Index i = 0; i < n; ++i)
      dot += plus_type(mask, i, n) ? a(i) : -a(i);
    total += std::abs(dot);
  }
  return total / static_cast<double>(count);
}

KhintchineLpSolution solve_khintchine_lp(const Vector& a, const LpSolver& solver)
{
  const Index n = a.size();
  check_length(n, kMaxKhintchineLp);
  const Index count = Index{1} << n;
  const double w = 1.0 / static_cast<double>(count);

  // Columns: M+ (i, t) at 2i + t, M- (i, t) at 2n + 2i + t, then phi+(theta).
  // phi-(theta) = 1 - phi+(theta) is substituted out.
  const Index plus0 = 0;
  const Index minus0 = 2 * n;
  const Index phi0 = 4 * n;
  LinearProgram lp(phi0 + count);
  for (Index mask = 0; mask < count; ++mask)
    lp.upper(phi0 + mask) = 1.0;
  for (Index i = 0; i < n; ++i) {
    lp.objective(plus0 + 2 * i + 1) = a(i);
    lp.objective(plus0 + 2 * i) = -a(i);
    lp.objective(minus0 + 2 * i + 1) = -a(i);
    lp.objective(minus0 + 2 * i) = a(i);
  }
  for (Index i = 0; i < n; ++i) {
    for (Index t = 0; t < 2; ++t) {
      // M+(i,t) = sum_theta w phi+(theta) [theta_i = t]
      // M-(i,t) = sum_theta w (1 - phi+(theta)) [theta_i = t]
      std::vector<LinearProgram::Term> plus_row{{plus0 + 2 * i + t, 1.0}};
      std::vector<LinearProgram::Term> minus_row{{minus0 + 2 * i + t, 1.0}};
      for (Index mask = 0; mask < count; ++mask) {
        if (plus_type(mask, i, n) != (t == 1))
          continue;
        plus_row.emplace_back(phi0 + mask, -w);
        minus_row.emplace_back(phi0 + mask, w);
      }
      lp.add_constraint(plus_row, Relation::Equal, 0.0);
      lp.add_constraint(minus_row, Relation::Equal, 0.5);
    }
    lp.add_constraint({{plus0 + 2 * i, 1.0}, {plus0 + 2 * i + 1, 1.0}}, Relation::Equal, 0.5);
  }

  const LpOutcome out = solve_or_throw(lp, solver, "Khintchine LP");
  KhintchineLpSolution sol;
  sol.value = out.value;
  sol.phi_plus = out.point.tail(count).cwiseMax(0.0).cwiseMin(1.0);
  sol.witness.plus.resize(n, 2);
  sol.witness.minus.resize(n, 2);
  for (Index i = 0; i < n; ++i)
    for (Index t = 0; t < 2; ++t) {
      sol.witness.plus(i, t) = out.point(plus0 + 2 * i + t);
      sol.witness.minus(i, t) = out.point(minus0 + 2 * i + t);
    }
  return sol;
}

TwoSignalSignature two_signal_signature(const Vector& phi_plus, Index n)
{
  check_length(n, kMaxKhintchineBrute);
  const Index count = Index{1} << n;
  if (phi_plus.size() != count)
    throw Error(ErrorKind::DimensionMismatch, "phi_plus has length " +
                                                std::to_string(phi_plus.size()) + ", expected " +
                                                std::to_string(count));
  const double w = 1.0 / static_cast<double>(count);
  TwoSignalSignature sig{Matrix::Zero(n, 2), Matrix::Zero(n, 2)};
  for (Index mask = 0; mask < count; ++mask)
    for (Index i = 0; i < n; ++i) {
      const Index t = plus_type(mask, i, n) ? 1 : 0;
      sig.plus(i, t) += w * phi_plus(mask);
      sig.minus(i, t) += w * (1.0 - phi_plus(mask));
    }
  return sig;
}

bool membership_check(const TwoSignalSignature& m, Index n, const LpSolver& solver)
{
  check_length(n, kMaxKhintchineLp);
  if (m.plus.rows() != n || m.plus.cols() != 2 || m.minus.rows() != n || m.minus.cols() != 2)
    throw Error(ErrorKind::DimensionMismatch, "signature matrices must be " + std::to_string(n) +
                                                " x 2");
  if (m.plus.minCoeff() < -kSignatureTolerance || m.minus.minCoeff() < -kSignatureTolerance)
    return false;
  if (((m.plus + m.minus).array() - 0.5).abs().maxCoeff() > kSignatureTolerance)
    return false;
  if ((m.plus.rowwise().sum().array() - 0.5).abs().maxCoeff() > kSignatureTolerance)
    return false;

  const Index count = Index{1} << n;
  const double w = 1.0 / static_cast<double>(count);
  LinearProgram lp(count);
  for (Index mask = 0; mask < count; ++mask)
    lp.upper(mask) = 1.0;
  for (Index i = 0; i < n; ++i)
    for (Index t = 0; t < 2; ++t) {
      std::vector<LinearProgram::Term> row;
      for (Index mask = 0; mask < count; ++mask)
        if (plus_type(mask, i, n) == (t == 1))
          row.emplace_back(mask, w);
      lp.add_constraint(row, Relation::Equal, m.plus(i, t));
    }
  const LpOutcome out = solver.solve(lp);
  if (out.status == LpStatus::NumericalFailure)
    throw Error(ErrorKind::NumericalFailure, "membership LP: " + out.message);
  return out.status == LpStatus::Optimal;
}

} // namespace persuasion

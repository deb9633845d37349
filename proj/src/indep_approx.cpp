#include <persuasion/indep_approx.hpp>

#include <persuasion/exact.hpp>

#include <algorithm>
#include <cmath>

namespace persuasion {

Lp3Solution solve_lp3(const IIDInstance& instance, const LpSolver& solver)
{
  instance.validate();
  const Index n = instance.actions;
  const Index m = instance.types();
  if (n == 1)
    return Lp3Solution{instance.q, instance.q, instance.xi.dot(instance.q)};

  const double nd = static_cast<double>(n);
  LinearProgram lp(2 * m);
  std::vector<LinearProgram::Term> mass;
  std::vector<LinearProgram::Term> ic;
  for (Index j = 0; j < m; ++j) {
    lp.objective(j) = nd * instance.xi(j);
    lp.add_constraint({{j, 1.0}, {m + j, nd - 1.0}}, Relation::Equal, instance.q(j));
    mass.emplace_back(j, 1.0);
    ic.emplace_back(j, instance.rho(j));
    ic.emplace_back(m + j, -instance.rho(j));
  }
  lp.add_constraint(mass, Relation::Equal, 1.0 / nd);
  lp.add_constraint(ic, Relation::GreaterEqual, 0.0);

  const LpOutcome out = solve_or_throw(lp, solver, "relaxed s-signature LP");
  Lp3Solution sol;
  sol.x = out.point.head(m).cwiseMax(0.0);
  sol.y = out.point.tail(m).cwiseMax(0.0);
  sol.value = nd * instance.xi.dot(sol.x);
  return sol;
}

ComponentSignal independent_signal(const Vector& x, const Vector& y, const Vector& q,
                                   const std::vector<Index>& theta, Rng& rng)
{
  if (x.size() != q.size() || y.size() != q.size())
    throw Error(ErrorKind::DimensionMismatch, "x, y and q must have equal length");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ComponentSignal out(theta.size(), Component::Low);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const Index t = theta[i];
    if (t < 0 || t >= q.size())
      throw Error(ErrorKind::InvalidArgument, "type " + std::to_string(t) + " of action " +
                                                std::to_string(i) + " out of range");
    if (q(t) <= 0.0)
      throw Error(ErrorKind::InvalidArgument,
                  "type " + std::to_string(t) + " has zero prior probability");
    if (x(t) > q(t) + 1e-9)
      throw Error(ErrorKind::InvalidArgument, "x[" + std::to_string(t) + "] exceeds q[" +
                                                std::to_string(t) + "]");
    const double p = std::clamp(x(t) / q(t), 0.0, 1.0);
    if (unit(rng) < p)
      out[i] = Component::High;
  }
  return out;
}

Index to_direct_recommendation(const ComponentSignal& signal, Rng& rng)
{
  if (signal.empty())
    throw Error(ErrorKind::InvalidArgument, "empty component signal");
  std::vector<Index> high;
  for (std::size_t i = 0; i < signal.size(); ++i)
    if (signal[i] == Component::High)
      high.push_back(static_cast<Index>(i));
  if (high.empty()) {
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(signal.size()) - 1);
    return pick(rng);
  }
  std::uniform_int_distribution<std::size_t> pick(0, high.size() - 1);
  return high[pick(rng)];
}

bool nonnegative_payoffs(const IIDInstance& instance)
{
  return instance.xi.minCoeff() >= 0.0 && instance.rho.minCoeff() >= 0.0;
}

double approximation_ratio(Index actions)
{
  const double n = static_cast<double>(actions);
  return 1.0 - std::pow(1.0 - 1.0 / n, n);
}

IndependentSignaler::IndependentSignaler(IIDInstance instance, const LpSolver& solver)
  : instance_(std::move(instance)), lp3_(solve_lp3(instance_, solver))
{
  if (!nonnegative_payoffs(instance_))
    warnings_.push_back("payoffs are not all nonnegative; the 1 - (1 - 1/n)^n guarantee "
                        "does not apply");
}

Index IndependentSignaler::sample(const std::vector<Index>& types, Rng& rng) const
{
  if (static_cast<Index>(types.size()) != instance_.actions)
    throw Error(ErrorKind::DimensionMismatch, "type profile has " +
                                                std::to_string(types.size()) +
                                                " entries, expected " +
                                                std::to_string(instance_.actions));
  return to_direct_recommendation(independent_signal(lp3_.x, lp3_.y, instance_.q, types, rng),
                                  rng);
}

DirectScheme IndependentSignaler::direct_scheme() const
{
  const Index n = instance_.actions;
  const ProfileIndexer indexer(n, instance_.types());
  const double nd = static_cast<double>(n);
  Matrix phi(indexer.size(), n);
  Vector high(n);
  for (Index p = 0; p < indexer.size(); ++p) {
    const std::vector<Index> theta = indexer.profile(p);
    double none = 1.0;
    for (Index i = 0; i < n; ++i) {
      const Index t = theta[static_cast<std::size_t>(i)];
      high(i) = instance_.q(t) > 0.0 ? std::clamp(lp3_.x(t) / instance_.q(t), 0.0, 1.0) : 0.0;
      none *= 1.0 - high(i);
    }
    for (Index i = 0; i < n; ++i) {
      // Distribution of the number of other High components.
      Vector others = Vector::Zero(n);
      others(0) = 1.0;
      for (Index k = 0; k < n; ++k) {
        if (k == i)
          continue;
        for (Index c = n - 1; c >= 1; --c)
          others(c) = others(c) * (1.0 - high(k)) + others(c - 1) * high(k);
        others(0) *= 1.0 - high(k);
      }
      double share = 0.0;
      for (Index c = 0; c < n; ++c)
        share += others(c) / static_cast<double>(c + 1);
      phi(p, i) = high(i) * share + none / nd;
    }
  }
  return DirectScheme(std::move(phi));
}

} // namespace persuasion

#include <persuasion/exact.hpp>

#include <string>

namespace persuasion {

ExactSolution solve_exact(const ExplicitInstance& instance, double epsilon,
                          const LpSolver& solver)
{
  if (!(epsilon >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  const Index n = instance.actions();
  const Index states = instance.state_count();
  const Vector& prior = instance.prior();
  const Matrix& s = instance.sender();
  const Matrix& r = instance.receiver();

  // Variables phi(k, i) for states with positive prior, laid out state-major.
  std::vector<Index> column_of(static_cast<std::size_t>(states), -1);
  Index live = 0;
  for (Index k = 0; k < states; ++k)
    if (prior(k) > 0.0)
      column_of[static_cast<std::size_t>(k)] = live++;

  LinearProgram lp(live * n);
  for (Index k = 0; k < states; ++k) {
    const Index base = column_of[static_cast<std::size_t>(k)];
    if (base < 0)
      continue;
    std::vector<LinearProgram::Term> row;
    for (Index i = 0; i < n; ++i) {
      lp.objective(base * n + i) = prior(k) * s(k, i);
      lp.upper(base * n + i) = 1.0;
      row.emplace_back(base * n + i, 1.0);
    }
    lp.add_constraint(row, Relation::Equal, 1.0);
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j)
        continue;
      std::vector<LinearProgram::Term> row;
      for (Index k = 0; k < states; ++k) {
        const Index base = column_of[static_cast<std::size_t>(k)];
        if (base < 0)
          continue;
        const double c = prior(k) * (r(k, i) - r(k, j) + epsilon);
        if (c != 0.0)
          row.emplace_back(base * n + i, c);
      }
      lp.add_constraint(row, Relation::GreaterEqual, 0.0);
    }
  }

  const LpOutcome out = solve_or_throw(lp, solver, "exact persuasion LP");

  Matrix phi = Matrix::Zero(states, n);
  for (Index k = 0; k < states; ++k) {
    const Index base = column_of[static_cast<std::size_t>(k)];
    if (base < 0) {
      phi(k, 0) = 1.0;
      continue;
    }
    for (Index i = 0; i < n; ++i)
      phi(k, i) = std::max(0.0, out.point(base * n + i));
    phi.row(k) /= phi.row(k).sum();
  }
  DirectScheme scheme(std::move(phi));
  AuditReport report = audit(instance, scheme);
  return ExactSolution{std::move(scheme), out.value, std::move(report)};
}

ProfileIndexer::ProfileIndexer(std::vector<Index> radices, Index cap)
  : radices_(std::move(radices))
{
  if (radices_.empty())
    throw Error(ErrorKind::InvalidArgument, "profile has no actions");
  for (Index r : radices_) {
    if (r < 1)
      throw Error(ErrorKind::InvalidArgument, "every action needs at least one type");
    if (size_ > cap / r)
      throw Error(ErrorKind::TooLarge, "more than " + std::to_string(cap) +
                                         " type profiles (state cap " + std::to_string(cap) + ")");
    size_ *= r;
  }
}

ProfileIndexer::ProfileIndexer(Index actions, Index types, Index cap)
  : ProfileIndexer(std::vector<Index>(static_cast<std::size_t>(std::max<Index>(actions, 0)), types),
                   cap)
{}

std::vector<Index> ProfileIndexer::profile(Index index) const
{
  std::vector<Index> out(radices_.size());
  for (std::size_t i = radices_.size(); i-- > 0;) {
    out[i] = index % radices_[i];
    index /= radices_[i];
  }
  return out;
}

Index ProfileIndexer::index(const std::vector<Index>& profile) const
{
  if (profile.size() != radices_.size())
    throw Error(ErrorKind::DimensionMismatch,
                "profile has " + std::to_string(profile.size()) + " entries, expected " +
                  std::to_string(radices_.size()));
  Index out = 0;
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    if (profile[i] < 0 || profile[i] >= radices_[i])
      throw Error(ErrorKind::InvalidArgument, "type " + std::to_string(profile[i]) +
                                                " of action " + std::to_string(i) +
                                                " out of range");
    out = out * radices_[i] + profile[i];
  }
  return out;
}

ExplicitInstance expand_product(const IIDInstance& instance, Index cap)
{
  instance.validate();
  IndependentInstance indep;
  indep.marginals.assign(static_cast<std::size_t>(instance.actions),
                         Marginal{instance.q, instance.xi, instance.rho});
  return expand_product(indep, cap);
}

ExplicitInstance expand_product(const IndependentInstance& instance, Index cap)
{
  instance.validate();
  std::vector<Index> radices;
  for (const Marginal& m : instance.marginals)
    radices.push_back(m.q.size());
  const ProfileIndexer indexer(radices, cap);
  const Index n = instance.actions();

  Vector prior(indexer.size());
  Matrix sender(indexer.size(), n);
  Matrix receiver(indexer.size(), n);
  for (Index k = 0; k < indexer.size(); ++k) {
    const std::vector<Index> theta = indexer.profile(k);
    double p = 1.0;
    for (Index i = 0; i < n; ++i) {
      const Marginal& m = instance.marginals[static_cast<std::size_t>(i)];
      const Index t = theta[static_cast<std::size_t>(i)];
      p *= m.q(t);
      sender(k, i) = m.xi(t);
      receiver(k, i) = m.rho(t);
    }
    prior(k) = p;
  }
  // Products of exact probabilities can drift past the 1e-12 sum check.
  prior /= prior.sum();
  return ExplicitInstance(std::move(prior), std::move(sender), std::move(receiver));
}

} // namespace persuasion

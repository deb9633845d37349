#include <persuasion/blackbox.hpp>

#include <cmath>
#include <cstring>
#include <map>

namespace persuasion {

namespace {

constexpr double kPayoffBound = 1.0 + 1e-12;

void check_bounded(const StateDraw& s, Index actions)
{
  if (s.sender.size() != actions || s.receiver.size() != actions)
    throw Error(ErrorKind::DimensionMismatch,
                "sampled state has " + std::to_string(s.sender.size()) + " sender and " +
                  std::to_string(s.receiver.size()) + " receiver payoffs, expected " +
                  std::to_string(actions));
  if (s.sender.cwiseAbs().maxCoeff() > kPayoffBound ||
      s.receiver.cwiseAbs().maxCoeff() > kPayoffBound)
    throw Error(ErrorKind::InvalidArgument,
                "sampled payoffs leave [-1, 1]; rescale with scale_payoffs first");
}

/// Byte-level key so that only bitwise-identical payoff profiles merge.
std::string payoff_key(const StateDraw& s)
{
  std::string key(static_cast<std::size_t>(s.sender.size() + s.receiver.size()) * sizeof(double),
                  '\0');
  std::memcpy(key.data(), s.sender.data(), static_cast<std::size_t>(s.sender.size()) * sizeof(double));
  std::memcpy(key.data() + s.sender.size() * static_cast<Index>(sizeof(double)), s.receiver.data(),
              static_cast<std::size_t>(s.receiver.size()) * sizeof(double));
  return key;
}

} // namespace

ExplicitOracle::ExplicitOracle(ExplicitInstance instance) : instance_(std::move(instance)) {}

StateDraw ExplicitOracle::draw(Rng& rng) const
{
  return state(sample_categorical(instance_.prior(), rng));
}

StateDraw ExplicitOracle::state(Index k) const
{
  if (k < 0 || k >= instance_.state_count())
    throw Error(ErrorKind::InvalidArgument, "state index " + std::to_string(k) + " out of range");
  return StateDraw{instance_.sender().row(k).transpose(), instance_.receiver().row(k).transpose(),
                   k, {}};
}

ProductOracle::ProductOracle(IndependentInstance instance) : instance_(std::move(instance))
{
  instance_.validate();
}

ProductOracle::ProductOracle(const IIDInstance& instance)
{
  instance.validate();
  instance_.marginals.assign(static_cast<std::size_t>(instance.actions),
                             Marginal{instance.q, instance.xi, instance.rho});
}

StateDraw ProductOracle::draw(Rng& rng) const
{
  std::vector<Index> types(instance_.marginals.size());
  for (std::size_t i = 0; i < types.size(); ++i)
    types[i] = sample_categorical(instance_.marginals[i].q, rng);
  return state(types);
}

StateDraw ProductOracle::state(const std::vector<Index>& types) const
{
  const Index n = actions();
  if (static_cast<Index>(types.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "type profile has " +
                                                std::to_string(types.size()) +
                                                " entries, expected " + std::to_string(n));
  StateDraw out{Vector(n), Vector(n), -1, types};
  for (Index i = 0; i < n; ++i) {
    const Marginal& m = instance_.marginals[static_cast<std::size_t>(i)];
    const Index t = types[static_cast<std::size_t>(i)];
    if (t < 0 || t >= m.q.size())
      throw Error(ErrorKind::InvalidArgument, "type " + std::to_string(t) + " of action " +
                                                std::to_string(i) + " out of range");
    out.sender(i) = m.xi(t);
    out.receiver(i) = m.rho(t);
  }
  return out;
}

ExplicitInstance scale_payoffs(const ExplicitInstance& instance, double sender_factor,
                               double receiver_factor)
{
  if (!(sender_factor > 0.0) || !(receiver_factor > 0.0))
    throw Error(ErrorKind::InvalidArgument, "payoff scale factors must be positive");
  return ExplicitInstance(instance.prior(), instance.sender() * sender_factor,
                          instance.receiver() * receiver_factor);
}

double unit_scale(const Matrix& payoffs)
{
  const double top = payoffs.size() ? payoffs.cwiseAbs().maxCoeff() : 0.0;
  return top > 1.0 ? 1.0 / top : 1.0;
}

Index sample_count(Index actions, double epsilon)
{
  if (actions < 1)
    throw Error(ErrorKind::InvalidArgument, "action count must be positive");
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw Error(ErrorKind::InvalidArgument, "sample count needs epsilon in (0, 1]");
  const double n = static_cast<double>(actions);
  const double k = std::ceil(256.0 * n * n / std::pow(epsilon, 4) * std::log(4.0 * n / epsilon));
  if (!(k < 9.0e18))
    throw Error(ErrorKind::TooLarge, "sample count overflows");
  return static_cast<Index>(k);
}

EmpiricalScheme solve_empirical_lp(std::vector<StateDraw> samples, double epsilon,
                                   const LpSolver& solver)
{
  if (samples.empty())
    throw Error(ErrorKind::InvalidArgument, "empirical LP needs at least one sample");
  if (!(epsilon >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  const Index n = samples.front().sender.size();
  if (n < 1)
    throw Error(ErrorKind::InvalidArgument, "samples have no actions");

  std::map<std::string, Index> group_of;
  std::vector<Index> group(samples.size());
  std::vector<Index> count;
  std::vector<std::size_t> representative;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    check_bounded(samples[k], n);
    auto [it, fresh] = group_of.emplace(payoff_key(samples[k]), static_cast<Index>(count.size()));
    if (fresh) {
      count.push_back(0);
      representative.push_back(k);
    }
    group[k] = it->second;
    ++count[static_cast<std::size_t>(it->second)];
  }

  const Index groups = static_cast<Index>(count.size());
  const double total = static_cast<double>(samples.size());
  Vector weight(groups);
  Matrix sender(groups, n);
  Matrix receiver(groups, n);
  for (Index g = 0; g < groups; ++g) {
    const StateDraw& s = samples[representative[static_cast<std::size_t>(g)]];
    weight(g) = static_cast<double>(count[static_cast<std::size_t>(g)]) / total;
    sender.row(g) = s.sender.transpose();
    receiver.row(g) = s.receiver.transpose();
  }
  weight /= weight.sum();
  const ExactSolution sol =
    solve_exact(ExplicitInstance(std::move(weight), std::move(sender), std::move(receiver)),
                epsilon, solver);

  EmpiricalScheme out;
  out.phi.resize(static_cast<Index>(samples.size()), n);
  for (std::size_t k = 0; k < samples.size(); ++k)
    out.phi.row(static_cast<Index>(k)) = sol.scheme.phi().row(group[k]);
  out.samples = std::move(samples);
  out.epsilon = epsilon;
  out.value = sol.value;
  out.distinct = groups;
  return out;
}

BlackBoxSignal blackbox_signal(const SampleOracle& oracle, const StateDraw& theta,
                               double epsilon, Index samples, Rng& rng, const LpSolver& solver)
{
  if (samples < 1)
    throw Error(ErrorKind::InvalidArgument, "sample count must be at least 1");
  check_bounded(theta, oracle.actions());
  std::uniform_int_distribution<Index> position(0, samples - 1);
  const Index ell = position(rng);

  std::vector<StateDraw> draws;
  draws.reserve(static_cast<std::size_t>(samples));
  for (Index k = 0; k < samples - 1; ++k)
    draws.push_back(oracle.draw(rng));
  draws.insert(draws.begin() + ell, theta);

  const EmpiricalScheme scheme = solve_empirical_lp(std::move(draws), epsilon, solver);
  BlackBoxSignal out;
  out.position = ell;
  out.lp_value = scheme.value;
  out.signal = sample_categorical(scheme.phi.row(ell).transpose(), rng);
  return out;
}

BlackBoxScheme::BlackBoxScheme(const SampleOracle& oracle, BlackBoxOptions options,
                               const LpSolver& solver)
  : oracle_(oracle), options_(options), solver_(solver)
{
  const double eps = options_.epsilon;
  if (!(eps >= 0.0) || eps > 1.0)
    throw Error(ErrorKind::InvalidArgument, "epsilon must lie in [0, 1]");
  if (eps == 0.0) {
    warnings_.push_back("epsilon = 0: without relaxed incentive constraints the scheme need not "
                        "approach the optimum for any finite sample count");
    if (!options_.samples)
      throw Error(ErrorKind::InvalidArgument, "epsilon = 0 requires an explicit sample count");
  } else {
    formula_ = sample_count(oracle_.actions(), eps);
  }
  samples_ = options_.samples ? *options_.samples : *formula_;
  if (samples_ < 1)
    throw Error(ErrorKind::InvalidArgument, "sample count must be at least 1");
  if (formula_ && samples_ < *formula_) {
    if (!options_.force_samples)
      throw Error(ErrorKind::InvalidArgument,
                  "sample count " + std::to_string(samples_) + " is below the guarantee's " +
                    std::to_string(*formula_) + "; pass the force flag to run anyway");
    warnings_.push_back("sample count " + std::to_string(samples_) + " is below " +
                        std::to_string(*formula_) + "; the approximation guarantee lapses");
  }
}

BlackBoxSignal BlackBoxScheme::sample(const StateDraw& theta, Rng& rng) const
{
  return blackbox_signal(oracle_, theta, options_.epsilon, samples_, rng, solver_);
}

} // namespace persuasion

#include <persuasion/core.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace persuasion {

namespace {

constexpr double kProbSumTolerance = 1e-12;
constexpr double kRowSumTolerance = 1e-9;

void check_distribution(const Vector& q, const std::string& name)
{
  if (q.size() == 0)
    throw Error(ErrorKind::InvalidInstance, name + " is empty");
  for (Index j = 0; j < q.size(); ++j) {
    if (!std::isfinite(q(j)) || q(j) < 0.0 || q(j) > 1.0)
      throw Error(ErrorKind::InvalidInstance,
                  name + "[" + std::to_string(j) + "] is not a probability");
  }
  if (std::abs(q.sum() - 1.0) > kProbSumTolerance)
    throw Error(ErrorKind::InvalidInstance, name + " does not sum to 1");
}

void check_length(Index got, Index want, const std::string& name)
{
  if (got != want)
    throw Error(ErrorKind::DimensionMismatch, name + " has length " + std::to_string(got) +
                                                ", expected " + std::to_string(want));
}

} // namespace

ExplicitInstance::ExplicitInstance(Index actions, const std::vector<State>& states)
{
  if (actions < 1)
    throw Error(ErrorKind::InvalidInstance, "action count must be positive");
  if (states.empty())
    throw Error(ErrorKind::InvalidInstance, "instance has no states");
  const Index count = static_cast<Index>(states.size());
  prior_.resize(count);
  sender_.resize(count, actions);
  receiver_.resize(count, actions);
  for (Index k = 0; k < count; ++k) {
    const State& s = states[static_cast<std::size_t>(k)];
    const std::string where = "states[" + std::to_string(k) + "]";
    check_length(s.sender.size(), actions, where + ".sender");
    check_length(s.receiver.size(), actions, where + ".receiver");
    prior_(k) = s.prob;
    sender_.row(k) = s.sender.transpose();
    receiver_.row(k) = s.receiver.transpose();
  }
  validate();
}

ExplicitInstance::ExplicitInstance(Vector prior, Matrix sender, Matrix receiver)
  : prior_(std::move(prior)), sender_(std::move(sender)), receiver_(std::move(receiver))
{
  if (sender_.cols() < 1)
    throw Error(ErrorKind::InvalidInstance, "action count must be positive");
  if (prior_.size() == 0)
    throw Error(ErrorKind::InvalidInstance, "instance has no states");
  check_length(sender_.rows(), prior_.size(), "sender payoff rows");
  check_length(receiver_.rows(), prior_.size(), "receiver payoff rows");
  check_length(receiver_.cols(), sender_.cols(), "receiver payoff columns");
  validate();
}

void ExplicitInstance::validate() const
{
  check_distribution(prior_, "state probabilities");
  if (!sender_.allFinite() || !receiver_.allFinite())
    throw Error(ErrorKind::InvalidInstance, "payoffs must be finite");
}

State ExplicitInstance::state(Index k) const
{
  return State{prior_(k), sender_.row(k).transpose(), receiver_.row(k).transpose()};
}

std::vector<State> ExplicitInstance::states() const
{
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(state_count()));
  for (Index k = 0; k < state_count(); ++k)
    out.push_back(state(k));
  return out;
}

ExplicitInstance ExplicitInstance::permuted_states(const std::vector<Index>& order) const
{
  check_length(static_cast<Index>(order.size()), state_count(), "state order");
  Vector prior(state_count());
  Matrix sender(state_count(), actions());
  Matrix receiver(state_count(), actions());
  for (Index k = 0; k < state_count(); ++k) {
    const Index from = order[static_cast<std::size_t>(k)];
    prior(k) = prior_(from);
    sender.row(k) = sender_.row(from);
    receiver.row(k) = receiver_.row(from);
  }
  return ExplicitInstance(std::move(prior), std::move(sender), std::move(receiver));
}

void IIDInstance::validate() const
{
  if (actions < 1)
    throw Error(ErrorKind::InvalidInstance, "action count must be positive");
  check_distribution(q, "q");
  check_length(xi.size(), q.size(), "xi");
  check_length(rho.size(), q.size(), "rho");
  if (!xi.allFinite() || !rho.allFinite())
    throw Error(ErrorKind::InvalidInstance, "payoffs must be finite");
}

void IndependentInstance::validate() const
{
  if (marginals.empty())
    throw Error(ErrorKind::InvalidInstance, "independent instance has no actions");
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const std::string where = "marginals[" + std::to_string(i) + "]";
    const Marginal& m = marginals[i];
    check_distribution(m.q, where + ".q");
    check_length(m.xi.size(), m.q.size(), where + ".xi");
    check_length(m.rho.size(), m.q.size(), where + ".rho");
    if (!m.xi.allFinite() || !m.rho.allFinite())
      throw Error(ErrorKind::InvalidInstance, where + " payoffs must be finite");
  }
}

DirectScheme::DirectScheme(Matrix phi) : phi_(std::move(phi))
{
  if (phi_.rows() == 0 || phi_.cols() == 0)
    throw Error(ErrorKind::DimensionMismatch, "scheme matrix is empty");
  if (!phi_.allFinite())
    throw Error(ErrorKind::InvalidArgument, "scheme entries must be finite");
  for (Index k = 0; k < phi_.rows(); ++k) {
    if (phi_.row(k).minCoeff() < -1e-12)
      throw Error(ErrorKind::InvalidArgument,
                  "scheme row " + std::to_string(k) + " has a negative entry");
    if (std::abs(phi_.row(k).sum() - 1.0) > kRowSumTolerance)
      throw Error(ErrorKind::InvalidArgument,
                  "scheme row " + std::to_string(k) + " does not sum to 1");
  }
}

DirectScheme DirectScheme::honest(const ExplicitInstance& instance)
{
  Matrix phi = Matrix::Zero(instance.state_count(), instance.actions());
  for (Index k = 0; k < instance.state_count(); ++k) {
    const Index a = best_response(instance.receiver().row(k).transpose(),
                                  instance.sender().row(k).transpose());
    phi(k, a) = 1.0;
  }
  return DirectScheme(std::move(phi));
}

DirectScheme DirectScheme::no_information(const ExplicitInstance& instance)
{
  const Index a = best_response(instance.expected_receiver(), instance.expected_sender());
  return constant(instance.state_count(), instance.actions(), a);
}

DirectScheme DirectScheme::constant(Index states, Index actions, Index action)
{
  if (action < 0 || action >= actions)
    throw Error(ErrorKind::InvalidArgument, "action index out of range");
  Matrix phi = Matrix::Zero(states, actions);
  phi.col(action).setOnes();
  return DirectScheme(std::move(phi));
}

Index DirectScheme::sample(Index state, Rng& rng) const
{
  return sample_categorical(phi_.row(state).transpose(), rng);
}

namespace {

void check_scheme(const ExplicitInstance& instance, const DirectScheme& scheme)
{
  if (scheme.state_count() != instance.state_count())
    throw Error(ErrorKind::DimensionMismatch,
                "scheme has " + std::to_string(scheme.state_count()) +
                  " state rows but the instance has " + std::to_string(instance.state_count()) +
                  " states");
  if (scheme.signal_count() != instance.actions())
    throw Error(ErrorKind::DimensionMismatch,
                "scheme has " + std::to_string(scheme.signal_count()) +
                  " signal columns but the instance has " + std::to_string(instance.actions()) +
                  " actions");
}

} // namespace

PosteriorSummary posterior(const ExplicitInstance& instance, const DirectScheme& scheme,
                           Index signal_index)
{
  check_scheme(instance, scheme);
  if (signal_index < 0 || signal_index >= scheme.signal_count())
    throw Error(ErrorKind::DimensionMismatch,
                "signal index " + std::to_string(signal_index) + " outside [0, " +
                  std::to_string(scheme.signal_count()) + ")");

  const Vector weights = instance.prior().cwiseProduct(scheme.phi().col(signal_index));
  PosteriorSummary out;
  out.signal_prob = weights.sum();
  if (out.signal_prob <= 0.0) {
    out.signal_prob = 0.0;
    out.zero_probability = true;
    out.receiver_posterior = Vector::Zero(instance.actions());
    out.sender_posterior = Vector::Zero(instance.actions());
    out.best_action = 0;
    return out;
  }
  out.receiver_posterior = instance.receiver().transpose() * weights / out.signal_prob;
  out.sender_posterior = instance.sender().transpose() * weights / out.signal_prob;
  out.best_action = best_response(out.receiver_posterior, out.sender_posterior);
  return out;
}

Index best_response(const Eigen::Ref<const Vector>& receiver_posterior,
                    const Eigen::Ref<const Vector>& sender_posterior, double tie_tolerance)
{
  if (receiver_posterior.size() == 0 || sender_posterior.size() == 0)
    throw Error(ErrorKind::InvalidArgument, "best response of an empty payoff vector");
  if (receiver_posterior.size() != sender_posterior.size())
    throw Error(ErrorKind::DimensionMismatch, "receiver and sender posteriors differ in length");

  const double best = receiver_posterior.maxCoeff();
  Index choice = -1;
  for (Index i = 0; i < receiver_posterior.size(); ++i) {
    if (receiver_posterior(i) < best - tie_tolerance)
      continue;
    if (choice < 0 || sender_posterior(i) > sender_posterior(choice))
      choice = i;
  }
  return choice;
}

bool AuditReport::epsilon_incentive_compatible(double epsilon) const
{
  for (Index i = 0; i < ic_slack.rows(); ++i)
    for (Index j = 0; j < ic_slack.cols(); ++j)
      if (ic_slack(i, j) + epsilon * signal_probs(i) < -kTieTolerance)
        return false;
  return true;
}

AuditReport audit(const ExplicitInstance& instance, const DirectScheme& scheme)
{
  check_scheme(instance, scheme);
  const Index n = instance.actions();
  const Matrix& phi = scheme.phi();

  // weighted(k, i) = prior_k * phi(k, i)
  const Matrix weighted = instance.prior().asDiagonal() * phi;

  AuditReport report;
  report.sender_utility = weighted.cwiseProduct(instance.sender()).sum();
  report.signal_probs = weighted.colwise().sum().transpose();

  // joint(i, j) = sum_k prior_k phi(k, i) r_j(k)
  const Matrix joint = weighted.transpose() * instance.receiver();
  report.ic_slack.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      report.ic_slack(i, j) = (i == j) ? 0.0 : joint(i, i) - joint(i, j);

  report.min_slack = 0.0;
  bool first = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j)
        continue;
      if (first || report.ic_slack(i, j) < report.min_slack)
        report.min_slack = report.ic_slack(i, j);
      first = false;
    }
  }
  report.epsilon_certified = std::max(0.0, -report.min_slack);

  report.conditional_epsilon = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (report.signal_probs(i) <= 0.0)
      continue;
    for (Index j = 0; j < n; ++j)
      report.conditional_epsilon =
        std::max(report.conditional_epsilon, -report.ic_slack(i, j) / report.signal_probs(i));
  }
  return report;
}

double best_response_utility(const ExplicitInstance& instance, const DirectScheme& scheme)
{
  double total = 0.0;
  for (Index i = 0; i < scheme.signal_count(); ++i) {
    const PosteriorSummary post = posterior(instance, scheme, i);
    if (!post.zero_probability)
      total += post.signal_prob * post.sender_posterior(post.best_action);
  }
  return total;
}

Index sample_categorical(const Eigen::Ref<const Vector>& probs, Rng& rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng) * probs.sum();
  double acc = 0.0;
  Index last_positive = 0;
  for (Index i = 0; i < probs.size(); ++i) {
    if (probs(i) <= 0.0)
      continue;
    acc += probs(i);
    last_positive = i;
    if (u < acc)
      return i;
  }
  return last_positive;
}

} // namespace persuasion

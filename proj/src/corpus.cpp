#include <persuasion/corpus.hpp>

#include <persuasion/blackbox.hpp>
#include <persuasion/exact.hpp>

namespace persuasion::corpus {

ExplicitInstance prosecutor()
{
  Vector prior(2);
  prior << 2.0 / 3.0, 1.0 / 3.0;
  Matrix sender(2, 2);
  sender << 0, 1,
            0, 1;
  Matrix receiver(2, 2);
  receiver << 1, 0,
              0, 1;
  return ExplicitInstance(prior, sender, receiver);
}

IIDInstance investor()
{
  IIDInstance inst;
  inst.actions = 2;
  inst.q = Vector::Constant(3, 1.0 / 3.0);
  inst.xi.resize(3);
  inst.xi << 0.0, 1.0, 0.0;
  inst.rho.resize(3);
  inst.rho << 0.0, 1.1, 2.0;
  return inst;
}

ExplicitInstance investor_bounded()
{
  return scale_payoffs(expand_product(investor()), 1.0, 0.5);
}

namespace {

ExplicitInstance rain_instance(double rainy, double delta)
{
  if (!(delta > 0.0) || delta >= 1.0)
    throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  Vector prior(2);
  prior << rainy, 1.0 - rainy;
  Matrix sender(2, 2);
  sender << 1, 0,
            1, 0;
  Matrix receiver(2, 2);
  receiver << 1.0 - delta, 1.0,
              1.0, 0.0;
  return ExplicitInstance(prior, sender, receiver);
}

ExplicitInstance three_action_instance(const Vector& prior)
{
  Matrix sender = Matrix::Zero(3, 3);
  sender.col(2).setOnes();
  return ExplicitInstance(prior, sender, Matrix::Identity(3, 3));
}

void check_delta(double delta)
{
  if (!(delta > 0.0) || delta >= 0.5)
    throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1/2)");
}

} // namespace

ExplicitInstance rain_point(double delta) { return rain_instance(1.0, delta); }

ExplicitInstance rain_shine(double delta)
{
  return rain_instance(1.0 / (1.0 + 2.0 * delta), delta);
}

ExplicitInstance three_action(double delta)
{
  check_delta(delta);
  Vector prior(3);
  prior << 1.0 - 2.0 * delta, 2.0 * delta, 0.0;
  return three_action_instance(prior);
}

ExplicitInstance three_action_prime(double delta)
{
  check_delta(delta);
  Vector prior(3);
  prior << 1.0 - 2.0 * delta, delta, delta;
  return three_action_instance(prior);
}

Vector random_distribution(Index size, Rng& rng)
{
  std::exponential_distribution<double> expo(1.0);
  Vector q(size);
  for (Index j = 0; j < size; ++j)
    q(j) = expo(rng) + 1e-3;
  return q / q.sum();
}

namespace {

Vector random_payoffs(Index size, bool nonnegative, Rng& rng)
{
  std::uniform_real_distribution<double> unit(nonnegative ? 0.0 : -1.0, 1.0);
  Vector v(size);
  for (Index j = 0; j < size; ++j)
    v(j) = unit(rng);
  return v;
}

} // namespace

IIDInstance random_iid(Rng& rng, const RandomShape& shape)
{
  std::uniform_int_distribution<Index> actions(shape.min_actions, shape.max_actions);
  std::uniform_int_distribution<Index> types(shape.min_types, shape.max_types);
  IIDInstance inst;
  inst.actions = actions(rng);
  const Index m = types(rng);
  inst.q = random_distribution(m, rng);
  inst.xi = random_payoffs(m, shape.nonnegative, rng);
  inst.rho = random_payoffs(m, shape.nonnegative, rng);
  return inst;
}

IndependentInstance random_independent(Rng& rng, Index actions, Index max_types)
{
  std::uniform_int_distribution<Index> types(1, max_types);
  IndependentInstance inst;
  for (Index i = 0; i < actions; ++i) {
    const Index m = types(rng);
    inst.marginals.push_back(
      Marginal{random_distribution(m, rng), random_payoffs(m, false, rng),
               random_payoffs(m, false, rng)});
  }
  return inst;
}

ExplicitInstance random_explicit(Rng& rng, Index states, Index actions)
{
  Vector prior = random_distribution(states, rng);
  Matrix sender(states, actions);
  Matrix receiver(states, actions);
  for (Index k = 0; k < states; ++k) {
    sender.row(k) = random_payoffs(actions, false, rng).transpose();
    receiver.row(k) = random_payoffs(actions, false, rng).transpose();
  }
  return ExplicitInstance(prior, sender, receiver);
}

DirectScheme random_scheme(Rng& rng, Index states, Index actions)
{
  Matrix phi(states, actions);
  for (Index k = 0; k < states; ++k)
    phi.row(k) = random_distribution(actions, rng).transpose();
  return DirectScheme(std::move(phi));
}

} // namespace persuasion::corpus

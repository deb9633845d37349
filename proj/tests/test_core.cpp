#include <doctest.h>

#include <persuasion/core.hpp>
#include <persuasion/corpus.hpp>
#include <persuasion/exact.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

using namespace persuasion;

namespace {

// Recommend the unique medium stock if there is one, otherwise uniform.
DirectScheme investor_scheme(const ExplicitInstance& expanded)
{
  Matrix phi = Matrix::Constant(expanded.state_count(), 2, 0.5);
  for (Index k = 0; k < expanded.state_count(); ++k) {
    const bool m0 = expanded.sender()(k, 0) == 1.0;
    const bool m1 = expanded.sender()(k, 1) == 1.0;
    if (m0 != m1) {
      phi(k, 0) = m0 ? 1.0 : 0.0;
      phi(k, 1) = m1 ? 1.0 : 0.0;
    }
  }
  return DirectScheme(phi);
}

} // namespace

TEST_CASE("posterior of the guilty signal")
{
  const ExplicitInstance inst = corpus::prosecutor();
  const DirectScheme honest = DirectScheme::honest(inst);
  const PosteriorSummary p = posterior(inst, honest, 1);
  CHECK(std::abs(p.signal_prob - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(p.receiver_posterior(0) - 0.0) < 1e-12);
  CHECK(std::abs(p.receiver_posterior(1) - 1.0) < 1e-12);
  CHECK_FALSE(p.zero_probability);
}

TEST_CASE("posterior of a signal that never occurs")
{
  const ExplicitInstance inst = corpus::prosecutor();
  const PosteriorSummary p = posterior(inst, DirectScheme::constant(2, 2, 0), 1);
  CHECK(p.signal_prob == 0.0);
  CHECK(p.zero_probability);
  CHECK(p.receiver_posterior.isZero());
  CHECK(p.sender_posterior.isZero());
}

TEST_CASE("full information on the expanded investor instance")
{
  const ExplicitInstance inst = expand_product(corpus::investor());
  Matrix phi = Matrix::Identity(9, 9);
  const ExplicitInstance wide(inst.prior(), Matrix::Zero(9, 9), Matrix::Zero(9, 9));
  const DirectScheme full(phi);
  for (Index s = 0; s < 9; ++s)
    CHECK(std::abs(posterior(wide, full, s).signal_prob - 1.0 / 9.0) < 1e-12);
}

TEST_CASE("posterior rejects mismatched dimensions")
{
  const ExplicitInstance inst = corpus::prosecutor();
  CHECK_THROWS_AS(posterior(inst, DirectScheme::constant(3, 2, 0), 0), Error);
  CHECK_THROWS_AS(posterior(inst, DirectScheme::constant(2, 3, 0), 0), Error);
  CHECK_THROWS_AS(posterior(inst, DirectScheme::constant(2, 2, 0), 2), Error);
  try {
    posterior(inst, DirectScheme::constant(3, 2, 0), 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
    CHECK(std::string(e.what()).find("state") != std::string::npos);
  }
}

TEST_CASE("best response tie rules")
{
  Vector r(2), s(2);
  r << 0.0, 0.0;
  s << 0.0, 1.0;
  CHECK(best_response(r, s) == 1);

  r << 0.5, 0.5;
  CHECK(best_response(r, s) == 1);

  Vector r3(3), s3(3);
  r3 << 0.3, 0.7, 0.1;
  s3 << 5.0, -1.0, 9.0;
  CHECK(best_response(r3, s3) == 1);

  Vector flat = Vector::Zero(3);
  CHECK(best_response(flat, flat) == 0);

  r << 0.5, 0.5 - 1e-10;
  s << 0.0, 1.0;
  CHECK(best_response(r, s) == 1);
  r << 0.5, 0.5 - 1e-6;
  CHECK(best_response(r, s) == 0);

  CHECK_THROWS_AS(best_response(Vector(), Vector()), Error);
  CHECK_THROWS_AS(best_response(r, s3), Error);
}

TEST_CASE("audit: always claiming guilt is not IC")
{
  const ExplicitInstance inst = corpus::prosecutor();
  const AuditReport rep = audit(inst, DirectScheme::constant(2, 2, 1));
  CHECK_FALSE(rep.incentive_compatible());
  CHECK(rep.epsilon_certified > 0.0);
  CHECK(std::abs(rep.epsilon_certified - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(rep.sender_utility - 1.0) < 1e-12);
}

TEST_CASE("audit: honest scheme is IC")
{
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const ExplicitInstance inst = corpus::random_explicit(rng, 1 + t % 5, 1 + t % 4);
    const AuditReport rep = audit(inst, DirectScheme::honest(inst));
    CHECK(rep.min_slack >= 0.0);
    CHECK(rep.incentive_compatible());
    CHECK(rep.epsilon_certified == 0.0);
  }
}

TEST_CASE("audit: the recommend-medium investor scheme earns 5/9")
{
  const ExplicitInstance inst = expand_product(corpus::investor());
  const AuditReport rep = audit(inst, investor_scheme(inst));
  CHECK(std::abs(rep.sender_utility - 5.0 / 9.0) < 1e-12);
  CHECK(rep.min_slack >= 0.0);
  CHECK(rep.conditional_epsilon == 0.0);
}

TEST_CASE("audit: epsilon-IC scales with the signal probability")
{
  const ExplicitInstance inst = corpus::prosecutor();
  Matrix phi(2, 2);
  phi << 0.5, 0.5,
         0.0, 1.0;
  const AuditReport rep = audit(inst, DirectScheme(phi));
  // Convict carries mass 2/3 with posterior guilt 1/2, so it is exactly IC.
  CHECK(std::abs(rep.ic_slack(1, 0)) < 1e-15);
  CHECK(rep.incentive_compatible());

  const AuditReport always = audit(inst, DirectScheme::constant(2, 2, 1));
  CHECK(always.epsilon_incentive_compatible(1.0 / 3.0 + 1e-12));
  CHECK_FALSE(always.epsilon_incentive_compatible(0.3));
  CHECK(std::abs(always.conditional_epsilon - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("property: signal probabilities sum to one and posteriors average to the prior")
{
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const Index states = 1 + t % 6;
    const Index actions = 1 + (t / 6) % 4;
    const ExplicitInstance inst = corpus::random_explicit(rng, states, actions);
    const DirectScheme scheme = corpus::random_scheme(rng, states, actions);
    double total = 0.0;
    Vector mean_r = Vector::Zero(actions);
    Vector mean_s = Vector::Zero(actions);
    for (Index i = 0; i < actions; ++i) {
      const PosteriorSummary p = posterior(inst, scheme, i);
      total += p.signal_prob;
      mean_r += p.signal_prob * p.receiver_posterior;
      mean_s += p.signal_prob * p.sender_posterior;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
    CHECK((mean_r - inst.expected_receiver()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((mean_s - inst.expected_sender()).cwiseAbs().maxCoeff() < 1e-9);

    const AuditReport rep = audit(inst, scheme);
    CHECK(std::abs(rep.signal_probs.sum() - 1.0) < 1e-9);
    for (Index i = 0; i < actions; ++i)
      CHECK(rep.ic_slack(i, i) == 0.0);
    CHECK(rep.epsilon_certified == std::max(0.0, -rep.min_slack));
    CHECK((rep.epsilon_certified <= kTieTolerance) == rep.incentive_compatible());
  }
}

TEST_CASE("property: audit is invariant under state reordering")
{
  Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    const Index states = 2 + t % 5;
    const Index actions = 1 + t % 3;
    const ExplicitInstance inst = corpus::random_explicit(rng, states, actions);
    const DirectScheme scheme = corpus::random_scheme(rng, states, actions);
    std::vector<Index> order(static_cast<std::size_t>(states));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    Matrix phi(states, actions);
    for (Index k = 0; k < states; ++k)
      phi.row(k) = scheme.phi().row(order[static_cast<std::size_t>(k)]);
    const AuditReport a = audit(inst, scheme);
    const AuditReport b = audit(inst.permuted_states(order), DirectScheme(phi));
    CHECK(std::abs(a.sender_utility - b.sender_utility) < 1e-12);
    CHECK((a.ic_slack - b.ic_slack).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("property: best-response utility is at least the obedient utility of IC schemes")
{
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const ExplicitInstance inst = corpus::random_explicit(rng, 3, 3);
    const DirectScheme honest = DirectScheme::honest(inst);
    // With sender-favorable ties, best-responding to an IC recommendation
    // never hurts the sender.
    CHECK(best_response_utility(inst, honest) >= audit(inst, honest).sender_utility - 1e-9);
  }
}

TEST_CASE("scheme validation")
{
  Matrix bad(1, 2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(DirectScheme{bad}, Error);
  bad << -0.1, 1.1;
  CHECK_THROWS_AS(DirectScheme{bad}, Error);
}

TEST_CASE("instance validation")
{
  Vector prior(2);
  prior << 0.5, 0.6;
  CHECK_THROWS_AS(ExplicitInstance(prior, Matrix::Zero(2, 2), Matrix::Zero(2, 2)), Error);
  prior << 0.5, 0.5;
  CHECK_THROWS_AS(ExplicitInstance(prior, Matrix::Zero(2, 2), Matrix::Zero(3, 2)), Error);
}

TEST_CASE("categorical sampling frequencies")
{
  Rng rng(5);
  Vector p(3);
  p << 0.2, 0.0, 0.8;
  std::array<int, 3> counts{};
  const int n = 100000;
  for (int t = 0; t < n; ++t)
    ++counts[static_cast<std::size_t>(sample_categorical(p, rng))];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[0] / double(n) - 0.2) < 5 * std::sqrt(0.16 / n));
}

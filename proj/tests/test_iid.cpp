#include <doctest.h>

#include <persuasion/corpus.hpp>
#include <persuasion/exact.hpp>
#include <persuasion/iid.hpp>
#include <persuasion/verify.hpp>

#include <cmath>
#include <numeric>

using namespace persuasion;

namespace {

Vector vec(std::initializer_list<double> v)
{
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v)
    out(i++) = x;
  return out;
}

std::vector<Index> draw_types(const IIDInstance& inst, Rng& rng)
{
  std::vector<Index> types(static_cast<std::size_t>(inst.actions));
  for (auto& t : types)
    t = sample_categorical(inst.q, rng);
  return types;
}

void check_ssignature(const IIDInstance& inst, const SSignature& s)
{
  const double n = static_cast<double>(inst.actions);
  CHECK(std::abs(s.x.sum() - 1.0 / n) < 1e-9);
  CHECK(std::abs(s.y.sum() - 1.0 / n) < 1e-9);
  CHECK((s.x + (n - 1.0) * s.y - inst.q).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(inst.rho.dot(s.x) >= inst.rho.dot(s.y) - 1e-9);
  CHECK(s.x.minCoeff() >= -1e-12);
  CHECK(s.y.minCoeff() >= -1e-12);
}

} // namespace

TEST_CASE("investor s-signature")
{
  const IIDInstance inst = corpus::investor();
  const SSignatureSolution sol = solve_s_signature(inst);
  CHECK(std::abs(sol.value - 5.0 / 9.0) < 1e-9);
  check_ssignature(inst, sol.signature);
  CHECK(border_feasible(reduced_form(sol.signature, inst.q), inst.q, 2).feasible);
}

TEST_CASE("the recommend-medium s-signature is optimal and realizable")
{
  const IIDInstance inst = corpus::investor();
  SSignature s{vec({1.0 / 9, 5.0 / 18, 1.0 / 9}), vec({2.0 / 9, 1.0 / 18, 2.0 / 9})};
  check_ssignature(inst, s);
  CHECK(std::abs(2.0 * inst.xi.dot(s.x) - 5.0 / 9.0) < 1e-12);
  const ReducedForm tau = reduced_form(s, inst.q);
  CHECK((tau.tau - vec({1.0 / 3, 5.0 / 6, 1.0 / 3})).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(border_feasible(tau, inst.q, 2).feasible);
  const AllocationRule rule = decompose_reduced_form(tau, inst.q, 2);
  const Matrix rf = rule.reduced_forms(inst.q);
  for (Index k = 0; k < 2; ++k)
    CHECK((rf.row(k).transpose() - tau.tau).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("single type carries no information")
{
  IIDInstance inst;
  inst.actions = 3;
  inst.q = vec({1.0});
  inst.xi = vec({0.4});
  inst.rho = vec({-2.0});
  const SSignatureSolution sol = solve_s_signature(inst);
  CHECK(std::abs(sol.signature.x(0) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(sol.signature.y(0) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(sol.value - 0.4) < 1e-12);
}

TEST_CASE("single action")
{
  const IIDInstance inst = [] {
    IIDInstance i = corpus::investor();
    i.actions = 1;
    return i;
  }();
  const SSignatureSolution sol = solve_s_signature(inst);
  CHECK((sol.signature.x - inst.q).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(sol.value - inst.xi.dot(inst.q)) < 1e-12);
}

TEST_CASE("aligned interests match the honest optimum")
{
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    IIDInstance inst = corpus::random_iid(rng, {2, 3, 2, 3, false});
    inst.xi = inst.rho;
    const ExplicitInstance ex = expand_product(inst);
    const double honest = audit(ex, DirectScheme::honest(ex)).sender_utility;
    CHECK(std::abs(solve_s_signature(inst).value - honest) < 1e-6);
    CHECK(std::abs(solve_exact(ex).value - honest) < 1e-6);
  }
}

TEST_CASE("zero-probability types are dropped and restored")
{
  IIDInstance inst = corpus::investor();
  inst.q = vec({0.5, 0.0, 0.5});
  const SSignatureSolution sol = solve_s_signature(inst);
  CHECK(sol.signature.x(1) == 0.0);
  CHECK(sol.signature.y(1) == 0.0);
  check_ssignature(inst, sol.signature);
  CHECK(std::abs(sol.value - solve_exact(expand_product(inst)).value) < 1e-6);
}

TEST_CASE("Border examples")
{
  const Vector q = vec({0.5, 0.5});
  CHECK(border_feasible({vec({0.5, 0.5})}, q, 2).feasible);
  CHECK(border_feasible({vec({1.0 / 3, 1.0 / 3, 1.0 / 3})}, vec({0.2, 0.3, 0.5}), 3).feasible);

  const BorderCheck bad = border_feasible({vec({1.0, 0.0})}, q, 2);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.violating_set == std::vector<Index>{0});
  CHECK(std::abs(bad.violation - 0.25) < 1e-12);

  const BorderCheck tight = border_feasible({vec({0.75, 0.25})}, q, 2);
  CHECK(tight.feasible);
  CHECK(reduced_form_realizable({vec({0.75, 0.25})}, q, 2));
  CHECK_FALSE(reduced_form_realizable({vec({1.0, 0.0})}, q, 2));

  CHECK_THROWS_AS(border_feasible({vec({1.5, 0.0})}, q, 2), Error);
  CHECK_THROWS_AS(border_feasible({vec({0.5})}, q, 2), Error);
}

TEST_CASE("decomposition examples")
{
  const Vector q = vec({0.5, 0.5});
  {
    const AllocationRule rule = decompose_reduced_form({vec({0.75, 0.25})}, q, 2);
    const Matrix rf = rule.reduced_forms(q);
    CHECK(std::abs(rf(0, 0) - 0.75) < 1e-8);
    CHECK(std::abs(rf(1, 1) - 0.25) < 1e-8);
    // Tight at type 0: a type-0 bidder always wins against a type-1 rival.
    const Index mixed = rule.indexer().index({0, 1});
    CHECK(std::abs(rule.alloc()(mixed, 0) - 1.0) < 1e-8);
  }
  {
    // Uniform tau: the decomposition is not unique, only the reduced form is pinned.
    const Vector q3 = vec({0.2, 0.3, 0.5});
    const AllocationRule rule = decompose_reduced_form({Vector::Constant(3, 1.0 / 3)}, q3, 3);
    CHECK((rule.reduced_forms(q3).array() - 1.0 / 3).abs().maxCoeff() < 1e-8);
    for (Index p = 0; p < rule.alloc().rows(); ++p)
      CHECK(std::abs(rule.alloc().row(p).sum() - 1.0) < 1e-9);
  }
  try {
    decompose_reduced_form({vec({1.0, 0.0})}, q, 2);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
}

TEST_CASE("signaler reproduces the s-signature exactly and by simulation")
{
  const IIDInstance inst = corpus::investor();
  const SymmetricSignaler signaler = solve_iid(inst);
  const ExplicitInstance ex = expand_product(inst);
  const DirectScheme direct = signaler.direct_scheme();
  const AuditReport rep = audit(ex, direct);
  CHECK(std::abs(rep.sender_utility - 5.0 / 9.0) < 1e-9);
  CHECK(rep.incentive_compatible());
  const Signature sig = signature(inst, direct);
  CHECK(symmetry_defect(sig, signaler.s_signature()) < 1e-9);
  CHECK(realizability_check(sig, inst));

  Rng rng(42);
  const int trials = 200000;
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto types = draw_types(inst, rng);
    const Index rec = signaler.sample(types, rng);
    const double u = inst.xi(types[static_cast<std::size_t>(rec)]);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sq / trials - mean * mean) / trials);
  CHECK(std::abs(mean - 5.0 / 9.0) <= 3.0 * se);
}

TEST_CASE("uniform rule gives an uninformative signal")
{
  IIDInstance inst = corpus::investor();
  const SSignature s{inst.q / 2.0, inst.q / 2.0};
  const AllocationRule rule = decompose_reduced_form(reduced_form(s, inst.q), inst.q, 2);
  const SymmetricSignaler signaler = scheme_from_allocation(inst, s, rule);
  const DirectScheme direct = signaler.direct_scheme();
  CHECK((direct.phi().array() - 0.5).abs().maxCoeff() < 1e-9);

  const SSignature wrong{vec({1.0 / 9, 5.0 / 18, 1.0 / 9}), vec({2.0 / 9, 1.0 / 18, 2.0 / 9})};
  CHECK_THROWS_AS(scheme_from_allocation(inst, wrong, rule), Error);
}

TEST_CASE("one action always gets signal 0")
{
  IIDInstance inst = corpus::investor();
  inst.actions = 1;
  const SymmetricSignaler signaler = solve_iid(inst);
  Rng rng(4);
  for (Index j = 0; j < 3; ++j)
    CHECK(signaler.sample({j}, rng) == 0);
}

TEST_CASE("symmetrize examples")
{
  const IIDInstance inst = corpus::investor();
  const ExplicitInstance ex = expand_product(inst);

  const ExactSolution opt = solve_exact(ex);
  const DirectScheme sym = symmetrize(inst, opt.scheme);
  const Signature sig = signature(inst, sym);
  CHECK(symmetry_defect(sig) < 1e-9);
  CHECK(std::abs(audit(ex, sym).sender_utility - opt.value) < 1e-9);
  CHECK(audit(ex, sym).incentive_compatible());

  // Fixed point.
  const DirectScheme again = symmetrize(inst, sym);
  CHECK((again.phi() - sym.phi()).cwiseAbs().maxCoeff() < 1e-12);

  // An asymmetric honest scheme (ties go to action 0).
  const DirectScheme honest = DirectScheme::honest(ex);
  CHECK(symmetry_defect(signature(inst, honest)) > 1e-3);
  const DirectScheme hs = symmetrize(inst, honest);
  CHECK(std::abs(audit(ex, hs).sender_utility - audit(ex, honest).sender_utility) < 1e-9);
  CHECK(symmetry_defect(signature(inst, hs)) < 1e-9);

  IIDInstance big = inst;
  big.actions = 7;
  CHECK_THROWS_AS(symmetrize(big, DirectScheme::constant(1, 7, 0)), Error);
}

TEST_CASE("permuted sampler matches the explicit average")
{
  const IIDInstance inst = corpus::investor();
  const ExplicitInstance ex = expand_product(inst);
  const DirectScheme honest = DirectScheme::honest(ex);
  const DirectScheme sym = symmetrize(inst, honest);
  const PermutedSampler sampler(inst, honest);
  const ProfileIndexer idx(2, 3);
  Rng rng(43);
  const int trials = 20000;
  for (Index k = 0; k < ex.state_count(); ++k) {
    Vector counts = Vector::Zero(2);
    for (int t = 0; t < trials; ++t)
      counts(sampler.sample(idx.profile(k), rng)) += 1.0;
    const double p = sym.phi()(k, 0);
    const double se = std::sqrt(p * (1 - p) / trials) + 1e-12;
    CHECK(std::abs(counts(0) / trials - p) <= 4.0 * se);
  }
}

TEST_CASE("property: s-signature value equals the expansion optimum")
{
  Rng rng(44);
  for (int t = 0; t < 40; ++t) {
    const IIDInstance inst = corpus::random_iid(rng, {1, 3, 1, 3, false});
    const SSignatureSolution sol = solve_s_signature(inst);
    check_ssignature(inst, sol.signature);
    CHECK(border_feasible(reduced_form(sol.signature, inst.q), inst.q, inst.actions).feasible);
    CHECK(std::abs(sol.value - solve_exact(expand_product(inst)).value) < 1e-6);
  }
}

TEST_CASE("property: Border check agrees with the transportation oracle")
{
  Rng rng(45);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int disagreements = 0;
  for (int t = 0; t < 100; ++t) {
    const Index n = 1 + t % 4;
    const Index m = 1 + (t / 4) % 3;
    const Vector q = corpus::random_distribution(m, rng);
    Vector tau(m);
    // Mix draws near the feasibility boundary with uniform ones.
    const double scale = (t % 2 == 0) ? 1.0 : 1.0 / static_cast<double>(n);
    for (Index j = 0; j < m; ++j)
      tau(j) = std::min(1.0, unit(rng) * 2.0 * scale);
    const bool fast = border_feasible({tau}, q, n).feasible;
    const bool slow = reduced_form_realizable({tau}, q, n);
    if (fast != slow)
      ++disagreements;
    if (fast) {
      const AllocationRule rule = decompose_reduced_form({tau}, q, n);
      const Matrix rf = rule.reduced_forms(q);
      for (Index k = 0; k < n; ++k)
        CHECK((rf.row(k).transpose() - tau).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("property: relabeling types permutes x and keeps the value")
{
  Rng rng(46);
  for (int t = 0; t < 30; ++t) {
    const IIDInstance inst = corpus::random_iid(rng, {2, 4, 2, 3, false});
    const Index m = inst.types();
    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    IIDInstance moved = inst;
    for (Index j = 0; j < m; ++j) {
      const Index to = perm[static_cast<std::size_t>(j)];
      moved.q(to) = inst.q(j);
      moved.xi(to) = inst.xi(j);
      moved.rho(to) = inst.rho(j);
    }
    const SSignatureSolution a = solve_s_signature(inst);
    const SSignatureSolution b = solve_s_signature(moved);
    CHECK(std::abs(a.value - b.value) < 1e-9);
    // x is a vertex, so only the payoff of the permuted x is pinned.
    Vector ax(m);
    for (Index j = 0; j < m; ++j)
      ax(perm[static_cast<std::size_t>(j)]) = a.signature.x(j);
    CHECK(std::abs(moved.xi.dot(ax) - moved.xi.dot(b.signature.x)) < 1e-9);
  }
}

TEST_CASE("signature marginals are consistent with the prior")
{
  Rng rng(47);
  for (int t = 0; t < 20; ++t) {
    const IIDInstance inst = corpus::random_iid(rng, {2, 3, 2, 3, false});
    const ExplicitInstance ex = expand_product(inst);
    const DirectScheme scheme = corpus::random_scheme(rng, ex.state_count(), inst.actions);
    const Signature sig = signature(inst, scheme);
    Matrix total = Matrix::Zero(inst.actions, inst.types());
    for (const Matrix& m : sig.m) {
      total += m;
      const Vector rows = m.rowwise().sum();
      CHECK((rows.array() - rows(0)).abs().maxCoeff() < 1e-12);
    }
    for (Index k = 0; k < inst.actions; ++k)
      CHECK((total.row(k).transpose() - inst.q).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(realizability_check(sig, inst));
    CHECK(std::abs(sig.signal_probs().sum() - 1.0) < 1e-12);
  }
}

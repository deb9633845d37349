#include <doctest.h>

#include <persuasion/blackbox.hpp>
#include <persuasion/corpus.hpp>
#include <persuasion/exact.hpp>

#include <cmath>

using namespace persuasion;

namespace {

StateDraw draw(std::initializer_list<double> s, std::initializer_list<double> r)
{
  StateDraw d;
  d.sender.resize(static_cast<Index>(s.size()));
  d.receiver.resize(static_cast<Index>(r.size()));
  Index i = 0;
  for (double v : s)
    d.sender(i++) = v;
  i = 0;
  for (double v : r)
    d.receiver(i++) = v;
  return d;
}

} // namespace

TEST_CASE("sample count golden values")
{
  CHECK(sample_count(2, 0.5) == 45427);
  CHECK(sample_count(1, 1.0) == 355);
  CHECK(sample_count(2, 0.25) > sample_count(2, 0.5));
  CHECK(sample_count(3, 0.5) > sample_count(2, 0.5));
  // Independent evaluation of the formula.
  CHECK(sample_count(2, 0.5) ==
        static_cast<Index>(std::ceil(256.0 * 4.0 / std::pow(0.5, 4) * std::log(16.0))));
  CHECK_THROWS_AS(sample_count(2, 0.0), Error);
  CHECK_THROWS_AS(sample_count(2, -0.1), Error);
  CHECK_THROWS_AS(sample_count(2, 1.5), Error);
}

TEST_CASE("single sample within epsilon of the best receiver action")
{
  const double eps = 0.1;
  const EmpiricalScheme s = solve_empirical_lp({draw({0.2, 0.9}, {0.5, 0.5 - eps})}, eps);
  CHECK(std::abs(s.value - 0.9) < 1e-9);
  CHECK(std::abs(s.phi(0, 1) - 1.0) < 1e-9);

  const EmpiricalScheme strict = solve_empirical_lp({draw({0.2, 0.9}, {0.5, 0.5 - eps})}, 0.05);
  CHECK(std::abs(strict.value - 0.2) < 1e-9);
}

TEST_CASE("identical samples merge into one row")
{
  std::vector<StateDraw> same(50, draw({0.0, 0.3, 0.8}, {0.4, 0.35, 0.1}));
  const EmpiricalScheme s = solve_empirical_lp(same, 0.1);
  CHECK(s.distinct == 1);
  CHECK(s.phi.rows() == 50);
  // Action 2 is 0.3 below the best, so the sender settles for action 1.
  CHECK(std::abs(s.value - 0.3) < 1e-9);
  for (Index k = 0; k < 50; ++k)
    CHECK(std::abs(s.phi(k, 1) - 1.0) < 1e-9);
}

TEST_CASE("full support of the bounded investor recovers the optimum")
{
  const ExplicitOracle oracle(corpus::investor_bounded());
  std::vector<StateDraw> all;
  for (Index k = 0; k < 9; ++k)
    all.push_back(oracle.state(k));
  const EmpiricalScheme s = solve_empirical_lp(all, 0.0);
  CHECK(std::abs(s.value - 5.0 / 9.0) < 1e-9);
  CHECK(s.distinct == 9);
}

TEST_CASE("payoffs outside [-1, 1] are rejected")
{
  CHECK_THROWS_AS(solve_empirical_lp({draw({0.0, 2.0}, {0.0, 0.0})}, 0.1), Error);
  const ExplicitOracle raw(expand_product(corpus::investor()));
  CHECK_THROWS_AS(solve_empirical_lp({raw.state(8)}, 0.1), Error);
}

TEST_CASE("property: empirical value is nondecreasing in epsilon")
{
  Rng rng(61);
  for (int t = 0; t < 20; ++t) {
    const ExplicitInstance inst = corpus::random_explicit(rng, 4, 3);
    const ExplicitOracle oracle(scale_payoffs(inst, unit_scale(inst.sender()),
                                              unit_scale(inst.receiver())));
    std::vector<StateDraw> samples;
    for (int k = 0; k < 30; ++k)
      samples.push_back(oracle.draw(rng));
    double last = -1e300;
    for (double eps : {0.0, 0.05, 0.1, 0.3, 1.0}) {
      const EmpiricalScheme s = solve_empirical_lp(samples, eps);
      CHECK(s.value >= last - 1e-9);
      last = s.value;
      for (Index k = 0; k < s.phi.rows(); ++k)
        CHECK(std::abs(s.phi.row(k).sum() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("degenerate sample counts")
{
  // K = 1: only theta itself is solved over.
  const ExplicitOracle oracle(corpus::rain_shine(0.1));
  Rng rng(62);
  const StateDraw sunny = oracle.state(1);
  for (int t = 0; t < 20; ++t) {
    const BlackBoxSignal sig = blackbox_signal(oracle, sunny, 0.2, 1, rng);
    CHECK(sig.position == 0);
    CHECK(sig.signal == corpus::kWalk);
  }
  const StateDraw rainy = oracle.state(0);
  for (int t = 0; t < 20; ++t) {
    CHECK(blackbox_signal(oracle, rainy, 0.2, 1, rng).signal == corpus::kWalk);
    CHECK(blackbox_signal(oracle, rainy, 0.05, 1, rng).signal == corpus::kDrive);
  }

  // A point-mass oracle behaves like K = 1 for any K.
  const ExplicitOracle point(corpus::rain_point(0.1));
  const StateDraw only = point.state(0);
  for (int t = 0; t < 20; ++t) {
    CHECK(blackbox_signal(point, only, 0.2, 25, rng).signal == corpus::kWalk);
    CHECK(blackbox_signal(point, only, 0.05, 25, rng).signal == corpus::kDrive);
  }
}

TEST_CASE("theta lands at a uniform position")
{
  const ExplicitOracle oracle(corpus::rain_shine(0.1));
  Rng rng(63);
  const Index k = 5;
  std::vector<int> hits(static_cast<std::size_t>(k), 0);
  const int trials = 5000;
  for (int t = 0; t < trials; ++t)
    ++hits[static_cast<std::size_t>(blackbox_signal(oracle, oracle.draw(rng), 0.1, k, rng).position)];
  for (int h : hits)
    CHECK(std::abs(h / double(trials) - 0.2) < 4.0 * std::sqrt(0.16 / trials));
}

TEST_CASE("scheme options")
{
  const ExplicitOracle oracle(corpus::rain_shine(0.1));
  {
    const BlackBoxScheme s(oracle, {0.5, std::nullopt, false});
    CHECK(s.samples() == 45427);
    CHECK(s.warnings().empty());
  }
  CHECK_THROWS_AS(BlackBoxScheme(oracle, {0.2, Index{100}, false}), Error);
  {
    const BlackBoxScheme s(oracle, {0.2, Index{100}, true});
    CHECK(s.samples() == 100);
    CHECK(s.formula_samples().value() == sample_count(2, 0.2));
    CHECK(s.warnings().size() == 1);
  }
  CHECK_THROWS_AS(BlackBoxScheme(oracle, {0.0, std::nullopt, false}), Error);
  {
    const BlackBoxScheme s(oracle, {0.0, Index{10}, false});
    CHECK_FALSE(s.formula_samples().has_value());
    CHECK(s.warnings().size() == 1);
  }
}

TEST_CASE("exact IC on the point-rain prior never walks")
{
  const ExplicitOracle oracle(corpus::rain_point(0.1));
  const BlackBoxScheme scheme(oracle, {0.0, Index{50}, false});
  Rng rng(64);
  for (int t = 0; t < 500; ++t)
    CHECK(scheme.sample(oracle.draw(rng), rng).signal == corpus::kDrive);
}

TEST_CASE("payoff scaling")
{
  const ExplicitInstance inst = expand_product(corpus::investor());
  CHECK(unit_scale(inst.receiver()) == 0.5);
  CHECK(unit_scale(inst.sender()) == 1.0);
  const ExplicitInstance half = scale_payoffs(inst, 1.0, 0.5);
  CHECK((half.receiver() - corpus::investor_bounded().receiver()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(solve_exact(half).value - 5.0 / 9.0) < 1e-9);
  CHECK_THROWS_AS(scale_payoffs(inst, 0.0, 1.0), Error);
}

TEST_CASE("product oracle draws follow the marginals")
{
  const ProductOracle oracle(corpus::investor());
  Rng rng(65);
  const int trials = 30000;
  int high = 0;
  for (int t = 0; t < trials; ++t) {
    const StateDraw d = oracle.draw(rng);
    REQUIRE(d.types.size() == 2);
    CHECK(d.receiver(1) == corpus::investor().rho(d.types[1]));
    high += d.types[0] == 2;
  }
  CHECK(std::abs(high / double(trials) - 1.0 / 3.0) < 4.0 * std::sqrt(2.0 / 9.0 / trials));
}

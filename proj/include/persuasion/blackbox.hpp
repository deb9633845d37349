#pragma once

#include <persuasion/core.hpp>
#include <persuasion/exact.hpp>
#include <persuasion/lp.hpp>

#include <optional>
#include <string>
#include <vector>

namespace persuasion {

/// One realized state of nature. index is the state's position in an
/// explicit prior (-1 when there is none); types is the type profile for
/// product priors (empty otherwise).
struct StateDraw {
  Vector sender;
  Vector receiver;
  Index index = -1;
  std::vector<Index> types;
};

/// Source of states drawn from a prior the caller cannot inspect.
class SampleOracle {
public:
  virtual ~SampleOracle() = default;
  virtual Index actions() const = 0;
  virtual StateDraw draw(Rng& rng) const = 0;
  /// Whether draw may be called from several threads at once.
  virtual bool concurrent_safe() const { return false; }
};

class ExplicitOracle : public SampleOracle {
public:
  explicit ExplicitOracle(ExplicitInstance instance);

  const ExplicitInstance& instance() const { return instance_; }
  Index actions() const override { return instance_.actions(); }
  StateDraw draw(Rng& rng) const override;
  StateDraw state(Index k) const;
  bool concurrent_safe() const override { return true; }

private:
  ExplicitInstance instance_;
};

/// Independent types per action; covers i.i.d. instances as a special case.
class ProductOracle : public SampleOracle {
public:
  explicit ProductOracle(IndependentInstance instance);
  explicit ProductOracle(const IIDInstance& instance);

  Index actions() const override { return instance_.actions(); }
  StateDraw draw(Rng& rng) const override;
  StateDraw state(const std::vector<Index>& types) const;
  bool concurrent_safe() const override { return true; }

private:
  IndependentInstance instance_;
};

/// Multiply sender and receiver payoffs by separate positive factors.
/// Receiver scaling preserves best responses (epsilon scales with it);
/// sender scaling scales every sender value.
ExplicitInstance scale_payoffs(const ExplicitInstance& instance, double sender_factor,
                               double receiver_factor);

/// Factor 1 / max|payoff| (or 1 when already inside [-1, 1]).
double unit_scale(const Matrix& payoffs);

/// ceil(256 n^2 / eps^4 * ln(4 n / eps)).
Index sample_count(Index actions, double epsilon);

struct EmpiricalScheme {
  std::vector<StateDraw> samples;
  /// Row k is the signal distribution for samples[k].
  Matrix phi;
  double epsilon = 0.0;
  double value = 0.0;
  /// Distinct payoff profiles the LP was solved over.
  Index distinct = 0;
};

/// Optimal epsilon-IC scheme for the uniform distribution on samples.
/// Bitwise-identical samples share one LP row weighted by multiplicity,
/// which leaves the optimum unchanged.
EmpiricalScheme solve_empirical_lp(std::vector<StateDraw> samples, double epsilon,
                                   const LpSolver& solver = default_lp_solver());

struct BlackBoxSignal {
  Index signal = 0;
  /// Position of the true state among the K samples.
  Index position = 0;
  double lp_value = 0.0;
};

/// One run of the sample-and-solve scheme: theta is placed at a uniform
/// position among K - 1 fresh oracle draws and the signal is sampled from
/// its row of the empirical LP solution.
BlackBoxSignal blackbox_signal(const SampleOracle& oracle, const StateDraw& theta,
                               double epsilon, Index samples, Rng& rng,
                               const LpSolver& solver = default_lp_solver());

struct BlackBoxOptions {
  double epsilon = 0.1;
  /// Sample count; defaults to sample_count(n, epsilon).
  std::optional<Index> samples;
  /// Allow samples below the formula value.
  bool force_samples = false;
};

class BlackBoxScheme {
public:
  BlackBoxScheme(const SampleOracle& oracle, BlackBoxOptions options,
                 const LpSolver& solver = default_lp_solver());

  Index samples() const { return samples_; }
  /// Formula value, or nullopt when epsilon = 0.
  std::optional<Index> formula_samples() const { return formula_; }
  double epsilon() const { return options_.epsilon; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  BlackBoxSignal sample(const StateDraw& theta, Rng& rng) const;

private:
  const SampleOracle& oracle_;
  BlackBoxOptions options_;
  const LpSolver& solver_;
  Index samples_ = 1;
  std::optional<Index> formula_;
  std::vector<std::string> warnings_;
};

} // namespace persuasion

#pragma once

#include <persuasion/blackbox.hpp>
#include <persuasion/core.hpp>
#include <persuasion/iid.hpp>
#include <persuasion/khintchine.hpp>
#include <persuasion/lp.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace persuasion {

/// Maps a realized state to a signal. Signals in [0, n) are recommendations;
/// any other value is an opaque label.
using Sampler = std::function<Index(const StateDraw&, Rng&)>;

struct SignalSummary {
  Index signal = 0;
  Index count = 0;
  Vector receiver_mean;
  Vector sender_mean;
  /// Empirical best response (statistical ties go to the sender).
  Index best_action = 0;
};

struct EvalReport {
  Index trials = 0;
  Index actions = 0;
  /// Receiver best-responds to the empirical posterior of each signal.
  double mean_sender_utility = 0.0;
  double std_error = 0.0;
  /// Receiver obeys recommendations (opaque signals use the best response).
  double follow_utility = 0.0;
  double follow_std_error = 0.0;
  /// Fraction of trials whose signal is a recommendation matching the
  /// best response.
  double follow_rate = 0.0;
  /// Entry (i, j) estimates E[1{signal = i} (r_i - r_j)].
  Matrix ic_slack;
  Matrix ic_slack_se;
  /// Entry (i, j) estimates E[r_i - r_j | signal = i]; zero for unseen i.
  Matrix conditional_gap;
  Matrix conditional_gap_se;
  std::vector<SignalSummary> signals;

  /// Every ic_slack entry is at least -epsilon - sigmas * se.
  bool ic_within(double epsilon, double sigmas = 3.0) const;
  /// Every observed recommendation is a best response up to sigmas * se.
  bool rational(double sigmas = 3.0) const;
};

struct EvalOptions {
  Index workers = 1;
  /// Receiver ties within this many standard errors of the difference.
  double tie_sigmas = 3.0;
};

/// Simulate trials states from the oracle, signal each one, and aggregate.
/// Worker w uses its own stream seeded from (seed, w), so the report depends
/// only on seed, trials and the worker count.
EvalReport monte_carlo_eval(const Sampler& sampler, const SampleOracle& oracle, Index trials,
                            std::uint64_t seed, const EvalOptions& options = {});

/// Feasibility of the scheme LP reproducing every signature entry.
bool realizability_check(const Signature& signature, const IIDInstance& instance,
                         const LpSolver& solver = default_lp_solver());
bool realizability_check(const TwoSignalSignature& signature, Index n,
                         const LpSolver& solver = default_lp_solver());

/// Sender payoff at a posterior when the receiver best-responds.
double posterior_sender_value(const ExplicitInstance& instance, const Vector& belief);

/// Concave envelope of the posterior sender value at the prior, for at most
/// three states. Exact: candidate posteriors are the vertices of the
/// best-response arrangement.
double concavification_value(const ExplicitInstance& instance);

/// Brute-force Border check: does some allocation over all type profiles
/// have reduced form tau? Solved as a transportation feasibility LP.
bool reduced_form_realizable(const ReducedForm& tau, const Vector& q, Index n,
                             const LpSolver& solver = default_lp_solver());

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle-equivalence suites: "small" (seconds) or "full".
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed);

} // namespace persuasion

#pragma once

#include <persuasion/error.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace persuasion {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Absolute tolerance for receiver ties and IC certification.
inline constexpr double kTieTolerance = 1e-9;

/// One state of nature: its prior probability and the payoff each action
/// yields to the sender and to the receiver.
struct State {
  double prob = 0.0;
  Vector sender;
  Vector receiver;
};

/// A prior given by an explicit list of states. Rows of sender() and
/// receiver() are states, columns are actions.
class ExplicitInstance {
public:
  ExplicitInstance(Index actions, const std::vector<State>& states);
  ExplicitInstance(Vector prior, Matrix sender, Matrix receiver);

  Index actions() const { return sender_.cols(); }
  Index state_count() const { return prior_.size(); }

  const Vector& prior() const { return prior_; }
  const Matrix& sender() const { return sender_; }
  const Matrix& receiver() const { return receiver_; }

  State state(Index k) const;
  std::vector<State> states() const;

  /// Prior expectation of the receiver (resp. sender) payoff vector.
  Vector expected_receiver() const { return receiver_.transpose() * prior_; }
  Vector expected_sender() const { return sender_.transpose() * prior_; }

  /// Same instance with states reordered: state k of the result is state
  /// order[k] of this one.
  ExplicitInstance permuted_states(const std::vector<Index>& order) const;

private:
  void validate() const;

  Vector prior_;
  Matrix sender_;
  Matrix receiver_;
};

/// n i.i.d. actions whose types are drawn from q; a type j pays xi_j to the
/// sender and rho_j to the receiver when chosen.
struct IIDInstance {
  Index actions = 0;
  Vector q;
  Vector xi;
  Vector rho;

  Index types() const { return q.size(); }
  void validate() const;
};

struct Marginal {
  Vector q;
  Vector xi;
  Vector rho;
};

/// Independent but non-identical actions, one explicit marginal per action.
struct IndependentInstance {
  std::vector<Marginal> marginals;

  Index actions() const { return static_cast<Index>(marginals.size()); }
  void validate() const;
};

/// Row-stochastic map from states (rows) to recommendation signals (columns).
class DirectScheme {
public:
  explicit DirectScheme(Matrix phi);

  const Matrix& phi() const { return phi_; }
  Index state_count() const { return phi_.rows(); }
  Index signal_count() const { return phi_.cols(); }

  /// Recommend a receiver-best action in every state.
  static DirectScheme honest(const ExplicitInstance& instance);
  /// Recommend the prior best response in every state.
  static DirectScheme no_information(const ExplicitInstance& instance);
  static DirectScheme constant(Index states, Index actions, Index action);

  Index sample(Index state, Rng& rng) const;

private:
  Matrix phi_;
};

struct PosteriorSummary {
  double signal_prob = 0.0;
  Vector receiver_posterior;
  Vector sender_posterior;
  Index best_action = 0;
  bool zero_probability = false;
};

struct AuditReport {
  double sender_utility = 0.0;
  /// Entry (i, j) is sum over states of prior * phi(state, i) * (r_i - r_j).
  Matrix ic_slack;
  /// Smallest off-diagonal entry of ic_slack (0 when n = 1).
  double min_slack = 0.0;
  double epsilon_certified = 0.0;
  /// Largest posterior regret max_j r_j(sigma_i) - r_i(sigma_i) over signals
  /// that occur with positive probability, floored at 0.
  double conditional_epsilon = 0.0;
  Vector signal_probs;

  bool incentive_compatible() const { return min_slack >= -kTieTolerance; }
  /// Relaxed IC: slack(i, j) + epsilon * Pr[sigma_i] >= 0 for every pair.
  bool epsilon_incentive_compatible(double epsilon) const;
};

/// Posterior payoffs after observing signal_index under scheme.
PosteriorSummary posterior(const ExplicitInstance& instance, const DirectScheme& scheme,
                           Index signal_index);

/// Receiver best response with ties broken toward the sender, then toward the
/// smallest index.
Index best_response(const Eigen::Ref<const Vector>& receiver_posterior,
                    const Eigen::Ref<const Vector>& sender_posterior,
                    double tie_tolerance = kTieTolerance);

AuditReport audit(const ExplicitInstance& instance, const DirectScheme& scheme);

/// Expected sender utility when the receiver best-responds to each signal's
/// posterior (rather than obeying the recommendation).
double best_response_utility(const ExplicitInstance& instance, const DirectScheme& scheme);

/// Draw an index from a probability vector.
Index sample_categorical(const Eigen::Ref<const Vector>& probs, Rng& rng);

} // namespace persuasion

#pragma once

#include <persuasion/core.hpp>
#include <persuasion/lp.hpp>

#include <string>
#include <vector>

namespace persuasion {

/// Relaxed s-signature LP without realizability; its value bounds the
/// optimum from above.
struct Lp3Solution {
  Vector x;
  Vector y;
  double value = 0.0;
};

enum class Component : unsigned char { Low, High };

using ComponentSignal = std::vector<Component>;

Lp3Solution solve_lp3(const IIDInstance& instance, const LpSolver& solver = default_lp_solver());

/// Component i is High with probability x_{theta_i} / q_{theta_i},
/// independently across actions.
ComponentSignal independent_signal(const Vector& x, const Vector& y, const Vector& q,
                                   const std::vector<Index>& theta, Rng& rng);

/// Uniform over High components, or uniform over all actions if none.
Index to_direct_recommendation(const ComponentSignal& signal, Rng& rng);

bool nonnegative_payoffs(const IIDInstance& instance);

/// 1 - (1 - 1/n)^n.
double approximation_ratio(Index actions);

class IndependentSignaler {
public:
  explicit IndependentSignaler(IIDInstance instance,
                               const LpSolver& solver = default_lp_solver());

  const IIDInstance& instance() const { return instance_; }
  const Lp3Solution& relaxation() const { return lp3_; }
  /// Lower bound on expected sender utility, valid for nonnegative payoffs.
  double guaranteed_value() const { return approximation_ratio(instance_.actions) * lp3_.value; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Index sample(const std::vector<Index>& types, Rng& rng) const;

  /// Exact recommendation probabilities over the expansion.
  DirectScheme direct_scheme() const;

private:
  IIDInstance instance_;
  Lp3Solution lp3_;
  std::vector<std::string> warnings_;
};

} // namespace persuasion

#pragma once

#include <persuasion/core.hpp>
#include <persuasion/lp.hpp>

#include <vector>

namespace persuasion {

inline constexpr Index kDefaultStateCap = 200000;

struct ExactSolution {
  DirectScheme scheme;
  double value = 0.0;
  AuditReport audit;
};

/// Optimal epsilon-IC direct scheme by the state-by-signal LP. States with
/// zero prior get all mass on signal 0.
ExactSolution solve_exact(const ExplicitInstance& instance, double epsilon = 0.0,
                          const LpSolver& solver = default_lp_solver());

/// Mixed-radix index over type profiles, action 0 most significant.
class ProfileIndexer {
public:
  explicit ProfileIndexer(std::vector<Index> radices, Index cap = kDefaultStateCap);
  ProfileIndexer(Index actions, Index types, Index cap = kDefaultStateCap);

  Index actions() const { return static_cast<Index>(radices_.size()); }
  Index size() const { return size_; }
  const std::vector<Index>& radices() const { return radices_; }

  std::vector<Index> profile(Index index) const;
  Index index(const std::vector<Index>& profile) const;

private:
  std::vector<Index> radices_;
  Index size_ = 1;
};

ExplicitInstance expand_product(const IIDInstance& instance, Index cap = kDefaultStateCap);
ExplicitInstance expand_product(const IndependentInstance& instance, Index cap = kDefaultStateCap);

} // namespace persuasion

#pragma once

#include <persuasion/core.hpp>
#include <persuasion/exact.hpp>
#include <persuasion/lp.hpp>

#include <optional>
#include <vector>

namespace persuasion {

/// Symmetric-scheme summary: x is the joint law of (signal i, type of action
/// i), y the joint law of (signal i, type of any other action).
struct SSignature {
  Vector x;
  Vector y;
};

struct SSignatureSolution {
  SSignature signature;
  double value = 0.0;
  /// Border cuts added before the LP optimum became realizable.
  Index cuts = 0;
};

/// Conditional win probability per type of a symmetric single-item rule.
struct ReducedForm {
  Vector tau;
};

/// Per-signal joint probability matrices: m[i](k, j) = Pr[signal i, action k
/// has type j].
struct Signature {
  std::vector<Matrix> m;

  Index signals() const { return static_cast<Index>(m.size()); }
  Vector signal_probs() const;
};

struct BorderCheck {
  bool feasible = true;
  /// Types of the most violated prefix set, in tau-descending order.
  std::vector<Index> violating_set;
  double violation = 0.0;
};

/// Allocation probabilities per type profile: column k < n is "bidder k
/// wins", column n is "no allocation".
class AllocationRule {
public:
  AllocationRule(Index bidders, Index types, Matrix alloc);

  Index bidders() const { return indexer_.actions(); }
  Index types() const { return indexer_.radices().front(); }
  const ProfileIndexer& indexer() const { return indexer_; }
  const Matrix& alloc() const { return alloc_; }

  /// Entry (k, j) = Pr[bidder k wins | bidder k has type j].
  Matrix reduced_forms(const Vector& q) const;

private:
  ProfileIndexer indexer_;
  Matrix alloc_;
};

SSignatureSolution solve_s_signature(const IIDInstance& instance,
                                     const LpSolver& solver = default_lp_solver());

/// tau_j = x_j / q_j; types with q_j = 0 get tau_j = 0.
ReducedForm reduced_form(const SSignature& signature, const Vector& q);

/// Border's inequalities n sum_A q_j tau_j <= 1 - (1 - q(A))^n over the
/// prefix sets of types sorted by tau descending.
BorderCheck border_feasible(const ReducedForm& tau, const Vector& q, Index n,
                            double tolerance = 1e-10);

/// Explicit allocation rule with the given symmetric reduced form, by max flow
/// over all type profiles.
AllocationRule decompose_reduced_form(const ReducedForm& tau, const Vector& q, Index n,
                                      Index cap = kDefaultStateCap);

/// Joint signal/type matrices of a scheme on the expansion of instance.
Signature signature(const IIDInstance& instance, const DirectScheme& scheme);

/// Largest deviation of a signature from the pattern m[i] row i = x, other
/// rows = y.
double symmetry_defect(const Signature& sig, const SSignature& target);

/// Largest deviation from "row i of m[i] is the same vector for every i and
/// every other row is another common vector".
double symmetry_defect(const Signature& sig);

/// Uniformly random permutation of 0..n-1.
std::vector<Index> random_permutation(Index n, Rng& rng);

/// Signals for an i.i.d. instance from an allocation rule: relabel the
/// actions by a uniform permutation, let the rule pick a winner, and
/// recommend the winner's original label.
class SymmetricSignaler {
public:
  SymmetricSignaler(IIDInstance instance, SSignature signature, AllocationRule rule);

  const IIDInstance& instance() const { return instance_; }
  const SSignature& s_signature() const { return signature_; }

  Index sample(const std::vector<Index>& types, Rng& rng) const;

  /// Exact signal probabilities over the expansion (n <= 6).
  DirectScheme direct_scheme() const;

private:
  IIDInstance instance_;
  SSignature signature_;
  AllocationRule rule_;
};

SymmetricSignaler scheme_from_allocation(const IIDInstance& instance,
                                         const SSignature& signature,
                                         const AllocationRule& rule);

/// Full pipeline: s-signature LP, decomposition, symmetric signaler.
SymmetricSignaler solve_iid(const IIDInstance& instance,
                            const LpSolver& solver = default_lp_solver());

inline constexpr Index kMaxSymmetrizeActions = 6;

/// Average of a scheme over all action relabelings, materialized explicitly.
/// Throws TooLarge above kMaxSymmetrizeActions; use PermutedSampler instead.
DirectScheme symmetrize(const IIDInstance& instance, const DirectScheme& scheme);

/// Sampling form of symmetrize for any n.
class PermutedSampler {
public:
  PermutedSampler(const IIDInstance& instance, DirectScheme scheme);

  Index sample(const std::vector<Index>& types, Rng& rng) const;

private:
  ProfileIndexer indexer_;
  DirectScheme scheme_;
};

} // namespace persuasion

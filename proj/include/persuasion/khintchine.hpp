#pragma once

#include <persuasion/core.hpp>
#include <persuasion/lp.hpp>

namespace persuasion {

inline constexpr Index kMaxKhintchineBrute = 20;
inline constexpr Index kMaxKhintchineLp = 12;

/// Two-signal signature over n actions with types -1 (column 0) and +1
/// (column 1): plus(i, t) = Pr[signal +, action i has type t].
struct TwoSignalSignature {
  Matrix plus;
  Matrix minus;
};

struct KhintchineLpSolution {
  double value = 0.0;
  TwoSignalSignature witness;
  /// Probability of signal + for each sign vector (bit n-1-i of the index is
  /// set when action i has type +1).
  Vector phi_plus;
};

/// Average of |theta . a| over all sign vectors theta.
double khintchine_constant(const Vector& a);

KhintchineLpSolution solve_khintchine_lp(const Vector& a,
                                         const LpSolver& solver = default_lp_solver());

/// Signature of the two-signal scheme sending + with probability
/// phi_plus(theta) under the uniform prior.
TwoSignalSignature two_signal_signature(const Vector& phi_plus, Index n);

/// Membership in the polytope of realizable two-signal signatures that send
/// each signal with probability 1/2, decided by a feasibility LP.
bool membership_check(const TwoSignalSignature& m, Index n,
                      const LpSolver& solver = default_lp_solver());

} // namespace persuasion

#pragma once

#include <persuasion/core.hpp>
#include <persuasion/iid.hpp>

namespace persuasion::corpus {

/// Actions: 0 acquit, 1 convict. States: 0 innocent (2/3), 1 guilty (1/3).
ExplicitInstance prosecutor();

/// Two i.i.d. stocks with types L, M, H.
IIDInstance investor();

/// Receiver payoffs halved so every payoff lies in [-1, 1]; sender values are
/// unchanged.
ExplicitInstance investor_bounded();

/// Actions: 0 walk, 1 drive. States: 0 rainy, 1 sunny.
inline constexpr Index kWalk = 0;
inline constexpr Index kDrive = 1;
/// All mass on the rainy day.
ExplicitInstance rain_point(double delta = 0.1);
/// Rainy with probability 1 / (1 + 2 delta).
ExplicitInstance rain_shine(double delta = 0.1);

/// Three actions and three states; state k rewards the receiver for action k
/// and the sender always wants action 2. Priors (1 - 2d, 2d, 0) and
/// (1 - 2d, d, d).
ExplicitInstance three_action(double delta = 0.1);
ExplicitInstance three_action_prime(double delta = 0.1);

struct RandomShape {
  Index min_actions = 1;
  Index max_actions = 4;
  Index min_types = 1;
  Index max_types = 3;
  bool nonnegative = false;
};

Vector random_distribution(Index size, Rng& rng);
IIDInstance random_iid(Rng& rng, const RandomShape& shape = {});
IndependentInstance random_independent(Rng& rng, Index actions, Index max_types);
ExplicitInstance random_explicit(Rng& rng, Index states, Index actions);
DirectScheme random_scheme(Rng& rng, Index states, Index actions);

} // namespace persuasion::corpus

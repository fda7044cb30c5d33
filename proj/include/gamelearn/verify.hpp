#pragma once

// Equilibrium and structure verifiers: exhaustive computations on the payoff
// tensor, usable as ground truth for simulations and tests.

#include <vector>

#include "gamelearn/game.hpp"
#include "gamelearn/types.hpp"

namespace gamelearn {

// Maximizers of pi_i(. , s_{-i}); player i's own coordinate of s is ignored.
// Never empty.
std::vector<int> best_reply_set(const Game& g, int i, const PureProfile& s);

// True iff pi_i(s_i, s_{-i}) >= pi_i(k, s_{-i}) - eps for every k, where s_i
// is taken from s.
bool is_eps_best_reply(const Game& g, int i, const PureProfile& s, double eps);

bool is_pure_nash(const Game& g, const PureProfile& s, double eps = 0.0);

std::vector<PureProfile> pure_nash_profiles(const Game& g, double eps = 0.0);

// Every player's mixed action is within eps of her best pure deviation
// (pure deviations suffice: the mixed extension is linear in own play).
bool is_mixed_eps_nash(const Game& g, const MixedProfile& x, double eps);

// Membership via the internal-regret inequality system:
// for all i, j, j': sum_{s: s_i=j} q(s) (pi_i(j', s_{-i}) - pi_i(s)) <= eps.
bool is_correlated_eps_eq(const Game& g, const JointDistribution& q,
                          double eps);

// Smallest eps at which q passes the correlated-equilibrium inequalities:
// the maximum inequality left-hand side, floored at 0.
double min_ce_eps(const Game& g, const JointDistribution& q);

// Every nonempty proper subset K of players can change the payoff of some
// player outside K by a joint deviation. Exhaustive over subsets; refuses
// n > 20.
bool is_interdependent(const Game& g);

// No payoff ties among a player's own actions at any fixed opponents'
// profile: all pairs separated by more than tol.
bool is_generic(const Game& g, double tol);

double social_welfare(const Game& g, const PureProfile& s);

// max_i 16 m_i n / eps^2 * ln(m_i n / delta); requires n >= 2 and
// eps, delta in (0,1).
double ce_time_bound(int n, const std::vector<int>& m, double eps,
                     double delta);

}  // namespace gamelearn

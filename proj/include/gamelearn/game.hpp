#pragma once

// Finite normal-form games in dense payoff-tensor form.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "gamelearn/types.hpp"

namespace gamelearn {

// Immutable after construction; safe to share across threads.
//
// Payoffs are a (num_profiles x n) matrix. Row index is the flat profile
// index: profiles are ordered lexicographically with player 1's action
// varying fastest, so for a 2x2 game the rows are (1,1),(2,1),(1,2),(2,2).
class Game {
 public:
  Game(std::vector<int> actions, Eigen::MatrixXd payoffs,
       std::string name = "");

  int num_players() const { return static_cast<int>(m_.size()); }
  int num_actions(int i) const { return m_[i - 1]; }
  const std::vector<int>& action_counts() const { return m_; }
  long num_profiles() const { return static_cast<long>(payoffs_.rows()); }
  const std::string& name() const { return name_; }

  // M_i = max_s |pi_i(s)|, derived from the tensor.
  double payoff_bound(int i) const { return bound_(i - 1); }
  double max_payoff_bound() const { return bound_.maxCoeff(); }

  long flat_index(const PureProfile& s) const;
  PureProfile profile_at(long flat) const;
  long stride(int i) const { return stride_[i - 1]; }

  double payoff(int i, const PureProfile& s) const {
    return payoffs_(flat_index(s), i - 1);
  }
  double payoff_flat(int i, long flat) const { return payoffs_(flat, i - 1); }
  Eigen::VectorXd payoffs_at(const PureProfile& s) const {
    return payoffs_.row(flat_index(s));
  }

  // pi_i(k, s_{-i}) for k = 1..m_i; player i's own coordinate of s is
  // ignored. The overload writing into `out` performs no allocation.
  Eigen::VectorXd payoff_row(int i, const PureProfile& s) const;
  void payoff_row(int i, const PureProfile& s, Eigen::VectorXd& out) const;

  double expected_payoff(int i, const MixedProfile& x) const;

  const Eigen::MatrixXd& payoff_table() const { return payoffs_; }

  bool operator==(const Game& other) const;

 private:
  void check_profile(const PureProfile& s) const;

  std::vector<int> m_;
  std::vector<long> stride_;
  Eigen::MatrixXd payoffs_;
  Eigen::VectorXd bound_;
  std::string name_;
};

// -- Builtin games ------------------------------------------------------------

// Accepted names (hyphens and underscores interchangeable):
//   matching_pennies   2x2 zero-sum, row wins +1 on a match
//   entry_deterrence   bimatrix ((2,2),(0,0) ; (1,4),(1,4))
//   battle_of_sexes    coordination with opposed favorites
//   coordination       pure coordination, diagonal payoff 1
//   random(n,m1x..xmn,seed[,lo,hi])  i.i.d. uniform payoffs, redrawn until
//                                     generic at tolerance 1e-9
Game builtin_game(const std::string& spec);

Game random_game(int n, const std::vector<int>& m, std::uint64_t seed,
                 double lo = 0.0, double hi = 1.0);

// -- Game files ---------------------------------------------------------------

// JSON document with fields: "players" (int), "actions" (int list),
// "payoffs" (list of n-vectors, length prod m_i, flat-index order), and
// optional "name". Decimal payoffs up to 12 significant digits round-trip
// bit-exactly.
Game parse_game_text(const std::string& text,
                     const std::string& origin = "<string>");
std::string game_to_text(const Game& g);
Game load_game(const std::string& path);
void save_game(const Game& g, const std::string& path);

}  // namespace gamelearn

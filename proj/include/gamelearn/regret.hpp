#pragma once

// Regret bookkeeping: exact cumulative/internal tallies under full
// monitoring, the payoff-only importance-weighted estimator, and frame
// statistics for testing-style rules.

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "gamelearn/game.hpp"
#include "gamelearn/rng.hpp"
#include "gamelearn/types.hpp"

namespace gamelearn {

// Exact regrets for one player. Each update costs O(m_i): the cumulative
// vector needs one payoff row, and only row j = s_i^t of the internal matrix
// changes.
class RegretTally {
 public:
  RegretTally(int player, int num_actions);

  void update(const Game& g, const PureProfile& s);

  int player() const { return player_; }
  int num_actions() const { return m_; }
  long periods() const { return t_; }
  long plays(int j) const { return plays_(j - 1); }

  // r_{t,j} = sum_tau pi_i(j, s_{-i}^tau) - sum_tau pi_i(s^tau).
  double cumulative(int j) const { return alt_sum_(j - 1) - realized_sum_; }
  Eigen::VectorXd cumulative() const {
    return alt_sum_.array() - realized_sum_;
  }

  // R(j,k) = sum_{tau: s_i^tau=j} (pi_i(k, s_{-i}^tau) - pi_i(s^tau)).
  double internal(int j, int k) const { return internal_(j - 1, k - 1); }
  const Eigen::MatrixXd& internal() const { return internal_; }

  // R(j,k)/t; errors when t = 0.
  double avg_internal(int j, int k) const;
  Eigen::MatrixXd avg_internal() const;

 private:
  int player_;
  int m_;
  long t_ = 0;
  Eigen::VectorXd alt_sum_;
  double realized_sum_ = 0.0;
  Eigen::MatrixXd internal_;
  Eigen::VectorXi plays_;
  Eigen::VectorXd row_buf_;
};

// Importance-weighted internal-regret estimator driven only by own actions,
// own payoffs, and the mixed actions that generated them:
//   hat R(j,k) = (1/t) sum_{tau: a=k} (x_j/x_k) p  -  (1/t) sum_{tau: a=j} p.
class EstimatedRegret {
 public:
  explicit EstimatedRegret(int num_actions);

  // a: own realized action; p: own realized payoff; x: the mixed action the
  // period was sampled from. Components of x below 1e-12 are rejected
  // rather than allowed to blow up the importance weights.
  void update(int a, double p, const Eigen::VectorXd& x);

  int num_actions() const { return m_; }
  long periods() const { return t_; }

  // Exactly 0 when j == k; errors when t = 0.
  double estimate(int j, int k) const;
  Eigen::MatrixXd estimate() const;

 private:
  int m_;
  long t_ = 0;
  Eigen::MatrixXd weighted_;
  Eigen::VectorXd own_;
};

// Exploration schedule for one frame of a payoff-based testing rule:
// exactly g forced plays of each action, uniformly placed; slot value 0
// means "sample from the current mixed action".
class FrameSampler {
 public:
  // Samples the g*m forced positions without replacement and assigns the
  // action labels by shuffle, so all admissible schedules are equiprobable.
  // Memory is O(g*m) regardless of frame length. Requires 1 <= g and
  // g*m < T.
  FrameSampler(int num_actions, int g, long frame_length, RngStream& rng);

  int num_actions() const { return m_; }
  int g() const { return g_; }
  long frame_length() const { return frame_length_; }

  // tau in [0, T): 0 for free play, else the forced action.
  int slot(long tau) const;

  // hat r_h = (1/g) sum_{slot=h} p_tau - (1/(T-mg)) sum_{slot=0} p_tau.
  Eigen::VectorXd estimated_frame_regret(
      const Eigen::VectorXd& payoffs) const;

 private:
  int m_;
  int g_;
  long frame_length_;
  std::vector<std::pair<long, int>> slots_;  // sorted by position
};

// (1/T) sum over the frame of (pi_i(k, s_{-i}^tau) - pi_i(s^tau)) per k.
Eigen::VectorXd frame_avg_regret(const Game& g, int i,
                                 const std::vector<PureProfile>& frame);

}  // namespace gamelearn

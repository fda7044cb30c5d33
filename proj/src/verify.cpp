#include "gamelearn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "gamelearn/errors.hpp"

namespace gamelearn {

std::vector<int> best_reply_set(const Game& g, int i, const PureProfile& s) {
  Eigen::VectorXd row = g.payoff_row(i, s);
  double best = row.maxCoeff();
  std::vector<int> out;
  for (int k = 0; k < row.size(); ++k)
    if (row(k) == best) out.push_back(k + 1);
  return out;
}

bool is_eps_best_reply(const Game& g, int i, const PureProfile& s,
                       double eps) {
  if (eps < 0) throw InputError("is_eps_best_reply: eps must be >= 0");
  Eigen::VectorXd row = g.payoff_row(i, s);
  return row(s(i - 1) - 1) >= row.maxCoeff() - eps;
}

bool is_pure_nash(const Game& g, const PureProfile& s, double eps) {
  for (int i = 1; i <= g.num_players(); ++i)
    if (!is_eps_best_reply(g, i, s, eps)) return false;
  return true;
}

std::vector<PureProfile> pure_nash_profiles(const Game& g, double eps) {
  std::vector<PureProfile> out;
  for (long flat = 0; flat < g.num_profiles(); ++flat) {
    PureProfile s = g.profile_at(flat);
    if (is_pure_nash(g, s, eps)) out.push_back(s);
  }
  return out;
}

bool is_mixed_eps_nash(const Game& g, const MixedProfile& x, double eps) {
  if (eps < 0) throw InputError("is_mixed_eps_nash: eps must be >= 0");
  if (x.size() != static_cast<std::size_t>(g.num_players()))
    throw InputError("is_mixed_eps_nash: profile has wrong player count");
  for (int i = 1; i <= g.num_players(); ++i) {
    if (x[i - 1].size() != g.num_actions(i) || !is_distribution(x[i - 1]))
      throw InputError("is_mixed_eps_nash: invalid mixed action for player " +
                       std::to_string(i));
  }
  for (int i = 1; i <= g.num_players(); ++i) {
    // v(k) = pi_i(k, x_{-i}); the current payoff is x_i . v.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g.num_actions(i));
    Eigen::VectorXd row(g.num_actions(i));
    for (long flat = 0; flat < g.num_profiles(); ++flat) {
      PureProfile s = g.profile_at(flat);
      if (s(i - 1) != 1) continue;
      double weight = 1.0;
      for (int j = 1; j <= g.num_players(); ++j)
        if (j != i) weight *= x[j - 1](s(j - 1) - 1);
      if (weight == 0.0) continue;
      g.payoff_row(i, s, row);
      v += weight * row;
    }
    double current = x[i - 1].dot(v);
    if (current < v.maxCoeff() - eps) return false;
  }
  return true;
}

namespace {

// Largest left-hand side of the correlated-equilibrium inequalities.
double max_deviation_gain(const Game& g, const JointDistribution& q) {
  if (q.size() != g.num_profiles() || !is_distribution(q))
    throw InputError("correlated check: q is not a joint distribution");
  double worst = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd row;
  for (int i = 1; i <= g.num_players(); ++i) {
    int m = g.num_actions(i);
    // gain(j,k) accumulates sum_{s: s_i=j} q(s) (pi_i(k,s_{-i}) - pi_i(s)).
    Eigen::MatrixXd gain = Eigen::MatrixXd::Zero(m, m);
    for (long flat = 0; flat < g.num_profiles(); ++flat) {
      if (q(flat) == 0.0) continue;
      PureProfile s = g.profile_at(flat);
      g.payoff_row(i, s, row);
      int j = s(i - 1);
      double realized = row(j - 1);
      for (int k = 0; k < m; ++k)
        gain(j - 1, k) += q(flat) * (row(k) - realized);
    }
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (j != k && gain(j, k) > worst) worst = gain(j, k);
  }
  return worst;
}

}  // namespace

bool is_correlated_eps_eq(const Game& g, const JointDistribution& q,
                          double eps) {
  return max_deviation_gain(g, q) <= eps;
}

double min_ce_eps(const Game& g, const JointDistribution& q) {
  return std::max(0.0, max_deviation_gain(g, q));
}

bool is_interdependent(const Game& g) {
  int n = g.num_players();
  if (n > 20)
    throw InputError("is_interdependent: refusing n > 20 (exponential scan)");
  // K as a bitmask over players; for each K there must be a player outside K
  // whose payoff varies when only the K-coordinates change.
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    bool influenced = false;
    for (int i = 1; i <= n && !influenced; ++i) {
      if (mask & (1u << (i - 1))) continue;
      // Group profiles by their coordinates outside K; payoff variation
      // within a group means K influences player i there.
      std::unordered_map<long, double> seen;
      for (long flat = 0; flat < g.num_profiles(); ++flat) {
        PureProfile s = g.profile_at(flat);
        long key = 0;
        for (int j = 1; j <= n; ++j) {
          if (mask & (1u << (j - 1))) continue;
          key += (s(j - 1) - 1) * g.stride(j);
        }
        double value = g.payoff_flat(i, flat);
        auto [it, fresh] = seen.emplace(key, value);
        if (!fresh && it->second != value) {
          influenced = true;
          break;
        }
      }
    }
    if (!influenced) return false;
  }
  return true;
}

bool is_generic(const Game& g, double tol) {
  if (tol <= 0) throw InputError("is_generic: tol must be positive");
  Eigen::VectorXd row;
  for (int i = 1; i <= g.num_players(); ++i) {
    for (long flat = 0; flat < g.num_profiles(); ++flat) {
      PureProfile s = g.profile_at(flat);
      if (s(i - 1) != 1) continue;
      g.payoff_row(i, s, row);
      std::sort(row.begin(), row.end());
      for (int k = 0; k + 1 < row.size(); ++k)
        if (row(k + 1) - row(k) <= tol) return false;
    }
  }
  return true;
}

double social_welfare(const Game& g, const PureProfile& s) {
  return g.payoffs_at(s).sum();
}

double ce_time_bound(int n, const std::vector<int>& m, double eps,
                     double delta) {
  if (n < 2) throw InputError("ce_time_bound: n must be >= 2");
  if (static_cast<int>(m.size()) != n)
    throw InputError("ce_time_bound: one action count per player required");
  if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1))
    throw InputError("ce_time_bound: eps and delta must lie in (0,1)");
  double worst = 0.0;
  for (int mi : m) {
    if (mi < 2) throw InputError("ce_time_bound: every m_i must be >= 2");
    double value = 16.0 * mi * n / (eps * eps) * std::log(mi * n / delta);
    worst = std::max(worst, value);
  }
  return worst;
}

}  // namespace gamelearn

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gamelearn {

// Entry k-1 is the probability of action k; actions are 1-based throughout.
using MixedAction = Eigen::VectorXd;

// One mixed action per player, index 0 holding player 1's.
using MixedProfile = std::vector<MixedAction>;

// Probability per pure profile, indexed by flat profile index
// (player 1's action varies fastest).
using JointDistribution = Eigen::VectorXd;

// Component i-1 is player i's action in {1, ..., m_i}.
using PureProfile = Eigen::VectorXi;

inline constexpr double kDistributionTol = 1e-9;

// True iff v is entrywise nonnegative (within tol) and sums to 1 within tol.
inline bool is_distribution(const Eigen::VectorXd& v,
                            double tol = kDistributionTol) {
  if (v.size() == 0) return false;
  if (v.minCoeff() < -tol) return false;
  return std::abs(v.sum() - 1.0) <= tol;
}

}  // namespace gamelearn

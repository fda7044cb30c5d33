#include "gamelearn/regret.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

#include "gamelearn/errors.hpp"

namespace gamelearn {

RegretTally::RegretTally(int player, int num_actions)
    : player_(player), m_(num_actions) {
  if (player < 1) throw InputError("regret tally: player id must be >= 1");
  if (num_actions < 2)
    throw InputError("regret tally: needs at least 2 actions");
  alt_sum_ = Eigen::VectorXd::Zero(m_);
  internal_ = Eigen::MatrixXd::Zero(m_, m_);
  plays_ = Eigen::VectorXi::Zero(m_);
  row_buf_.resize(m_);
}

void RegretTally::update(const Game& g, const PureProfile& s) {
  g.payoff_row(player_, s, row_buf_);
  int j = s(player_ - 1);
  double realized = row_buf_(j - 1);
  alt_sum_ += row_buf_;
  realized_sum_ += realized;
  internal_.row(j - 1) += (row_buf_.array() - realized).matrix();
  plays_(j - 1) += 1;
  ++t_;
}

double RegretTally::avg_internal(int j, int k) const {
  if (t_ == 0) throw InputError("avg_internal: no periods recorded");
  return internal_(j - 1, k - 1) / static_cast<double>(t_);
}

Eigen::MatrixXd RegretTally::avg_internal() const {
  if (t_ == 0) throw InputError("avg_internal: no periods recorded");
  return internal_ / static_cast<double>(t_);
}

EstimatedRegret::EstimatedRegret(int num_actions) : m_(num_actions) {
  if (num_actions < 2)
    throw InputError("estimated regret: needs at least 2 actions");
  weighted_ = Eigen::MatrixXd::Zero(m_, m_);
  own_ = Eigen::VectorXd::Zero(m_);
}

void EstimatedRegret::update(int a, double p, const Eigen::VectorXd& x) {
  if (a < 1 || a > m_)
    throw InputError("estimated regret: action out of range");
  if (x.size() != m_)
    throw InputError("estimated regret: mixed action has wrong length");
  if (x.minCoeff() < 1e-12)
    throw InputError(
        "estimated regret: mixed-action component below 1e-12 would blow up "
        "the importance weights");
  weighted_.col(a - 1) += (x / x(a - 1)) * p;
  own_(a - 1) += p;
  ++t_;
}

double EstimatedRegret::estimate(int j, int k) const {
  if (t_ == 0) throw InputError("estimated regret: no periods recorded");
  return (weighted_(j - 1, k - 1) - own_(j - 1)) / static_cast<double>(t_);
}

Eigen::MatrixXd EstimatedRegret::estimate() const {
  if (t_ == 0) throw InputError("estimated regret: no periods recorded");
  return (weighted_.colwise() - own_) / static_cast<double>(t_);
}

FrameSampler::FrameSampler(int num_actions, int g, long frame_length,
                           RngStream& rng)
    : m_(num_actions), g_(g), frame_length_(frame_length) {
  if (num_actions < 2)
    throw InputError("frame sampler: needs at least 2 actions");
  if (g < 1) throw InputError("frame sampler: g must be >= 1");
  long k = static_cast<long>(g) * num_actions;
  if (k >= frame_length)
    throw InputError("frame sampler: g*m must be smaller than the frame");
  // Floyd's sampling: k distinct positions from [0, T), uniform over
  // subsets, in O(k) memory for any T.
  std::vector<long> pos;
  pos.reserve(k);
  std::unordered_set<long> chosen;
  chosen.reserve(2 * k);
  for (long j = frame_length - k; j < frame_length; ++j) {
    long r = static_cast<long>(rng.uniform_u64(static_cast<uint64_t>(j) + 1));
    if (chosen.insert(r).second)
      pos.push_back(r);
    else {
      chosen.insert(j);
      pos.push_back(j);
    }
  }
  std::sort(pos.begin(), pos.end());
  std::vector<int> labels;
  labels.reserve(k);
  for (int h = 1; h <= m_; ++h)
    for (int rep = 0; rep < g_; ++rep) labels.push_back(h);
  rng.shuffle(labels);
  slots_.reserve(k);
  for (long idx = 0; idx < k; ++idx) slots_.emplace_back(pos[idx], labels[idx]);
}

int FrameSampler::slot(long tau) const {
  if (tau < 0 || tau >= frame_length_)
    throw InputError("frame sampler: slot index out of range");
  auto it = std::lower_bound(
      slots_.begin(), slots_.end(), tau,
      [](const std::pair<long, int>& s, long v) { return s.first < v; });
  return (it != slots_.end() && it->first == tau) ? it->second : 0;
}

Eigen::VectorXd FrameSampler::estimated_frame_regret(
    const Eigen::VectorXd& payoffs) const {
  long T = frame_length_;
  if (payoffs.size() != T)
    throw InputError("estimated frame regret: payoff count != frame length");
  Eigen::VectorXd forced = Eigen::VectorXd::Zero(m_);
  double base = 0.0;
  std::size_t cur = 0;
  for (long tau = 0; tau < T; ++tau) {
    int u = 0;
    if (cur < slots_.size() && slots_[cur].first == tau) u = slots_[cur++].second;
    if (u == 0)
      base += payoffs(tau);
    else
      forced(u - 1) += payoffs(tau);
  }
  double base_mean = base / static_cast<double>(T - m_ * g_);
  return forced / static_cast<double>(g_) -
         Eigen::VectorXd::Constant(m_, base_mean);
}

Eigen::VectorXd frame_avg_regret(const Game& g, int i,
                                 const std::vector<PureProfile>& frame) {
  if (frame.empty()) throw InputError("frame_avg_regret: empty frame");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(g.num_actions(i));
  Eigen::VectorXd row(g.num_actions(i));
  for (const PureProfile& s : frame) {
    g.payoff_row(i, s, row);
    sum += (row.array() - row(s(i - 1) - 1)).matrix();
  }
  return sum / static_cast<double>(frame.size());
}

}  // namespace gamelearn

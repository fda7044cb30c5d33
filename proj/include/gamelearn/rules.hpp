#pragma once

// Learning rules behind one interface. Each rule declares its information
// class; the class determines exactly what the engine feeds it per period:
//   kUncoupled            the realized profile (and the rule may hold the
//                         game to evaluate its own payoff function),
//   kCompletelyUncoupled  own realized action and own realized payoff only
//                         (such rules are constructed without the game).

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamelearn/game.hpp"
#include "gamelearn/regret.hpp"
#include "gamelearn/rng.hpp"
#include "gamelearn/types.hpp"

namespace gamelearn {

enum class FeedbackKind { kUncoupled, kCompletelyUncoupled };

// One period's observation. `profile` is set iff kind == kUncoupled.
struct Feedback {
  FeedbackKind kind = FeedbackKind::kUncoupled;
  const PureProfile* profile = nullptr;
  int own_action = 0;
  double own_payoff = 0.0;
};

class Rule {
 public:
  virtual ~Rule() = default;

  virtual FeedbackKind feedback_kind() const = 0;

  // Mixed action for the coming period; always a valid distribution. The
  // reference stays valid until the next observe().
  virtual const MixedAction& next_action() = 0;

  // Feeds the observation for the period just played. Rejects feedback whose
  // information class does not match feedback_kind(), and completely
  // uncoupled feedback that carries a profile.
  void observe(const Feedback& fb);

  // Short state tag for trace annotation columns; "" when silent.
  virtual std::string annotation() const { return {}; }

  // True when the just-observed period ended a frame, changed a mood, froze
  // the rule, or similar; thinned recording keeps these periods.
  virtual bool event() const { return false; }

 protected:
  virtual void on_observe(const Feedback& fb) = 0;
};

// -- Frame instrumentation ----------------------------------------------------

// One frame's outcome for testing-style rules (exact or estimated regrets).
struct FrameRecord {
  long frame = 0;  // 1-based, counted over the whole run
  int level = 0;   // annealing regime; 0 for fixed-parameter rules
  Eigen::VectorXd avg_regret;
  Eigen::VectorXd x;  // mixed action used during the frame
  // 0 keep, 1 regret-triggered global redraw, 2 lambda-triggered global
  // redraw, 3 localized redraw.
  int redraw = 0;
};

// -- Regret Matching ------------------------------------------------------------

// Uncoupled. Switches from the current action j to k with probability
// [avg internal regret(j,k)]+ / mu; the remainder stays on j.
class RegretMatchingRule : public Rule {
 public:
  // Requires mu > 2 M_i (m_i - 1), which keeps the stay probability
  // positive.
  RegretMatchingRule(const Game& g, int player, double mu, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kUncoupled;
  }
  const MixedAction& next_action() override { return x_; }
  const RegretTally& tally() const { return tally_; }

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  const Game* game_;
  int player_;
  double mu_;
  double stay_floor_;  // 1 - (m-1) 2M/mu, asserted each step
  RegretTally tally_;
  RngStream rng_;
  MixedAction x_;
};

// -- Modified Regret Matching ---------------------------------------------------

// Completely uncoupled Regret Matching on the importance-weighted estimator,
// with exploration floor delta/(m t^gamma) on off-actions.
class ModifiedRegretMatchingRule : public Rule {
 public:
  // gamma in (0, 1/4); delta in (0, 1]; mu must exceed 2 M_i m_i (checked by
  // the factory, which knows the game; direct callers pass a valid value).
  ModifiedRegretMatchingRule(int num_actions, double mu, double gamma,
                             double delta, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kCompletelyUncoupled;
  }
  const MixedAction& next_action() override { return x_; }
  const EstimatedRegret& estimator() const { return est_; }

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  int m_;
  double mu_, gamma_, delta_;
  EstimatedRegret est_;
  RngStream rng_;
  MixedAction x_;
};

// -- Experimental Regret Testing --------------------------------------------------

// Uncoupled. Holds a mixed action for T-period frames; redraws uniformly
// when any frame-average regret reaches rho, else redraws with probability
// lambda. lambda = 0 recovers plain Regret Testing.
class ErtRule : public Rule {
 public:
  ErtRule(const Game& g, int player, long frame_length, double rho,
          double lambda, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kUncoupled;
  }
  const MixedAction& next_action() override { return x_; }
  std::string annotation() const override;
  bool event() const override { return frame_just_ended_; }
  const std::vector<FrameRecord>& frame_log() const { return log_; }

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  const Game* game_;
  int player_;
  long frame_length_;
  double rho_, lambda_;
  RngStream rng_;
  MixedAction x_;
  Eigen::VectorXd regret_sum_;
  Eigen::VectorXd row_buf_;
  long in_frame_ = 0;
  long frames_done_ = 0;
  bool frame_just_ended_ = false;
  std::vector<FrameRecord> log_;
};

// -- ALERT ----------------------------------------------------------------------

// Annealing schedule for regime l: eps = 2^-l, lambda = eps^l,
// rho = lambda + eps, T = ceil(l (-ln lambda) / (2 lambda^2)),
// M = 2 ceil(ln(2/eps) / ln(1/(1-lambda))).
struct AlertRegime {
  int level = 0;
  double eps = 0;
  double lambda = 0;
  double rho = 0;
  // Integer-valued but kept as double: T exceeds 2^53 from l = 5 and M from
  // l = 13; runs never get there, loop counters clamp.
  double frame_periods = 0;
  double frames = 0;
  // rho < eps^(2/3): the global/localized regret bands are ordered. False
  // only at l = 1, where the middle band is empty and naturally skipped.
  bool band_ordered = false;
};

// Valid for 1 <= level <= 20.
AlertRegime alert_regime(int level);

namespace detail {

// Regime state + the 3a-3c frame decision, shared by the exact-regret and
// payoff-based variants.
class AlertCore {
 public:
  explicit AlertCore(int num_actions, RngStream* rng);

  // Applies one frame's decision; returns the redraw code (FrameRecord
  // semantics) and advances the regime after its M_l-th frame.
  int decide(const Eigen::VectorXd& regrets);

  const AlertRegime& regime() const { return regime_; }
  long frame_length() const { return frame_length_; }
  const MixedAction& x() const { return x_; }
  const MixedAction& anchor() const { return anchor_; }
  bool had_global_redraw() const { return had_global_; }

 private:
  void clamp_frame_length();

  int m_;
  RngStream* rng_;
  AlertRegime regime_;
  long frame_length_ = 0;
  double frames_done_ = 0;
  bool had_global_ = false;
  MixedAction x_;
  MixedAction anchor_;  // x^[l]: the action carried into the current regime
};

}  // namespace detail

// Uncoupled ALERT: Experimental Regret Testing with annealed parameters and
// localized middle-band redraws inside D_inf(anchor, sqrt(eps_l)).
class AlertRule : public Rule {
 public:
  AlertRule(const Game& g, int player, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kUncoupled;
  }
  const MixedAction& next_action() override { return x_; }
  std::string annotation() const override;
  bool event() const override { return frame_just_ended_; }
  const std::vector<FrameRecord>& frame_log() const { return log_; }
  const AlertRegime& regime() const { return core_.regime(); }

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  const Game* game_;
  int player_;
  RngStream rng_;
  detail::AlertCore core_;
  MixedAction x_;
  Eigen::VectorXd regret_sum_;
  Eigen::VectorXd row_buf_;
  long in_frame_ = 0;
  long frames_done_ = 0;
  bool frame_just_ended_ = false;
  std::vector<FrameRecord> log_;
};

// Completely uncoupled ALERT: frame regrets are estimated from forced
// exploration slots (g per action per frame). When a regime's frames are too
// short for g m <= T/2, the per-regime sample count shrinks to fit; with no
// capacity at all the frame yields zero estimated regret (only the lambda
// branch can fire).
class PayoffAlertRule : public Rule {
 public:
  PayoffAlertRule(int num_actions, int samples_per_action, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kCompletelyUncoupled;
  }
  const MixedAction& next_action() override;
  std::string annotation() const override;
  bool event() const override { return frame_just_ended_; }
  const std::vector<FrameRecord>& frame_log() const { return log_; }
  const AlertRegime& regime() const { return core_.regime(); }

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  void start_frame();

  int m_;
  int g_param_;
  RngStream rng_;
  detail::AlertCore core_;
  MixedAction x_;
  MixedAction forced_;  // point mass returned at exploration slots
  std::optional<FrameSampler> sampler_;
  Eigen::VectorXd forced_sum_;
  double base_sum_ = 0.0;
  long in_frame_ = 0;
  long frames_done_ = 0;
  bool frame_just_ended_ = false;
  std::vector<FrameRecord> log_;
};

// -- Simple pure-equilibrium rules -------------------------------------------------

// Uncoupled. Odd periods randomize uniformly; even periods play 1 iff the
// previous period's own payoff was a best-reply payoff, else 2; an even
// period of all-ones freezes everyone on their last odd-period action.
class SimplePureRule : public Rule {
 public:
  SimplePureRule(const Game& g, int player, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kUncoupled;
  }
  const MixedAction& next_action() override;
  std::string annotation() const override { return frozen_ ? "frozen" : ""; }
  bool event() const override { return froze_now_; }
  bool frozen() const { return frozen_; }
  long freeze_time() const { return freeze_time_; }

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  const Game* game_;
  int player_;
  RngStream rng_;
  MixedAction x_;
  MixedAction uniform_;
  Eigen::VectorXd row_buf_;
  PureProfile prev_;
  long t_ = 1;
  int last_odd_ = 0;
  bool frozen_ = false;
  bool froze_now_ = false;
  long freeze_time_ = 0;
};

// Uncoupled, stationary, 2-recall: repeat after two identical periods in
// which the own action was a best reply; otherwise uniform.
class TwoRecallRule : public Rule {
 public:
  TwoRecallRule(const Game& g, int player, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kUncoupled;
  }
  const MixedAction& next_action() override;

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  const Game* game_;
  int player_;
  RngStream rng_;
  MixedAction x_;
  MixedAction uniform_;
  Eigen::VectorXd row_buf_;
  PureProfile prev1_, prev2_;
  long t_ = 1;
};

// -- Trial-and-Error learning --------------------------------------------------

// phi(a, b) = clamp(p a - q b + c, lo, hi); p, q > 0 and 0 < lo <= hi < 1,
// so it is monotone in the right directions with range inside (0, 1).
class PhiFunction {
 public:
  PhiFunction(double p, double q, double c, double lo, double hi);

  double operator()(double a, double b) const;

  double p() const { return p_; }
  double q() const { return q_; }
  double c() const { return c_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double p_, q_, c_, lo_, hi_;
};

enum class Mood { kContent, kWatchful, kHopeful, kDiscontent };

char mood_letter(Mood m);

struct MoodState {
  Mood mood = Mood::kContent;
  int benchmark_action = 1;
  double benchmark_payoff = 0.0;
};

// One mood-machine transition. `played` and `payoff` are the realized own
// action and payoff; `accept` resolves the discontent acceptance draw (the
// caller evaluates phi and flips the coin) and is ignored on all other rows.
MoodState trial_error_transition(const MoodState& z, int played, double payoff,
                                 bool accept);

// Completely uncoupled. Content players experiment with probability eps
// (uniform over the non-benchmark actions); discontent players search
// uniformly and resettle with probability phi(payoff, benchmark).
class TrialErrorRule : public Rule {
 public:
  TrialErrorRule(int num_actions, double eps, PhiFunction phi, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kCompletelyUncoupled;
  }
  const MixedAction& next_action() override;
  std::string annotation() const override;
  bool event() const override { return mood_changed_; }
  const MoodState& state() const { return state_; }

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  int m_;
  double eps_;
  PhiFunction phi_;
  RngStream rng_;
  MixedAction x_;
  MoodState state_;
  bool benchmark_set_ = false;
  bool mood_changed_ = false;
};

// -- Fictitious play -------------------------------------------------------------

inline constexpr double kArgmaxTieTol = 1e-9;

// Argmax over accumulated alternative payoffs; ties within kArgmaxTieTol of
// the maximum are broken uniformly at random. Returns a 1-based action.
int argmax_action(const Eigen::VectorXd& scores, RngStream& rng);

// Best reply to the opponents' empirical play so far; uniform random on an
// empty history. Returns a 1-based action.
int fictitious_play_step(const Game& g, int i,
                         const std::vector<PureProfile>& history,
                         RngStream& rng);

// Uncoupled. Plays the pure best reply to the opponents' empirical
// distribution; period 1 and ties are uniform random.
class FictitiousPlayRule : public Rule {
 public:
  FictitiousPlayRule(const Game& g, int player, RngStream rng);

  FeedbackKind feedback_kind() const override {
    return FeedbackKind::kUncoupled;
  }
  const MixedAction& next_action() override;

 protected:
  void on_observe(const Feedback& fb) override;

 private:
  const Game* game_;
  int player_;
  RngStream rng_;
  MixedAction x_;
  Eigen::VectorXd alt_sum_;
  Eigen::VectorXd row_buf_;
  long t_ = 1;
  bool fresh_ = false;
};

// -- Rule specification strings ----------------------------------------------------

// Textual form: name or name[key=value,...]. A value may span several
// comma-separated numbers (e.g. trial-error[eps=0.01,phi=0.6,0.1,0.05,0.01,
// 0.99]); tokens without '=' extend the previous key's value list.
struct RuleSpec {
  std::string name;
  std::vector<std::pair<std::string, std::vector<std::string>>> params;
};

RuleSpec parse_rule_spec(const std::string& text);

// Splits a comma-separated rule list at top level (commas inside brackets
// bind to their rule).
std::vector<std::string> split_rule_list(const std::string& text);

// Known rule names: regret-matching, modified-rm, ert, alert, payoff-alert,
// simple-pure, two-recall, trial-error, fictitious (hyphens and underscores
// interchangeable). Omitted parameters take documented defaults; mu=auto
// resolves to 2 M_i m_i + 1. If `effective` is non-null it receives the
// canonical spec with all defaults resolved.
std::unique_ptr<Rule> make_rule(const std::string& spec, const Game& g,
                                int player, RngStream rng,
                                std::string* effective = nullptr);

}  // namespace gamelearn

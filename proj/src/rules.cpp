#include "gamelearn/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "gamelearn/errors.hpp"

namespace gamelearn {

namespace {

MixedAction delta_on(int m, int action) {
  MixedAction x = MixedAction::Zero(m);
  x(action - 1) = 1.0;
  return x;
}

MixedAction uniform_over(int m) {
  return MixedAction::Constant(m, 1.0 / static_cast<double>(m));
}

// Shortest round-trippable decimal form, for effective-spec echoes.
std::string fmt_num(double v) {
  char buf[64];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

void Rule::observe(const Feedback& fb) {
  if (fb.kind != feedback_kind())
    throw InputError("feedback information class does not match the rule");
  if (fb.kind == FeedbackKind::kUncoupled && fb.profile == nullptr)
    throw InputError("uncoupled feedback requires the realized profile");
  if (fb.kind == FeedbackKind::kCompletelyUncoupled && fb.profile != nullptr)
    throw InputError(
        "completely uncoupled feedback must not carry the profile");
  on_observe(fb);
}

// -- Regret Matching ------------------------------------------------------------

RegretMatchingRule::RegretMatchingRule(const Game& g, int player, double mu,
                                       RngStream rng)
    : game_(&g),
      player_(player),
      mu_(mu),
      tally_(player, g.num_actions(player)),
      rng_(std::move(rng)) {
  int m = g.num_actions(player);
  double M = g.payoff_bound(player);
  if (!(mu > 2.0 * M * (m - 1)))
    throw InputError("regret matching: mu must exceed 2*M*(m-1) = " +
                     fmt_num(2.0 * M * (m - 1)));
  stay_floor_ = 1.0 - (m - 1) * 2.0 * M / mu_;
  x_ = rng_.uniform_simplex(m);
}

void RegretMatchingRule::on_observe(const Feedback& fb) {
  tally_.update(*game_, *fb.profile);
  int m = tally_.num_actions();
  int j = fb.own_action;
  double t = static_cast<double>(tally_.periods());
  double off_mass = 0.0;
  for (int k = 1; k <= m; ++k) {
    if (k == j) continue;
    double p = std::max(0.0, tally_.internal(j, k) / t) / mu_;
    x_(k - 1) = p;
    off_mass += p;
  }
  double stay = 1.0 - off_mass;
  if (stay < stay_floor_ - 1e-12)
    throw std::logic_error("regret matching: stay probability fell below "
                           "its guaranteed floor");
  x_(j - 1) = stay;
}

// -- Modified Regret Matching ---------------------------------------------------

ModifiedRegretMatchingRule::ModifiedRegretMatchingRule(int num_actions,
                                                       double mu, double gamma,
                                                       double delta,
                                                       RngStream rng)
    : m_(num_actions),
      mu_(mu),
      gamma_(gamma),
      delta_(delta),
      est_(num_actions),
      rng_(std::move(rng)) {
  if (!(mu > 0)) throw InputError("modified regret matching: mu must be > 0");
  if (!(gamma > 0.0 && gamma < 0.25))
    throw InputError("modified regret matching: gamma must lie in (0, 1/4)");
  if (!(delta > 0.0 && delta <= 1.0))
    throw InputError("modified regret matching: delta must lie in (0, 1]");
  x_ = rng_.uniform_simplex(m_);
}

void ModifiedRegretMatchingRule::on_observe(const Feedback& fb) {
  est_.update(fb.own_action, fb.own_payoff, x_);
  int j = fb.own_action;
  double t = static_cast<double>(est_.periods());
  double tg = std::pow(t, gamma_);
  double shrink = 1.0 - delta_ / tg;
  double floor = delta_ / (m_ * tg);
  double cap = 1.0 / m_;
  double off_mass = 0.0;
  for (int k = 1; k <= m_; ++k) {
    if (k == j) continue;
    double body = std::min(std::max(0.0, est_.estimate(j, k)) / mu_, cap);
    double p = shrink * body + floor;
    x_(k - 1) = p;
    off_mass += p;
  }
  x_(j - 1) = 1.0 - off_mass;  // >= 1/m by construction
}

// -- Experimental Regret Testing --------------------------------------------------

ErtRule::ErtRule(const Game& g, int player, long frame_length, double rho,
                 double lambda, RngStream rng)
    : game_(&g),
      player_(player),
      frame_length_(frame_length),
      rho_(rho),
      lambda_(lambda),
      rng_(std::move(rng)) {
  if (frame_length < 1)
    throw InputError("regret testing: frame length must be >= 1");
  if (!(rho > 0)) throw InputError("regret testing: rho must be > 0");
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw InputError("regret testing: lambda must lie in [0, 1)");
  int m = g.num_actions(player);
  x_ = rng_.uniform_simplex(m);
  regret_sum_ = Eigen::VectorXd::Zero(m);
  row_buf_.resize(m);
}

void ErtRule::on_observe(const Feedback& fb) {
  game_->payoff_row(player_, *fb.profile, row_buf_);
  double realized = row_buf_(fb.own_action - 1);
  regret_sum_ += (row_buf_.array() - realized).matrix();
  frame_just_ended_ = (++in_frame_ == frame_length_);
  if (!frame_just_ended_) return;

  Eigen::VectorXd avg = regret_sum_ / static_cast<double>(frame_length_);
  Eigen::VectorXd x_used = x_;
  int code = 0;
  if (avg.maxCoeff() >= rho_) {
    x_ = rng_.uniform_simplex(static_cast<int>(x_.size()));
    code = 1;
  } else if (lambda_ > 0.0 && rng_.bernoulli(lambda_)) {
    x_ = rng_.uniform_simplex(static_cast<int>(x_.size()));
    code = 2;
  }
  ++frames_done_;
  log_.push_back({frames_done_, 0, std::move(avg), std::move(x_used), code});
  regret_sum_.setZero();
  in_frame_ = 0;
}

std::string ErtRule::annotation() const {
  if (!frame_just_ended_) return {};
  static const char* kTag[] = {"keep", "regret", "lambda", "local"};
  std::ostringstream out;
  out << 'f' << frames_done_ << ':' << kTag[log_.back().redraw];
  return out.str();
}

// -- ALERT ----------------------------------------------------------------------

AlertRegime alert_regime(int level) {
  if (level < 1 || level > 20)
    throw InputError("alert regime level must lie in [1, 20]");
  AlertRegime r;
  r.level = level;
  r.eps = std::pow(2.0, -level);
  r.lambda = std::pow(r.eps, level);  // 2^(-level^2), exact in a double
  r.rho = r.lambda + r.eps;
  r.frame_periods =
      std::ceil(level * -std::log(r.lambda) / (2.0 * r.lambda * r.lambda));
  r.frames =
      2.0 * std::ceil(std::log(2.0 / r.eps) / std::log(1.0 / (1.0 - r.lambda)));
  r.band_ordered = r.rho < std::pow(r.eps, 2.0 / 3.0);
  return r;
}

namespace detail {
namespace {

// Uniform draw from D_inf(center, radius) intersected with the simplex:
// rejection from the flat simplex measure, with a clip-and-renormalize
// fallback after 100 misses (can land slightly outside the ball; always a
// valid distribution).
MixedAction redraw_in_ball(const MixedAction& center, double radius,
                           RngStream& rng) {
  int m = static_cast<int>(center.size());
  for (int attempt = 0; attempt < 100; ++attempt) {
    MixedAction y = rng.uniform_simplex(m);
    if ((y - center).cwiseAbs().maxCoeff() <= radius) return y;
  }
  Eigen::ArrayXd y = rng.uniform_simplex(m).array();
  Eigen::ArrayXd lo = (center.array() - radius).max(0.0);
  Eigen::ArrayXd hi = center.array() + radius;
  y = y.max(lo).min(hi);
  return (y / y.sum()).matrix();
}

}  // namespace

AlertCore::AlertCore(int num_actions, RngStream* rng)
    : m_(num_actions), rng_(rng), regime_(alert_regime(1)) {
  x_ = rng_->uniform_simplex(m_);
  anchor_ = x_;
  clamp_frame_length();
}

void AlertCore::clamp_frame_length() {
  constexpr double kMax = 9.0e18;
  frame_length_ = static_cast<long>(std::min(regime_.frame_periods, kMax));
}

int AlertCore::decide(const Eigen::VectorXd& regrets) {
  double rbar = regrets.maxCoeff();
  double eps23 = std::pow(regime_.eps, 2.0 / 3.0);
  int code = 0;
  if (rbar >= eps23) {
    x_ = rng_->uniform_simplex(m_);
    had_global_ = true;
    code = 1;
  } else if (rbar >= regime_.rho) {
    // Unreachable when rho >= eps23 (level 1): the middle band is empty.
    if (had_global_) {
      x_ = rng_->uniform_simplex(m_);
      code = 1;
    } else {
      x_ = redraw_in_ball(anchor_, std::sqrt(regime_.eps), *rng_);
      code = 3;
    }
  } else if (rng_->bernoulli(regime_.lambda)) {
    x_ = rng_->uniform_simplex(m_);
    had_global_ = true;
    code = 2;
  }
  frames_done_ += 1.0;
  if (frames_done_ >= regime_.frames) {
    regime_ = alert_regime(regime_.level + 1);
    anchor_ = x_;  // the action carried into the new regime
    had_global_ = false;
    frames_done_ = 0.0;
    clamp_frame_length();
  }
  return code;
}

}  // namespace detail

AlertRule::AlertRule(const Game& g, int player, RngStream rng)
    : game_(&g),
      player_(player),
      rng_(std::move(rng)),
      core_(g.num_actions(player), &rng_) {
  int m = g.num_actions(player);
  x_ = core_.x();
  regret_sum_ = Eigen::VectorXd::Zero(m);
  row_buf_.resize(m);
}

void AlertRule::on_observe(const Feedback& fb) {
  game_->payoff_row(player_, *fb.profile, row_buf_);
  double realized = row_buf_(fb.own_action - 1);
  regret_sum_ += (row_buf_.array() - realized).matrix();
  frame_just_ended_ = (++in_frame_ == core_.frame_length());
  if (!frame_just_ended_) return;

  Eigen::VectorXd avg = regret_sum_ / static_cast<double>(core_.frame_length());
  int level = core_.regime().level;
  Eigen::VectorXd x_used = x_;
  int code = core_.decide(avg);
  x_ = core_.x();
  ++frames_done_;
  log_.push_back({frames_done_, level, std::move(avg), std::move(x_used), code});
  regret_sum_.setZero();
  in_frame_ = 0;
}

std::string AlertRule::annotation() const {
  if (!frame_just_ended_) return {};
  static const char* kTag[] = {"keep", "global", "lambda", "local"};
  std::ostringstream out;
  out << 'l' << log_.back().level << 'f' << frames_done_ << ':'
      << kTag[log_.back().redraw];
  return out.str();
}

// -- Payoff-based ALERT -----------------------------------------------------------

PayoffAlertRule::PayoffAlertRule(int num_actions, int samples_per_action,
                                 RngStream rng)
    : m_(num_actions),
      g_param_(samples_per_action),
      rng_(std::move(rng)),
      core_(num_actions, &rng_) {
  if (samples_per_action < 1)
    throw InputError("payoff alert: samples per action must be >= 1");
  x_ = core_.x();
  forced_ = delta_on(m_, 1);
  forced_sum_ = Eigen::VectorXd::Zero(m_);
  start_frame();
}

void PayoffAlertRule::start_frame() {
  long T = core_.frame_length();
  long cap = T / (2L * m_);  // keeps g*m <= T/2
  int g_eff = static_cast<int>(
      std::min<long>(static_cast<long>(g_param_), cap));
  if (g_eff >= 1)
    sampler_.emplace(m_, g_eff, T, rng_);
  else
    sampler_.reset();
  forced_sum_.setZero();
  base_sum_ = 0.0;
  in_frame_ = 0;
}

const MixedAction& PayoffAlertRule::next_action() {
  if (sampler_) {
    int u = sampler_->slot(in_frame_);
    if (u > 0) {
      forced_.setZero();
      forced_(u - 1) = 1.0;
      return forced_;
    }
  }
  return x_;
}

void PayoffAlertRule::on_observe(const Feedback& fb) {
  int u = sampler_ ? sampler_->slot(in_frame_) : 0;
  if (u > 0)
    forced_sum_(u - 1) += fb.own_payoff;
  else
    base_sum_ += fb.own_payoff;
  frame_just_ended_ = (++in_frame_ == core_.frame_length());
  if (!frame_just_ended_) return;

  long T = core_.frame_length();
  Eigen::VectorXd est;
  if (sampler_) {
    double g = static_cast<double>(sampler_->g());
    double base_count = static_cast<double>(T - m_ * sampler_->g());
    est = forced_sum_ / g -
          Eigen::VectorXd::Constant(m_, base_sum_ / base_count);
  } else {
    est = Eigen::VectorXd::Zero(m_);
  }
  int level = core_.regime().level;
  Eigen::VectorXd x_used = x_;
  int code = core_.decide(est);
  x_ = core_.x();
  ++frames_done_;
  log_.push_back({frames_done_, level, std::move(est), std::move(x_used), code});
  start_frame();
}

std::string PayoffAlertRule::annotation() const {
  if (!frame_just_ended_) return {};
  static const char* kTag[] = {"keep", "global", "lambda", "local"};
  std::ostringstream out;
  out << 'l' << log_.back().level << 'f' << frames_done_ << ':'
      << kTag[log_.back().redraw];
  return out.str();
}

// -- Simple pure-equilibrium rules --------------------------------------------------

SimplePureRule::SimplePureRule(const Game& g, int player, RngStream rng)
    : game_(&g), player_(player), rng_(std::move(rng)) {
  int m = g.num_actions(player);
  uniform_ = uniform_over(m);
  x_ = uniform_;
  row_buf_.resize(m);
}

const MixedAction& SimplePureRule::next_action() {
  if (frozen_) return x_;
  if (t_ % 2 == 1) return uniform_;
  // Even period: 1 iff yesterday's own payoff was a best-reply payoff.
  game_->payoff_row(player_, prev_, row_buf_);
  double own = row_buf_(prev_(player_ - 1) - 1);
  int choice = (own >= row_buf_.maxCoeff()) ? 1 : 2;
  x_.setZero();
  x_(choice - 1) = 1.0;
  return x_;
}

void SimplePureRule::on_observe(const Feedback& fb) {
  froze_now_ = false;
  if (frozen_) {
    ++t_;
    return;
  }
  if (t_ % 2 == 1) {
    last_odd_ = fb.own_action;
  } else if ((fb.profile->array() == 1).all()) {
    frozen_ = true;
    froze_now_ = true;
    freeze_time_ = t_;
    x_.setZero();
    x_(last_odd_ - 1) = 1.0;
  }
  prev_ = *fb.profile;
  ++t_;
}

TwoRecallRule::TwoRecallRule(const Game& g, int player, RngStream rng)
    : game_(&g), player_(player), rng_(std::move(rng)) {
  int m = g.num_actions(player);
  uniform_ = uniform_over(m);
  x_ = uniform_;
  row_buf_.resize(m);
}

const MixedAction& TwoRecallRule::next_action() {
  if (t_ <= 2) return uniform_;
  if ((prev1_.array() == prev2_.array()).all()) {
    int own = prev1_(player_ - 1);
    game_->payoff_row(player_, prev1_, row_buf_);
    if (row_buf_(own - 1) >= row_buf_.maxCoeff()) {
      x_.setZero();
      x_(own - 1) = 1.0;
      return x_;
    }
  }
  return uniform_;
}

void TwoRecallRule::on_observe(const Feedback& fb) {
  prev2_ = prev1_;
  prev1_ = *fb.profile;
  ++t_;
}

// -- Trial-and-Error learning --------------------------------------------------

PhiFunction::PhiFunction(double p, double q, double c, double lo, double hi)
    : p_(p), q_(q), c_(c), lo_(lo), hi_(hi) {
  if (!(p > 0) || !(q > 0))
    throw InputError("phi: p and q must be positive");
  if (!(lo > 0.0 && lo <= hi && hi < 1.0))
    throw InputError("phi: bounds must satisfy 0 < lo <= hi < 1");
}

double PhiFunction::operator()(double a, double b) const {
  return std::clamp(p_ * a - q_ * b + c_, lo_, hi_);
}

char mood_letter(Mood m) {
  switch (m) {
    case Mood::kContent:
      return 'c';
    case Mood::kWatchful:
      return 'w';
    case Mood::kHopeful:
      return 'h';
    case Mood::kDiscontent:
      return 'd';
  }
  return '?';
}

MoodState trial_error_transition(const MoodState& z, int played, double payoff,
                                 bool accept) {
  MoodState next = z;
  switch (z.mood) {
    case Mood::kContent:
      if (played != z.benchmark_action) {
        if (payoff > z.benchmark_payoff) {
          next.benchmark_action = played;  // successful experiment
          next.benchmark_payoff = payoff;
        }
        // else: failed experiment, benchmarks stand.
      } else if (payoff < z.benchmark_payoff) {
        next.mood = Mood::kWatchful;
      } else if (payoff > z.benchmark_payoff) {
        next.mood = Mood::kHopeful;
      }
      break;
    case Mood::kWatchful:
      if (payoff < z.benchmark_payoff)
        next.mood = Mood::kDiscontent;
      else if (payoff == z.benchmark_payoff)
        next.mood = Mood::kContent;
      else
        next.mood = Mood::kHopeful;
      break;
    case Mood::kHopeful:
      if (payoff < z.benchmark_payoff) {
        next.mood = Mood::kWatchful;
      } else if (payoff == z.benchmark_payoff) {
        next.mood = Mood::kContent;
      } else {
        next.mood = Mood::kContent;  // confirmed gain: adopt the new payoff
        next.benchmark_payoff = payoff;
      }
      break;
    case Mood::kDiscontent:
      if (accept) {
        next.mood = Mood::kContent;
        next.benchmark_action = played;
        next.benchmark_payoff = payoff;
      }
      break;
  }
  return next;
}

TrialErrorRule::TrialErrorRule(int num_actions, double eps, PhiFunction phi,
                               RngStream rng)
    : m_(num_actions), eps_(eps), phi_(phi), rng_(std::move(rng)) {
  if (num_actions < 2)
    throw InputError("trial and error: needs at least 2 actions");
  if (!(eps > 0.0 && eps < 1.0))
    throw InputError("trial and error: eps must lie in (0, 1)");
  state_.benchmark_action = rng_.uniform_action(m_);
  x_ = delta_on(m_, state_.benchmark_action);
}

const MixedAction& TrialErrorRule::next_action() {
  if (!benchmark_set_) {
    // First period: play the benchmark action, no experimentation yet.
    x_.setZero();
    x_(state_.benchmark_action - 1) = 1.0;
    return x_;
  }
  switch (state_.mood) {
    case Mood::kContent:
      x_.setConstant(eps_ / (m_ - 1));
      x_(state_.benchmark_action - 1) = 1.0 - eps_;
      break;
    case Mood::kWatchful:
    case Mood::kHopeful:
      x_.setZero();
      x_(state_.benchmark_action - 1) = 1.0;
      break;
    case Mood::kDiscontent:
      x_.setConstant(1.0 / m_);
      break;
  }
  return x_;
}

void TrialErrorRule::on_observe(const Feedback& fb) {
  if (!benchmark_set_) {
    state_.benchmark_payoff = fb.own_payoff;
    benchmark_set_ = true;
    mood_changed_ = false;
    return;
  }
  bool accept = false;
  if (state_.mood == Mood::kDiscontent)
    accept = rng_.bernoulli(phi_(fb.own_payoff, state_.benchmark_payoff));
  MoodState next =
      trial_error_transition(state_, fb.own_action, fb.own_payoff, accept);
  mood_changed_ = next.mood != state_.mood;
  state_ = next;
}

std::string TrialErrorRule::annotation() const {
  return std::string(1, mood_letter(state_.mood));
}

// -- Fictitious play -------------------------------------------------------------

int argmax_action(const Eigen::VectorXd& scores, RngStream& rng) {
  double best = scores.maxCoeff();
  int ties = 0;
  int pick = 0;
  for (int k = 0; k < scores.size(); ++k) {
    if (scores(k) >= best - kArgmaxTieTol) {
      // Reservoir pick keeps each tied action equally likely.
      ++ties;
      if (rng.uniform_int(ties) == 0) pick = k + 1;
    }
  }
  return pick;
}

int fictitious_play_step(const Game& g, int i,
                         const std::vector<PureProfile>& history,
                         RngStream& rng) {
  int m = g.num_actions(i);
  if (history.empty()) return rng.uniform_action(m);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd row(m);
  for (const PureProfile& s : history) {
    g.payoff_row(i, s, row);
    sum += row;
  }
  return argmax_action(sum, rng);
}

FictitiousPlayRule::FictitiousPlayRule(const Game& g, int player,
                                       RngStream rng)
    : game_(&g), player_(player), rng_(std::move(rng)) {
  int m = g.num_actions(player);
  x_ = MixedAction::Zero(m);
  alt_sum_ = Eigen::VectorXd::Zero(m);
  row_buf_.resize(m);
}

const MixedAction& FictitiousPlayRule::next_action() {
  if (!fresh_) {
    int choice = (t_ == 1) ? rng_.uniform_action(static_cast<int>(x_.size()))
                           : argmax_action(alt_sum_, rng_);
    x_.setZero();
    x_(choice - 1) = 1.0;
    fresh_ = true;  // the tie-break draw happens once per period
  }
  return x_;
}

void FictitiousPlayRule::on_observe(const Feedback& fb) {
  game_->payoff_row(player_, *fb.profile, row_buf_);
  alt_sum_ += row_buf_;
  ++t_;
  fresh_ = false;
}

// -- Rule specification strings ----------------------------------------------------

namespace {

std::string canonical_name(std::string s) {
  for (char& c : s)
    if (c == '_') c = '-';
  return s;
}

double parse_value(const std::string& name, const std::string& key,
                   const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw UsageError("rule " + name + ": parameter " + key +
                     " has a non-numeric value '" + text + "'");
  }
}

// Pulls the values of `key` out of the spec, checking arity; returns empty
// when absent. Marks the key as consumed.
class ParamReader {
 public:
  explicit ParamReader(const RuleSpec& spec) : spec_(spec) {
    used_.assign(spec.params.size(), false);
  }

  std::vector<std::string> take(const std::string& key) {
    std::size_t found = spec_.params.size();
    for (std::size_t idx = 0; idx < spec_.params.size(); ++idx) {
      if (spec_.params[idx].first != key) continue;
      if (found != spec_.params.size())
        throw UsageError("rule " + spec_.name + ": duplicate parameter " +
                         key);
      found = idx;
    }
    if (found == spec_.params.size()) return {};
    used_[found] = true;
    return spec_.params[found].second;
  }

  std::optional<double> take_number(const std::string& key) {
    auto vals = take(key);
    if (vals.empty()) return std::nullopt;
    if (vals.size() != 1)
      throw UsageError("rule " + spec_.name + ": parameter " + key +
                       " expects one value");
    return parse_value(spec_.name, key, vals[0]);
  }

  void finish() const {
    for (std::size_t idx = 0; idx < spec_.params.size(); ++idx)
      if (!used_[idx])
        throw UsageError("rule " + spec_.name + ": unknown parameter " +
                         spec_.params[idx].first);
  }

 private:
  const RuleSpec& spec_;
  std::vector<bool> used_;
};

}  // namespace

RuleSpec parse_rule_spec(const std::string& text) {
  RuleSpec spec;
  std::size_t open = text.find('[');
  if (open == std::string::npos) {
    spec.name = canonical_name(text);
  } else {
    if (text.back() != ']')
      throw UsageError("rule spec '" + text + "': missing closing ]");
    spec.name = canonical_name(text.substr(0, open));
    std::string body = text.substr(open + 1, text.size() - open - 2);
    if (body.find('[') != std::string::npos ||
        body.find(']') != std::string::npos)
      throw UsageError("rule spec '" + text + "': nested brackets");
    std::size_t pos = 0;
    while (pos <= body.size() && !body.empty()) {
      std::size_t comma = body.find(',', pos);
      std::string token = body.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      std::size_t eq = token.find('=');
      if (eq != std::string::npos) {
        spec.params.emplace_back(token.substr(0, eq),
                                 std::vector<std::string>{token.substr(eq + 1)});
      } else if (!spec.params.empty()) {
        spec.params.back().second.push_back(token);  // continuation value
      } else {
        throw UsageError("rule spec '" + text +
                         "': expected key=value, got '" + token + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (spec.name.empty())
    throw UsageError("rule spec '" + text + "': empty rule name");
  return spec;
}

std::vector<std::string> split_rule_list(const std::string& text) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::unique_ptr<Rule> make_rule(const std::string& text, const Game& g,
                                int player, RngStream rng,
                                std::string* effective) {
  if (player < 1 || player > g.num_players())
    throw InputError("make_rule: player index out of range");
  RuleSpec spec = parse_rule_spec(text);
  ParamReader params(spec);
  int m = g.num_actions(player);
  double M = g.payoff_bound(player);
  std::ostringstream eff;
  std::unique_ptr<Rule> rule;

  if (spec.name == "regret-matching") {
    auto mu_vals = params.take("mu");
    double mu;
    if (mu_vals.empty() || (mu_vals.size() == 1 && mu_vals[0] == "auto"))
      mu = 2.0 * M * m + 1.0;
    else if (mu_vals.size() == 1)
      mu = parse_value(spec.name, "mu", mu_vals[0]);
    else
      throw UsageError("rule regret-matching: mu expects one value");
    rule = std::make_unique<RegretMatchingRule>(g, player, mu, std::move(rng));
    eff << "regret-matching[mu=" << fmt_num(mu) << "]";
  } else if (spec.name == "modified-rm") {
    auto mu_vals = params.take("mu");
    double mu;
    if (mu_vals.empty() || (mu_vals.size() == 1 && mu_vals[0] == "auto"))
      mu = 2.0 * M * m + 1.0;
    else if (mu_vals.size() == 1)
      mu = parse_value(spec.name, "mu", mu_vals[0]);
    else
      throw UsageError("rule modified-rm: mu expects one value");
    double gamma = params.take_number("gamma").value_or(0.2);
    double delta = params.take_number("delta").value_or(0.5);
    if (!(mu > 2.0 * M * m))
      throw InputError("modified-rm: mu must exceed 2*M*m = " +
                       fmt_num(2.0 * M * m));
    rule = std::make_unique<ModifiedRegretMatchingRule>(m, mu, gamma, delta,
                                                        std::move(rng));
    eff << "modified-rm[mu=" << fmt_num(mu) << ",gamma=" << fmt_num(gamma)
        << ",delta=" << fmt_num(delta) << "]";
  } else if (spec.name == "ert") {
    double T = params.take_number("T").value_or(10000.0);
    double rho = params.take_number("rho").value_or(0.12);
    double lambda = params.take_number("lambda").value_or(0.001);
    if (!(T >= 1.0 && T <= 9.0e18 && T == std::floor(T)))
      throw InputError("ert: T must be a positive integer");
    rule = std::make_unique<ErtRule>(g, player, static_cast<long>(T), rho,
                                     lambda, std::move(rng));
    eff << "ert[T=" << fmt_num(T) << ",rho=" << fmt_num(rho)
        << ",lambda=" << fmt_num(lambda) << "]";
  } else if (spec.name == "alert") {
    rule = std::make_unique<AlertRule>(g, player, std::move(rng));
    eff << "alert";
  } else if (spec.name == "payoff-alert") {
    double gv = params.take_number("g").value_or(25.0);
    if (!(gv >= 1.0 && gv <= 1.0e9 && gv == std::floor(gv)))
      throw InputError("payoff-alert: g must be a positive integer");
    rule = std::make_unique<PayoffAlertRule>(m, static_cast<int>(gv),
                                             std::move(rng));
    eff << "payoff-alert[g=" << fmt_num(gv) << "]";
  } else if (spec.name == "simple-pure") {
    rule = std::make_unique<SimplePureRule>(g, player, std::move(rng));
    eff << "simple-pure";
  } else if (spec.name == "two-recall") {
    rule = std::make_unique<TwoRecallRule>(g, player, std::move(rng));
    eff << "two-recall";
  } else if (spec.name == "trial-error") {
    double eps = params.take_number("eps").value_or(0.01);
    auto phi_vals = params.take("phi");
    double pv = 0.6, qv = 0.1, cv = 0.05, lov = 0.01, hiv = 0.99;
    if (!phi_vals.empty()) {
      if (phi_vals.size() != 5)
        throw UsageError(
            "rule trial-error: phi expects 5 values p,q,c,lo,hi");
      pv = parse_value(spec.name, "phi", phi_vals[0]);
      qv = parse_value(spec.name, "phi", phi_vals[1]);
      cv = parse_value(spec.name, "phi", phi_vals[2]);
      lov = parse_value(spec.name, "phi", phi_vals[3]);
      hiv = parse_value(spec.name, "phi", phi_vals[4]);
    }
    PhiFunction phi(pv, qv, cv, lov, hiv);
    rule = std::make_unique<TrialErrorRule>(m, eps, phi, std::move(rng));
    eff << "trial-error[eps=" << fmt_num(eps) << ",phi=" << fmt_num(pv) << ','
        << fmt_num(qv) << ',' << fmt_num(cv) << ',' << fmt_num(lov) << ','
        << fmt_num(hiv) << "]";
  } else if (spec.name == "fictitious") {
    rule = std::make_unique<FictitiousPlayRule>(g, player, std::move(rng));
    eff << "fictitious";
  } else {
    throw UsageError("unknown rule '" + spec.name + "'");
  }

  params.finish();
  if (effective) *effective = eff.str();
  return rule;
}

}  // namespace gamelearn

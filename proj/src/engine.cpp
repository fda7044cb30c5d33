#include "gamelearn/engine.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "gamelearn/errors.hpp"
#include "gamelearn/rng.hpp"
#include "gamelearn/verify.hpp"

namespace gamelearn {

EmpiricalDistribution::EmpiricalDistribution(const Game& g)
    : actions_(g.action_counts()) {
  strides_.reserve(actions_.size());
  for (int i = 1; i <= g.num_players(); ++i) strides_.push_back(g.stride(i));
  counts_ = Eigen::VectorXd::Zero(g.num_profiles());
}

void EmpiricalDistribution::add(long flat_index) {
  if (flat_index < 0 || flat_index >= counts_.size())
    throw InputError("empirical distribution: flat index out of range");
  counts_(flat_index) += 1.0;
  ++t_;
}

JointDistribution EmpiricalDistribution::joint() const {
  if (t_ == 0) throw InputError("empirical distribution: no periods");
  return counts_ / static_cast<double>(t_);
}

MixedAction EmpiricalDistribution::marginal(int player) const {
  if (t_ == 0) throw InputError("empirical distribution: no periods");
  if (player < 1 || player > static_cast<int>(actions_.size()))
    throw InputError("empirical distribution: player out of range");
  int m = actions_[player - 1];
  long stride = strides_[player - 1];
  MixedAction out = MixedAction::Zero(m);
  for (long flat = 0; flat < counts_.size(); ++flat)
    out((flat / stride) % m) += counts_(flat);
  return out / static_cast<double>(t_);
}

Trace run_with_rules(const Game& g, std::vector<std::unique_ptr<Rule>>& rules,
                     long horizon, std::uint64_t seed, RecordOptions record) {
  int n = g.num_players();
  if (static_cast<int>(rules.size()) != n)
    throw InputError("engine: need exactly one rule per player");
  for (int i = 0; i < n; ++i)
    if (!rules[i]) throw InputError("engine: null rule");
  if (horizon < 1) throw InputError("engine: horizon must be >= 1");
  if (record.mode == RecordOptions::kThin && record.stride < 1)
    throw InputError("engine: record stride must be >= 1");

  std::vector<RngStream> act;
  act.reserve(n);
  for (int i = 1; i <= n; ++i)
    act.emplace_back(seed, "act/" + std::to_string(i));

  Trace tr;
  tr.horizon = horizon;
  tr.full = record.mode == RecordOptions::kFull;
  if (tr.full) tr.rows.reserve(static_cast<std::size_t>(horizon));

  EmpiricalDistribution dist(g);
  PureProfile s(n), prev(n);
  Eigen::VectorXd pay(n);
  long last_switch = 1;  // play held constant since period 1 until proven otherwise

  for (long t = 1; t <= horizon; ++t) {
    for (int i = 1; i <= n; ++i) {
      const MixedAction& x = rules[i - 1]->next_action();
      if (x.size() != g.num_actions(i) || !is_distribution(x, kDistributionTol))
        throw InputError("engine: rule for player " + std::to_string(i) +
                         " produced an invalid mixed action at t=" +
                         std::to_string(t));
      s(i - 1) = act[i - 1].categorical(x);
    }
    long flat = g.flat_index(s);
    for (int i = 1; i <= n; ++i) pay(i - 1) = g.payoff_flat(i, flat);
    dist.add(flat);
    if (t > 1 && (s.array() != prev.array()).any()) last_switch = t;
    prev = s;

    bool any_event = false;
    for (int i = 1; i <= n; ++i) {
      Feedback fb;
      fb.kind = rules[i - 1]->feedback_kind();
      fb.profile = fb.kind == FeedbackKind::kUncoupled ? &s : nullptr;
      fb.own_action = s(i - 1);
      fb.own_payoff = pay(i - 1);
      rules[i - 1]->observe(fb);
      any_event = any_event || rules[i - 1]->event();
    }

    bool keep = record.mode == RecordOptions::kFull ||
                (record.mode == RecordOptions::kThin &&
                 (t % record.stride == 0 || any_event || t == horizon));
    if (keep) {
      TraceRow row;
      row.t = t;
      row.profile = s;
      row.payoffs = pay;
      row.notes.resize(n);
      for (int i = 1; i <= n; ++i) row.notes[i - 1] = rules[i - 1]->annotation();
      tr.rows.push_back(std::move(row));
    }
  }

  tr.joint = dist.joint();
  tr.marginals.reserve(n);
  for (int i = 1; i <= n; ++i) tr.marginals.push_back(dist.marginal(i));
  tr.last_switch = last_switch;
  return tr;
}

Trace run(const SimConfig& config) {
  const Game& g = config.game;
  int n = g.num_players();
  if (static_cast<int>(config.rules.size()) != n)
    throw InputError("engine: need one rule spec per player, got " +
                     std::to_string(config.rules.size()));
  std::vector<std::unique_ptr<Rule>> rules;
  std::vector<std::string> effective(n);
  rules.reserve(n);
  for (int i = 1; i <= n; ++i)
    rules.push_back(make_rule(config.rules[i - 1], g, i,
                              RngStream(config.seed, "rule/" + std::to_string(i)),
                              &effective[i - 1]));
  Trace tr =
      run_with_rules(g, rules, config.horizon, config.seed, config.record);
  tr.effective_rules = std::move(effective);
  return tr;
}

namespace {

void require_full_rows(const Trace& trace, const char* what) {
  if (!trace.full)
    throw InputError(std::string(what) + ": needs a fully recorded trace");
}

}  // namespace

JointDistribution empirical_joint(const Game& g, const Trace& trace, long t) {
  require_full_rows(trace, "empirical_joint");
  if (t < 1 || t > static_cast<long>(trace.rows.size()))
    throw InputError("empirical_joint: t out of range");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(g.num_profiles());
  for (long r = 0; r < t; ++r) counts(g.flat_index(trace.rows[r].profile)) += 1;
  return counts / static_cast<double>(t);
}

MixedAction empirical_marginal(const Game& g, const Trace& trace, int player,
                               long t) {
  require_full_rows(trace, "empirical_marginal");
  if (player < 1 || player > g.num_players())
    throw InputError("empirical_marginal: player out of range");
  if (t < 1 || t > static_cast<long>(trace.rows.size()))
    throw InputError("empirical_marginal: t out of range");
  MixedAction out = MixedAction::Zero(g.num_actions(player));
  for (long r = 0; r < t; ++r) out(trace.rows[r].profile(player - 1) - 1) += 1;
  return out / static_cast<double>(t);
}

std::vector<std::pair<long, JointDistribution>> moving_window_distribution(
    const Game& g, const Trace& trace, long length, long stride) {
  require_full_rows(trace, "moving_window_distribution");
  long T = static_cast<long>(trace.rows.size());
  if (length < 1) throw InputError("moving window: length must be >= 1");
  if (stride < 1) throw InputError("moving window: stride must be >= 1");
  if (length > T)
    throw InputError("moving window: window is longer than the trace");
  std::vector<std::pair<long, JointDistribution>> out;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(g.num_profiles());
  for (long r = 0; r < length; ++r)
    counts(g.flat_index(trace.rows[r].profile)) += 1;
  long end = length;  // 1-based end period of the current window
  out.emplace_back(trace.rows[end - 1].t,
                   JointDistribution(counts / static_cast<double>(length)));
  while (end + stride <= T) {
    for (long r = end; r < end + stride; ++r)
      counts(g.flat_index(trace.rows[r].profile)) += 1;
    for (long r = end - length; r < end - length + stride; ++r)
      counts(g.flat_index(trace.rows[r].profile)) -= 1;
    end += stride;
    out.emplace_back(trace.rows[end - 1].t,
                     JointDistribution(counts / static_cast<double>(length)));
  }
  return out;
}

double frequency_in(const Trace& trace,
                    const std::function<bool(const PureProfile&)>& pred) {
  require_full_rows(trace, "frequency_in");
  if (trace.rows.empty()) throw InputError("frequency_in: empty trace");
  long hits = 0;
  for (const TraceRow& row : trace.rows)
    if (pred(row.profile)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(trace.rows.size());
}

BatchReport batch(const SimConfig& config, int runs, int threads) {
  if (runs < 1) throw InputError("batch: runs must be >= 1");
  const Game& g = config.game;
  BatchReport rep{config};
  rep.pure_nash = pure_nash_profiles(g, 0.0);
  rep.runs.resize(runs);

  // Echo the effective specs once; they do not depend on the seed.
  rep.effective_rules.resize(g.num_players());
  for (int i = 1; i <= g.num_players(); ++i)
    make_rule(config.rules[i - 1], g, i, RngStream(config.seed, "echo"),
              &rep.effective_rules[i - 1]);

  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (workers > runs) workers = runs;

  std::atomic<int> cursor{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto work = [&]() {
    try {
      for (;;) {
        int r = cursor.fetch_add(1);
        if (r >= runs) return;
        SimConfig c = config;
        c.seed = derive_seed(config.seed, "run/" + std::to_string(r + 1));
        c.record.mode = RecordOptions::kSummary;  // aggregates only
        Trace tr = run(c);
        RunStats st;
        st.run = r + 1;
        st.seed = c.seed;
        st.nash_freq.resize(static_cast<long>(rep.pure_nash.size()));
        for (std::size_t k = 0; k < rep.pure_nash.size(); ++k)
          st.nash_freq(static_cast<long>(k)) =
              tr.joint(g.flat_index(rep.pure_nash[k]));
        st.min_ce_eps = min_ce_eps(g, tr.joint);
        st.last_switch = tr.last_switch;
        rep.runs[r] = std::move(st);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  long kNash = static_cast<long>(rep.pure_nash.size());
  rep.mean_nash_freq = Eigen::VectorXd::Zero(kNash);
  rep.std_nash_freq = Eigen::VectorXd::Zero(kNash);
  double ce_sum = 0.0, ce_max = 0.0;
  for (const RunStats& st : rep.runs) {
    rep.mean_nash_freq += st.nash_freq;
    ce_sum += st.min_ce_eps;
    ce_max = std::max(ce_max, st.min_ce_eps);
  }
  rep.mean_nash_freq /= static_cast<double>(runs);
  for (const RunStats& st : rep.runs) {
    Eigen::VectorXd d = st.nash_freq - rep.mean_nash_freq;
    rep.std_nash_freq += d.cwiseProduct(d);
  }
  rep.std_nash_freq = (rep.std_nash_freq / static_cast<double>(runs))
                          .cwiseSqrt();
  rep.mean_min_ce_eps = ce_sum / static_cast<double>(runs);
  rep.max_min_ce_eps = ce_max;
  return rep;
}

namespace {

std::string profile_text(const PureProfile& s) {
  std::string out = "(";
  for (int i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s(i));
  }
  out += ')';
  return out;
}

}  // namespace

std::string report_to_text(const BatchReport& rep) {
  const Game& g = rep.config.game;
  std::ostringstream out;
  out << std::setprecision(6);
  out << "batch report\n";
  out << "  rng: " << kRngIdentity << "\n";
  out << "  game: " << (g.name().empty() ? "(unnamed)" : g.name())
      << "  players=" << g.num_players() << "  actions=";
  for (int i = 1; i <= g.num_players(); ++i)
    out << (i > 1 ? "x" : "") << g.num_actions(i);
  out << "\n  rules:";
  for (const std::string& r : rep.effective_rules) out << ' ' << r;
  out << "\n  horizon=" << rep.config.horizon
      << "  runs=" << rep.runs.size() << "  seed=" << rep.config.seed << "\n";
  out << "  pure equilibria:";
  if (rep.pure_nash.empty()) out << " none";
  for (const PureProfile& s : rep.pure_nash) out << ' ' << profile_text(s);
  out << "\n";
  out << "  run  seed";
  for (const PureProfile& s : rep.pure_nash) out << "  freq" << profile_text(s);
  out << "  min_ce_eps  last_switch\n";
  for (const RunStats& st : rep.runs) {
    out << "  " << st.run << "  " << st.seed;
    for (long k = 0; k < st.nash_freq.size(); ++k)
      out << "  " << st.nash_freq(k);
    out << "  " << st.min_ce_eps << "  " << st.last_switch << "\n";
  }
  out << "  mean freq:";
  for (long k = 0; k < rep.mean_nash_freq.size(); ++k)
    out << ' ' << rep.mean_nash_freq(k);
  out << "\n  std freq:";
  for (long k = 0; k < rep.std_nash_freq.size(); ++k)
    out << ' ' << rep.std_nash_freq(k);
  out << "\n  min_ce_eps: mean=" << rep.mean_min_ce_eps
      << " max=" << rep.max_min_ce_eps << "\n";
  return out.str();
}

void write_trace_csv(const Game& g, const Trace& trace, std::ostream& out) {
  int n = g.num_players();
  bool any_note = false;
  for (const TraceRow& row : trace.rows)
    for (const std::string& note : row.notes)
      if (!note.empty()) any_note = true;
  out << 't';
  for (int i = 1; i <= n; ++i) out << ",s_" << i;
  for (int i = 1; i <= n; ++i) out << ",pi_" << i;
  if (any_note)
    for (int i = 1; i <= n; ++i) out << ",mood_" << i;
  out << '\n';
  out << std::setprecision(12);
  for (const TraceRow& row : trace.rows) {
    out << row.t;
    for (int i = 0; i < n; ++i) out << ',' << row.profile(i);
    for (int i = 0; i < n; ++i) out << ',' << row.payoffs(i);
    if (any_note)
      for (int i = 0; i < n; ++i) out << ',' << row.notes[i];
    out << '\n';
  }
}

}  // namespace gamelearn

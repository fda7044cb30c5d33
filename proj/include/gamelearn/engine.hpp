#pragma once

// Repeated-play engine: wires rules to a game, enforcing each rule's
// information class, with deterministic seeded streams per player and
// trace/batch reporting on top.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gamelearn/game.hpp"
#include "gamelearn/rules.hpp"
#include "gamelearn/types.hpp"

namespace gamelearn {

struct RecordOptions {
  enum Mode {
    kFull,     // every period
    kThin,     // every stride-th period, plus rule events and the last
    kSummary,  // no rows, aggregates only
  };
  Mode mode = kFull;
  long stride = 1;
};

struct SimConfig {
  Game game;
  std::vector<std::string> rules;  // one spec per player
  long horizon = 0;
  std::uint64_t seed = 0;
  RecordOptions record;
};

struct TraceRow {
  long t = 0;
  PureProfile profile;
  Eigen::VectorXd payoffs;
  std::vector<std::string> notes;  // per player; annotation() snapshots
};

// Joint empirical distribution of play, accumulated one profile at a time.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(const Game& g);

  void add(long flat_index);
  long periods() const { return t_; }

  JointDistribution joint() const;        // errors when empty
  MixedAction marginal(int player) const; // errors when empty

 private:
  std::vector<int> actions_;
  std::vector<long> strides_;
  Eigen::VectorXd counts_;
  long t_ = 0;
};

struct Trace {
  long horizon = 0;
  bool full = false;  // rows cover every period
  std::vector<TraceRow> rows;
  JointDistribution joint;      // over the whole run
  MixedProfile marginals;       // over the whole run
  // Last period whose profile differs from its predecessor's; 1 when the
  // profile never changed.
  long last_switch = 0;
  std::vector<std::string> effective_rules;
};

// Runs one play of `config.horizon` periods. Per-player streams are derived
// from the seed as "rule/<i>" (given to the rule) and "act/<i>" (action
// sampling), so adding players or swapping rules never perturbs the others'
// randomness.
Trace run(const SimConfig& config);

// Same loop over caller-constructed rules (rules[i] plays player i+1); the
// caller keeps access to rule state afterwards. `seed` drives the "act/<i>"
// sampling streams only; the rules brought their own randomness.
Trace run_with_rules(const Game& g, std::vector<std::unique_ptr<Rule>>& rules,
                     long horizon, std::uint64_t seed,
                     RecordOptions record = {});

// Empirical joint/marginals over rows 1..t of a full trace.
JointDistribution empirical_joint(const Game& g, const Trace& trace, long t);
MixedAction empirical_marginal(const Game& g, const Trace& trace, int player,
                               long t);

// Joint distribution over each window [t - length + 1, t] for
// t = length, length + stride, ...; requires a full trace at least one
// window long. Returns (end period, distribution) pairs.
std::vector<std::pair<long, JointDistribution>> moving_window_distribution(
    const Game& g, const Trace& trace, long length, long stride);

// Fraction of periods whose profile satisfies the predicate (full trace).
double frequency_in(const Trace& trace,
                    const std::function<bool(const PureProfile&)>& pred);

// -- Batches ---------------------------------------------------------------------

struct RunStats {
  int run = 0;  // 1-based
  std::uint64_t seed = 0;
  Eigen::VectorXd nash_freq;  // frequency of each pure equilibrium profile
  double min_ce_eps = 0.0;
  long last_switch = 0;
};

struct BatchReport {
  SimConfig config;
  std::vector<std::string> effective_rules;
  std::vector<PureProfile> pure_nash;
  std::vector<RunStats> runs;
  Eigen::VectorXd mean_nash_freq;
  Eigen::VectorXd std_nash_freq;
  double mean_min_ce_eps = 0.0;
  double max_min_ce_eps = 0.0;
};

// R independent runs; run r uses master seed derive_seed(seed, "run/<r>").
// `threads` 0 means one worker per core. Results are keyed by run index, so
// the report is identical for any thread count.
BatchReport batch(const SimConfig& config, int runs, int threads = 0);

std::string report_to_text(const BatchReport& report);

// CSV: t, s_1..s_n, pi_1..pi_n, mood_1..mood_n (the per-player rule
// annotation columns appear only when some row carries one).
void write_trace_csv(const Game& g, const Trace& trace, std::ostream& out);

}  // namespace gamelearn

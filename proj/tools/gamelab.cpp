// gamelab: simulate repeated play of finite games under uncoupled and
// completely uncoupled learning rules; check equilibria; evaluate bounds;
// run the canned experiment presets.
//
// Exit codes: 0 success, 2 usage error, 3 input-data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gamelearn/engine.hpp"
#include "gamelearn/errors.hpp"
#include "gamelearn/game.hpp"
#include "gamelearn/rng.hpp"
#include "gamelearn/rules.hpp"
#include "gamelearn/verify.hpp"

namespace gl = gamelearn;

namespace {

gl::Game resolve_game(const std::string& text) {
  if (text.find('(') != std::string::npos) return gl::builtin_game(text);
  try {
    return gl::builtin_game(text);
  } catch (const gl::InputError&) {
  }
  if (std::filesystem::exists(text)) return gl::load_game(text);
  throw gl::InputError("--game '" + text +
                       "': not a builtin name, random(...) spec, or an "
                       "existing file");
}

gl::RecordOptions parse_record(const std::string& text) {
  gl::RecordOptions rec;
  if (text == "full") {
    rec.mode = gl::RecordOptions::kFull;
  } else if (text == "summary") {
    rec.mode = gl::RecordOptions::kSummary;
  } else if (text.rfind("thin:", 0) == 0) {
    rec.mode = gl::RecordOptions::kThin;
    try {
      rec.stride = std::stol(text.substr(5));
    } catch (const std::exception&) {
      throw gl::UsageError("--record thin:<k>: bad stride '" +
                           text.substr(5) + "'");
    }
  } else {
    throw gl::UsageError("--record must be full, thin:<k>, or summary");
  }
  return rec;
}

std::string record_text(const gl::RecordOptions& rec) {
  switch (rec.mode) {
    case gl::RecordOptions::kFull:
      return "full";
    case gl::RecordOptions::kThin:
      return "thin:" + std::to_string(rec.stride);
    default:
      return "summary";
  }
}

std::string profile_text(const gl::PureProfile& s) {
  std::string out = "(";
  for (int i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s(i));
  }
  return out + ")";
}

std::string actions_text(const gl::Game& g) {
  std::string out;
  for (int i = 1; i <= g.num_players(); ++i) {
    if (i > 1) out += 'x';
    out += std::to_string(g.num_actions(i));
  }
  return out;
}

// The reproducibility header every command prints (and every CSV embeds).
std::string config_header(const std::string& command, const gl::Game& g,
                          const std::vector<std::string>& rules, long horizon,
                          std::uint64_t seed,
                          const std::string& extras = "") {
  std::ostringstream out;
  out << "# gamelab " << command << "\n";
  out << "# rng: " << gl::kRngIdentity << "\n";
  out << "# game: " << (g.name().empty() ? "(unnamed)" : g.name())
      << " players=" << g.num_players() << " actions=" << actions_text(g)
      << "\n";
  if (!rules.empty()) {
    out << "# rules:";
    for (const std::string& r : rules) out << ' ' << r;
    out << "\n";
  }
  if (horizon > 0) out << "# horizon: " << horizon << "\n";
  out << "# seed: " << seed << "\n";
  if (!extras.empty()) out << extras;
  return out.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw gl::InputError("cannot open output file '" + path + "'");
  return out;
}

gl::PureProfile parse_profile(const std::string& text, const gl::Game& g) {
  std::vector<int> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("junk");
      vals.push_back(v);
    } catch (const std::exception&) {
      throw gl::UsageError("--profile: bad action token '" + tok + "'");
    }
  }
  if (static_cast<int>(vals.size()) != g.num_players())
    throw gl::InputError("--profile needs " +
                         std::to_string(g.num_players()) + " actions, got " +
                         std::to_string(vals.size()));
  gl::PureProfile s(g.num_players());
  for (std::size_t i = 0; i < vals.size(); ++i) s(static_cast<int>(i)) = vals[i];
  return s;
}

gl::JointDistribution load_distribution(const std::string& path,
                                        const gl::Game& g) {
  std::ifstream in(path);
  if (!in) throw gl::InputError("cannot open distribution file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw gl::InputError("distribution file '" + path + "': " + e.what());
  }
  if (doc.is_object() && doc.contains("probs")) doc = doc["probs"];
  if (!doc.is_array())
    throw gl::InputError("distribution file '" + path +
                         "': expected a JSON array (or {\"probs\": [...]})");
  if (static_cast<long>(doc.size()) != g.num_profiles())
    throw gl::InputError("distribution has " + std::to_string(doc.size()) +
                         " entries; the game has " +
                         std::to_string(g.num_profiles()) + " profiles");
  gl::JointDistribution q(g.num_profiles());
  for (long k = 0; k < g.num_profiles(); ++k) {
    if (!doc[k].is_number())
      throw gl::InputError("distribution entry " + std::to_string(k) +
                           " is not a number");
    q(k) = doc[k].get<double>();
    if (q(k) < -1e-9)
      throw gl::InputError("distribution entry " + std::to_string(k) +
                           " is negative");
    if (q(k) < 0) q(k) = 0;
  }
  double sum = q.sum();
  if (std::abs(sum - 1.0) > 1e-6)
    throw gl::InputError("distribution sums to " + std::to_string(sum) +
                         ", not 1 (tolerance 1e-6)");
  return q / sum;
}

void print_summary(std::ostream& out, const gl::Game& g,
                   const gl::Trace& tr) {
  out << "summary:\n";
  out << "  joint distribution of play:\n";
  for (long flat = 0; flat < g.num_profiles(); ++flat)
    out << "    " << profile_text(g.profile_at(flat)) << ' ' << tr.joint(flat)
        << "\n";
  out << "  min_ce_eps: " << gl::min_ce_eps(g, tr.joint) << "\n";
  std::vector<gl::PureProfile> nash = gl::pure_nash_profiles(g, 0.0);
  if (nash.empty()) {
    out << "  pure equilibria: none\n";
  } else {
    out << "  pure equilibria:";
    for (const gl::PureProfile& s : nash)
      out << ' ' << profile_text(s) << " freq=" << tr.joint(g.flat_index(s));
    out << "\n";
  }
  out << "  last_switch: " << tr.last_switch << "\n";
}

// -- Presets -----------------------------------------------------------------------

struct PhiRow {
  const char* tag;
  double p, q, c;
  double ref_p1, ref_p2;  // Table-1 reference shares, before the (1-eps) scale
};

void preset_table1(std::uint64_t seed, int runs, long horizon,
                   const std::string& out_path) {
  const double eps = 0.01;
  const PhiRow rows[] = {
      {"phi1", 0.001, 0.05, 0.95, 0.471, 0.529},
      {"phi2", 0.6, 0.1, 0.05, 0.718, 0.282},
      {"phi3", 0.2, 0.4, 0.15, 0.125, 0.875},
  };
  gl::Game ed = gl::builtin_game("entry-deterrence");
  std::ofstream out = open_out(out_path);
  std::ostringstream extras;
  extras << "# runs: " << runs << "\n# eps: " << eps << "\n";
  out << config_header("preset table1", ed, {}, horizon, seed, extras.str());
  out << "phi,p,q,c,lo,hi,freq_p1,freq_p2,ref_p1,ref_p2\n";
  for (const PhiRow& row : rows) {
    std::ostringstream rule;
    rule << "trial-error[eps=" << eps << ",phi=" << row.p << ',' << row.q
         << ',' << row.c << ",0.01,0.99]";
    gl::SimConfig cfg{ed,
                      {rule.str(), rule.str()},
                      horizon,
                      gl::derive_seed(seed, std::string("table1/") + row.tag),
                      {gl::RecordOptions::kSummary, 1}};
    gl::BatchReport rep = gl::batch(cfg, runs);
    // pure_nash_profiles(ED) = {(1,1),(2,2)} = {P1, P2} in flat order.
    double p1 = rep.mean_nash_freq(0), p2 = rep.mean_nash_freq(1);
    out << row.tag << ',' << row.p << ',' << row.q << ',' << row.c
        << ",0.01,0.99," << p1 << ',' << p2 << ',' << row.ref_p1 * (1 - eps)
        << ',' << row.ref_p2 * (1 - eps) << "\n";
    std::cout << row.tag << ": freq_p1=" << p1 << " freq_p2=" << p2
              << " (reference " << row.ref_p1 * (1 - eps) << "/"
              << row.ref_p2 * (1 - eps) << ")\n";
  }
  std::cout << "wrote " << out_path << "\n";
}

void preset_matching_pennies_rm(std::uint64_t seed, long horizon, long window,
                                const std::string& out_prefix) {
  gl::Game mp = gl::builtin_game("matching-pennies");
  gl::SimConfig cfg{mp,
                    {"regret-matching", "regret-matching"},
                    horizon,
                    seed,
                    {gl::RecordOptions::kFull, 1}};
  gl::Trace tr = gl::run(cfg);
  std::string extras = "# window: " + std::to_string(window) + "\n";

  // Series A: the cumulative joint distribution over time.
  std::string path_a = out_prefix + ".cumulative.csv";
  {
    std::ofstream out = open_out(path_a);
    out << config_header("preset matching-pennies-rm", mp, tr.effective_rules,
                         horizon, seed, extras);
    out << "t,freq_1_1,freq_2_1,freq_1_2,freq_2_2,min_ce_eps\n";
    long stride = std::max(1L, horizon / 1000);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(mp.num_profiles());
    for (long r = 0; r < horizon; ++r) {
      counts(mp.flat_index(tr.rows[r].profile)) += 1;
      long t = r + 1;
      if (t % stride == 0 || t == horizon) {
        gl::JointDistribution q = counts / static_cast<double>(t);
        out << t << ',' << q(0) << ',' << q(1) << ',' << q(2) << ',' << q(3)
            << ',' << gl::min_ce_eps(mp, q) << "\n";
      }
    }
  }

  // Series B: distributions over a moving window.
  std::string path_b = out_prefix + ".windows.csv";
  {
    std::ofstream out = open_out(path_b);
    out << config_header("preset matching-pennies-rm", mp, tr.effective_rules,
                         horizon, seed, extras);
    out << "t,freq_1_1,freq_2_1,freq_1_2,freq_2_2,min_ce_eps\n";
    long stride = std::max(1L, window / 4);
    for (const auto& [t, q] :
         gl::moving_window_distribution(mp, tr, window, stride))
      out << t << ',' << q(0) << ',' << q(1) << ',' << q(2) << ',' << q(3)
          << ',' << gl::min_ce_eps(mp, q) << "\n";
  }
  std::cout << "final min_ce_eps: " << gl::min_ce_eps(mp, tr.joint) << "\n";
  std::cout << "wrote " << path_a << " and " << path_b << "\n";
}

void preset_ert_entry_deterrence(std::uint64_t seed, long frames,
                                 const std::string& out_path) {
  const long T = 10000;
  const double rho = 0.12, lambda = 1e-3;
  gl::Game ed = gl::builtin_game("entry-deterrence");
  std::ostringstream rule;
  rule << "ert[T=" << T << ",rho=" << rho << ",lambda=" << lambda << "]";
  std::vector<std::unique_ptr<gl::Rule>> rules;
  std::vector<std::string> effective(2);
  for (int i = 1; i <= 2; ++i)
    rules.push_back(gl::make_rule(rule.str(), ed, i,
                                  gl::RngStream(seed, "rule/" + std::to_string(i)),
                                  &effective[i - 1]));
  long horizon = frames * T;
  gl::Trace tr = gl::run_with_rules(ed, rules, horizon, seed,
                                    {gl::RecordOptions::kSummary, 1});
  auto* r1 = dynamic_cast<gl::ErtRule*>(rules[0].get());
  auto* r2 = dynamic_cast<gl::ErtRule*>(rules[1].get());

  static const char* kTag[] = {"keep", "regret", "lambda", "local"};
  std::ofstream out = open_out(out_path);
  std::ostringstream extras;
  extras << "# frames: " << frames << "\n# frame_length: " << T << "\n";
  out << config_header("preset ert-entry-deterrence", ed, effective, horizon,
                       seed, extras.str());
  out << "frame,t_end,x1_1,x1_2,x2_1,x2_2,rbar_1,rbar_2,redraw_1,redraw_2,"
         "nash_015\n";
  long captured_at = 0, low_streak = 0, post = 0, post_nash = 0;
  for (long f = 0; f < frames; ++f) {
    const gl::FrameRecord& a = r1->frame_log()[f];
    const gl::FrameRecord& b = r2->frame_log()[f];
    bool nash =
        gl::is_mixed_eps_nash(ed, {a.x, b.x}, 0.15);
    out << (f + 1) << ',' << (f + 1) * T << ',' << a.x(0) << ',' << a.x(1)
        << ',' << b.x(0) << ',' << b.x(1) << ',' << a.avg_regret.maxCoeff()
        << ',' << b.avg_regret.maxCoeff() << ',' << kTag[a.redraw] << ','
        << kTag[b.redraw] << ',' << (nash ? 1 : 0) << "\n";
    bool low = a.avg_regret.maxCoeff() < rho && b.avg_regret.maxCoeff() < rho;
    low_streak = low ? low_streak + 1 : 0;
    if (captured_at == 0 && low_streak >= 10) captured_at = f + 1;
    if (captured_at > 0 && f + 1 > captured_at) {
      ++post;
      post_nash += nash;
    }
  }
  std::cout << "first capture at frame " << captured_at << "\n";
  if (post > 0)
    std::cout << "post-capture Nash(0.15) share: "
              << static_cast<double>(post_nash) / post << "\n";
  std::cout << "wrote " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamelab: repeated play of finite games under uncoupled "
               "learning rules"};
  app.require_subcommand(1);

  // simulate ----------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "run one play and summarize it");
  std::string sim_game, sim_rules, sim_out, sim_record;
  long sim_horizon = 10000;
  std::uint64_t sim_seed = 0;
  sim->add_option("--game", sim_game, "builtin name, random(...), or file")
      ->required();
  sim->add_option("--rules", sim_rules,
                  "comma-separated rule specs, one per player")
      ->required();
  sim->add_option("--horizon", sim_horizon, "periods to play");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--out", sim_out, "trace CSV path");
  sim->add_option("--record", sim_record,
                  "full | thin:<k> | summary (default: full when --out is "
                  "given, else summary)");
  sim->callback([&] {
    gl::Game g = resolve_game(sim_game);
    gl::RecordOptions rec = sim_record.empty()
                                ? (sim_out.empty()
                                       ? gl::RecordOptions{gl::RecordOptions::kSummary, 1}
                                       : gl::RecordOptions{gl::RecordOptions::kFull, 1})
                                : parse_record(sim_record);
    gl::SimConfig cfg{g, gl::split_rule_list(sim_rules), sim_horizon, sim_seed,
                      rec};
    gl::Trace tr = gl::run(cfg);
    std::string header =
        config_header("simulate", g, tr.effective_rules, sim_horizon, sim_seed,
                      "# record: " + record_text(rec) + "\n");
    std::cout << header;
    print_summary(std::cout, g, tr);
    if (!sim_out.empty()) {
      std::ofstream out = open_out(sim_out);
      out << header;
      gl::write_trace_csv(g, tr, out);
      std::cout << "wrote " << sim_out << "\n";
    }
  });

  // batch -------------------------------------------------------------------
  auto* bat = app.add_subcommand("batch", "independent repeated runs");
  std::string bat_game, bat_rules, bat_out;
  long bat_horizon = 10000;
  std::uint64_t bat_seed = 0;
  int bat_runs = 10, bat_threads = 0;
  bat->add_option("--game", bat_game, "builtin name, random(...), or file")
      ->required();
  bat->add_option("--rules", bat_rules,
                  "comma-separated rule specs, one per player")
      ->required();
  bat->add_option("--horizon", bat_horizon, "periods per run");
  bat->add_option("--seed", bat_seed, "master seed");
  bat->add_option("--runs", bat_runs, "number of runs");
  bat->add_option("--threads", bat_threads, "worker threads (0 = all cores)");
  bat->add_option("--out", bat_out, "report file (also printed)");
  bat->callback([&] {
    gl::Game g = resolve_game(bat_game);
    gl::SimConfig cfg{g, gl::split_rule_list(bat_rules), bat_horizon, bat_seed,
                      {gl::RecordOptions::kSummary, 1}};
    gl::BatchReport rep = gl::batch(cfg, bat_runs, bat_threads);
    std::string text = gl::report_to_text(rep);
    std::cout << text;
    if (!bat_out.empty()) {
      std::ofstream out = open_out(bat_out);
      out << text;
      std::cout << "wrote " << bat_out << "\n";
    }
  });

  // check -------------------------------------------------------------------
  auto* chk = app.add_subcommand("check", "equilibrium verdicts");
  std::string chk_game, chk_profile, chk_dist;
  double chk_eps = 0.0;
  chk->add_option("--game", chk_game, "builtin name, random(...), or file")
      ->required();
  chk->add_option("--profile", chk_profile, "pure profile, e.g. 1,1");
  chk->add_option("--dist", chk_dist,
                  "joint distribution JSON file (array or {\"probs\":[...]})");
  chk->add_option("--eps", chk_eps, "tolerance for the verdicts");
  chk->callback([&] {
    gl::Game g = resolve_game(chk_game);
    if (chk_profile.empty() == chk_dist.empty())
      throw gl::UsageError("check: give exactly one of --profile / --dist");
    std::cout << config_header("check", g, {}, 0, 0,
                               "# eps: " + std::to_string(chk_eps) + "\n");
    if (!chk_profile.empty()) {
      gl::PureProfile s = parse_profile(chk_profile, g);
      gl::JointDistribution q =
          gl::JointDistribution::Zero(g.num_profiles());
      q(g.flat_index(s)) = 1.0;
      gl::MixedProfile x;
      for (int i = 1; i <= g.num_players(); ++i) {
        gl::MixedAction xi = gl::MixedAction::Zero(g.num_actions(i));
        xi(s(i - 1) - 1) = 1.0;
        x.push_back(xi);
      }
      std::cout << "profile: " << profile_text(s) << "\n";
      std::cout << "PURE-NE: " << (gl::is_pure_nash(g, s, chk_eps) ? "yes" : "no")
                << "\n";
      std::cout << "MIXED-eNE: "
                << (gl::is_mixed_eps_nash(g, x, chk_eps) ? "yes" : "no")
                << "\n";
      std::cout << "CE-e: "
                << (gl::is_correlated_eps_eq(g, q, chk_eps) ? "yes" : "no")
                << "\n";
      std::cout << "min_ce_eps: " << gl::min_ce_eps(g, q) << "\n";
    } else {
      gl::JointDistribution q = load_distribution(chk_dist, g);
      gl::MixedProfile x;
      for (int i = 1; i <= g.num_players(); ++i) {
        gl::MixedAction xi = gl::MixedAction::Zero(g.num_actions(i));
        for (long flat = 0; flat < g.num_profiles(); ++flat)
          xi((flat / g.stride(i)) % g.num_actions(i)) += q(flat);
        x.push_back(xi);
      }
      std::cout << "MIXED-eNE (marginals): "
                << (gl::is_mixed_eps_nash(g, x, chk_eps) ? "yes" : "no")
                << "\n";
      std::cout << "CE-e: "
                << (gl::is_correlated_eps_eq(g, q, chk_eps) ? "yes" : "no")
                << "\n";
      std::cout << "min_ce_eps: " << gl::min_ce_eps(g, q) << "\n";
    }
  });

  // bound -------------------------------------------------------------------
  auto* bnd = app.add_subcommand(
      "bound", "correlated-equilibrium procedure time bound");
  int bnd_players = 2;
  std::string bnd_actions = "2";
  double bnd_eps = 0.1, bnd_delta = 0.05;
  bnd->add_option("--players", bnd_players, "number of players (>= 2)");
  bnd->add_option("--actions", bnd_actions,
                  "actions per player, e.g. 3 or 2x3x2");
  bnd->add_option("--eps", bnd_eps, "approximation level in (0,1)");
  bnd->add_option("--delta", bnd_delta, "failure probability in (0,1)");
  bnd->callback([&] {
    std::vector<int> m;
    std::stringstream ss(bnd_actions);
    std::string tok;
    while (std::getline(ss, tok, 'x')) {
      try {
        m.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw gl::UsageError("--actions: bad token '" + tok + "'");
      }
    }
    if (static_cast<int>(m.size()) == 1)
      m.assign(bnd_players, m[0]);
    std::cout << "# gamelab bound\n# players: " << bnd_players
              << "\n# actions: " << bnd_actions << "\n# eps: " << bnd_eps
              << "\n# delta: " << bnd_delta << "\n";
    std::cout.precision(15);
    std::cout << "bound: " << gl::ce_time_bound(bnd_players, m, bnd_eps, bnd_delta)
              << "\n";
  });

  // preset ------------------------------------------------------------------
  auto* pre = app.add_subcommand("preset", "canned experiments");
  pre->require_subcommand(1);

  auto* p1 = pre->add_subcommand("table1", "trial-and-error frequencies");
  std::uint64_t p1_seed = 0;
  int p1_runs = 200;
  long p1_horizon = 50000;
  std::string p1_out = "table1.csv";
  p1->add_option("--seed", p1_seed, "master seed");
  p1->add_option("--runs", p1_runs, "runs per phi");
  p1->add_option("--horizon", p1_horizon, "periods per run");
  p1->add_option("--out", p1_out, "CSV path");
  p1->callback([&] { preset_table1(p1_seed, p1_runs, p1_horizon, p1_out); });

  auto* p2 = pre->add_subcommand("matching-pennies-rm",
                                 "regret matching frequency series");
  std::uint64_t p2_seed = 0;
  long p2_horizon = 100000, p2_window = 200;
  std::string p2_out = "mp_rm";
  p2->add_option("--seed", p2_seed, "master seed");
  p2->add_option("--horizon", p2_horizon, "periods");
  p2->add_option("--window", p2_window, "moving-window length");
  p2->add_option("--out", p2_out, "output prefix");
  p2->callback([&] {
    preset_matching_pennies_rm(p2_seed, p2_horizon, p2_window, p2_out);
  });

  auto* p3 = pre->add_subcommand("ert-entry-deterrence",
                                 "regret-testing frame series");
  std::uint64_t p3_seed = 0;
  long p3_frames = 2000;
  std::string p3_out = "ert_ed.csv";
  p3->add_option("--seed", p3_seed, "master seed");
  p3->add_option("--frames", p3_frames, "frames to play");
  p3->add_option("--out", p3_out, "CSV path");
  p3->callback(
      [&] { preset_ert_entry_deterrence(p3_seed, p3_frames, p3_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const gl::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gl::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gamelearn/errors.hpp"
#include "gamelearn/game.hpp"

namespace gamelearn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
  throw InputError(origin + ": " + message);
}

}  // namespace

Game parse_game_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, e.what());
  }
  if (!doc.is_object()) fail(origin, "top-level value must be an object");
  for (const auto& field : {"players", "actions", "payoffs"}) {
    if (!doc.contains(field))
      fail(origin, std::string("missing field '") + field + "'");
  }

  if (!doc["players"].is_number_integer())
    fail(origin, "field 'players' must be an integer");
  int n = doc["players"].get<int>();

  if (!doc["actions"].is_array())
    fail(origin, "field 'actions' must be an integer list");
  std::vector<int> m;
  for (const auto& v : doc["actions"]) {
    if (!v.is_number_integer())
      fail(origin, "field 'actions' must contain only integers");
    m.push_back(v.get<int>());
  }
  if (static_cast<int>(m.size()) != n)
    fail(origin, "field 'actions' must list one count per player");

  long profiles = 1;
  for (int mi : m) {
    if (mi < 2) fail(origin, "every action count must be >= 2");
    profiles *= mi;
  }

  if (!doc["payoffs"].is_array())
    fail(origin, "field 'payoffs' must be a list of payoff vectors");
  if (static_cast<long>(doc["payoffs"].size()) != profiles) {
    std::ostringstream os;
    os << "field 'payoffs' must have " << profiles << " entries, got "
       << doc["payoffs"].size();
    fail(origin, os.str());
  }
  Eigen::MatrixXd payoffs(profiles, n);
  long row = 0;
  for (const auto& entry : doc["payoffs"]) {
    if (!entry.is_array() || static_cast<int>(entry.size()) != n)
      fail(origin, "payoff entry " + std::to_string(row) +
                       " must be a vector of length " + std::to_string(n));
    for (int c = 0; c < n; ++c) {
      if (!entry[c].is_number())
        fail(origin, "payoff entry " + std::to_string(row) +
                         " must contain only numbers");
      payoffs(row, c) = entry[c].get<double>();
    }
    ++row;
  }

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail(origin, "field 'name' must be a string");
    name = doc["name"].get<std::string>();
  }
  try {
    return Game(m, payoffs, name);
  } catch (const InputError& e) {
    fail(origin, e.what());
  }
}

std::string game_to_text(const Game& g) {
  json doc;
  if (!g.name().empty()) doc["name"] = g.name();
  doc["players"] = g.num_players();
  doc["actions"] = g.action_counts();
  json payoffs = json::array();
  for (long flat = 0; flat < g.num_profiles(); ++flat) {
    json entry = json::array();
    for (int i = 1; i <= g.num_players(); ++i)
      entry.push_back(g.payoff_flat(i, flat));
    payoffs.push_back(std::move(entry));
  }
  doc["payoffs"] = std::move(payoffs);
  return doc.dump(2) + "\n";
}

Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open game file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str(), path);
}

void save_game(const Game& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << game_to_text(g);
  if (!out) throw InputError(path + ": write failed");
}

}  // namespace gamelearn

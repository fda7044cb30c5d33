#include "gamelearn/game.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "gamelearn/errors.hpp"
#include "gamelearn/rng.hpp"
#include "gamelearn/verify.hpp"

namespace gamelearn {

Game::Game(std::vector<int> actions, Eigen::MatrixXd payoffs, std::string name)
    : m_(std::move(actions)), payoffs_(std::move(payoffs)),
      name_(std::move(name)) {
  if (m_.size() < 2) throw InputError("game: at least 2 players required");
  long profiles = 1;
  stride_.resize(m_.size());
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (m_[i] < 2)
      throw InputError("game: every player needs at least 2 actions");
    stride_[i] = profiles;
    profiles *= m_[i];
  }
  if (payoffs_.rows() != profiles ||
      payoffs_.cols() != static_cast<long>(m_.size())) {
    std::ostringstream os;
    os << "game: payoff table must be " << profiles << "x" << m_.size()
       << ", got " << payoffs_.rows() << "x" << payoffs_.cols();
    throw InputError(os.str());
  }
  if (!payoffs_.allFinite())
    throw InputError("game: payoffs must all be finite");
  bound_ = payoffs_.cwiseAbs().colwise().maxCoeff();
}

void Game::check_profile(const PureProfile& s) const {
  if (s.size() != static_cast<long>(m_.size()))
    throw InputError("profile: wrong number of players");
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) < 1 || s(i) > m_[i])
      throw InputError("profile: action index out of range for player " +
                       std::to_string(i + 1));
  }
}

long Game::flat_index(const PureProfile& s) const {
  check_profile(s);
  long idx = 0;
  for (int i = 0; i < s.size(); ++i) idx += (s(i) - 1) * stride_[i];
  return idx;
}

PureProfile Game::profile_at(long flat) const {
  if (flat < 0 || flat >= num_profiles())
    throw InputError("profile_at: flat index out of range");
  PureProfile s(num_players());
  for (std::size_t i = 0; i < m_.size(); ++i) {
    s(static_cast<int>(i)) = static_cast<int>(flat % m_[i]) + 1;
    flat /= m_[i];
  }
  return s;
}

Eigen::VectorXd Game::payoff_row(int i, const PureProfile& s) const {
  Eigen::VectorXd out(m_[i - 1]);
  payoff_row(i, s, out);
  return out;
}

void Game::payoff_row(int i, const PureProfile& s, Eigen::VectorXd& out) const {
  long base = flat_index(s) - (s(i - 1) - 1) * stride_[i - 1];
  out.resize(m_[i - 1]);
  for (int k = 0; k < m_[i - 1]; ++k)
    out(k) = payoffs_(base + k * stride_[i - 1], i - 1);
}

double Game::expected_payoff(int i, const MixedProfile& x) const {
  if (x.size() != m_.size())
    throw InputError("expected_payoff: profile has wrong number of players");
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].size() != m_[j] || !is_distribution(x[j]))
      throw InputError("expected_payoff: invalid mixed action for player " +
                       std::to_string(j + 1));
  }
  double total = 0.0;
  for (long flat = 0; flat < num_profiles(); ++flat) {
    double weight = 1.0;
    long rem = flat;
    for (std::size_t j = 0; j < m_.size(); ++j) {
      weight *= x[j](rem % m_[j]);
      rem /= m_[j];
    }
    total += weight * payoffs_(flat, i - 1);
  }
  return total;
}

bool Game::operator==(const Game& other) const {
  return m_ == other.m_ && payoffs_ == other.payoffs_ && name_ == other.name_;
}

// -- Builtin games ------------------------------------------------------------

namespace {

Game make_2x2(const std::string& name, std::array<double, 4> row,
              std::array<double, 4> col) {
  // Entries ordered by flat index: (1,1), (2,1), (1,2), (2,2).
  Eigen::MatrixXd p(4, 2);
  for (int r = 0; r < 4; ++r) {
    p(r, 0) = row[r];
    p(r, 1) = col[r];
  }
  return Game({2, 2}, p, name);
}

std::string normalize_name(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if (c == '-') c = '_';
    out += c;
  }
  return out;
}

Game parse_random_spec(const std::string& args) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : args) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3 && parts.size() != 5)
    throw InputError(
        "random game: expected random(n,m1x..xmn,seed[,lo,hi])");
  try {
    int n = std::stoi(parts[0]);
    std::vector<int> m;
    std::string token;
    std::istringstream ms(parts[1]);
    while (std::getline(ms, token, 'x')) m.push_back(std::stoi(token));
    std::uint64_t seed = std::stoull(parts[2]);
    double lo = 0.0, hi = 1.0;
    if (parts.size() == 5) {
      lo = std::stod(parts[3]);
      hi = std::stod(parts[4]);
    }
    return random_game(n, m, seed, lo, hi);
  } catch (const std::invalid_argument&) {
    throw InputError("random game: malformed number in '" + args + "'");
  } catch (const std::out_of_range&) {
    throw InputError("random game: number out of range in '" + args + "'");
  }
}

}  // namespace

Game builtin_game(const std::string& spec) {
  // Arguments inside random(...) may hold negative bounds; only the name
  // part takes the hyphen/underscore interchange.
  if (spec.rfind("random(", 0) == 0 && !spec.empty() && spec.back() == ')')
    return parse_random_spec(spec.substr(7, spec.size() - 8));
  std::string name = normalize_name(spec);
  if (name == "matching_pennies") {
    return make_2x2("matching_pennies", {1, -1, -1, 1}, {-1, 1, 1, -1});
  }
  if (name == "entry_deterrence") {
    return make_2x2("entry_deterrence", {2, 1, 0, 1}, {2, 4, 0, 4});
  }
  if (name == "battle_of_sexes") {
    return make_2x2("battle_of_sexes", {2, 0, 0, 1}, {1, 0, 0, 2});
  }
  if (name == "coordination") {
    return make_2x2("coordination", {1, 0, 0, 1}, {1, 0, 0, 1});
  }
  throw InputError("unknown builtin game '" + spec + "'");
}

Game random_game(int n, const std::vector<int>& m, std::uint64_t seed,
                 double lo, double hi) {
  if (n < 2 || static_cast<std::size_t>(n) != m.size())
    throw InputError("random game: n must be >= 2 and match the action list");
  if (!(lo < hi)) throw InputError("random game: requires lo < hi");
  long profiles = 1;
  for (int mi : m) {
    if (mi < 2) throw InputError("random game: every m_i must be >= 2");
    profiles *= mi;
  }
  RngStream stream(seed, "random-game");
  // Ties among a player's own payoffs have probability zero but would break
  // genericity-dependent callers; redraw until the sample is generic.
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::MatrixXd p(profiles, n);
    for (long r = 0; r < profiles; ++r)
      for (int c = 0; c < n; ++c) p(r, c) = stream.uniform_real(lo, hi);
    Game g(m, p, "random");
    if (is_generic(g, 1e-9)) return g;
  }
  throw InputError("random game: failed to draw a generic game");
}

}  // namespace gamelearn

#include "gamelearn/rng.hpp"

#include <cmath>

#include "gamelearn/errors.hpp"

namespace gamelearn {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t state = master ^ fnv1a64(label);
  return splitmix64_next(state);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t master, std::string_view label) {
  std::uint64_t state = derive_seed(master, label);
  for (auto& word : s_) word = splitmix64_next(state);
}

std::uint64_t RngStream::next_u64() {
  std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform01_open() {
  double u;
  do {
    u = uniform01();
  } while (u == 0.0);
  return u;
}

double RngStream::uniform_real(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::uint64_t RngStream::uniform_u64(std::uint64_t n) {
  if (n == 0) throw InputError("uniform_u64: n must be positive");
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

int RngStream::uniform_int(int n) {
  if (n <= 0) throw InputError("uniform_int: n must be positive");
  return static_cast<int>(uniform_u64(static_cast<std::uint64_t>(n)));
}

int RngStream::uniform_action(int m) { return uniform_int(m) + 1; }

bool RngStream::bernoulli(double p) { return uniform01() < p; }

int RngStream::categorical(const Eigen::VectorXd& probs) {
  double u = uniform01();
  double cdf = 0.0;
  int last_positive = -1;
  for (int k = 0; k < probs.size(); ++k) {
    double pk = probs(k);
    if (pk <= 0.0) continue;
    last_positive = k;
    cdf += pk;
    if (u < cdf) return k + 1;
  }
  if (last_positive < 0) throw InputError("categorical: no positive mass");
  return last_positive + 1;
}

Eigen::VectorXd RngStream::uniform_simplex(int m) {
  if (m < 1) throw InputError("uniform_simplex: m must be positive");
  Eigen::VectorXd x(m);
  for (int k = 0; k < m; ++k) x(k) = -std::log(uniform01_open());
  x /= x.sum();
  return x;
}

}  // namespace gamelearn

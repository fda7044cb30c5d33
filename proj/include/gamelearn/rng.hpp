#pragma once

// Deterministic, cross-platform random streams.
//
// The std:: distribution objects are implementation-defined, so every draw
// here is hand-rolled on top of a fixed, documented generator:
//   stream generator      xoshiro256** 1.0 (Blackman & Vigna)
//   seeding / derivation  splitmix64
// A stream is addressed by (master seed, label); distinct labels yield
// independent streams, so adding a new consumer never perturbs existing ones.

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace gamelearn {

inline constexpr const char* kRngIdentity =
    "xoshiro256** 1.0, streams keyed by splitmix64(master ^ fnv1a(label))";

// One splitmix64 step: advances state, returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state);

// 64-bit FNV-1a over the label bytes.
std::uint64_t fnv1a64(std::string_view text);

// Stream key for (master, label); stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

class RngStream {
 public:
  RngStream() : RngStream(0, "default") {}
  RngStream(std::uint64_t master, std::string_view label);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  // Uniform on (0, 1); never returns 0 (safe under log).
  double uniform01_open();

  double uniform_real(double lo, double hi);

  // Uniform on {0, ..., n-1}, unbiased via rejection.
  int uniform_int(int n);
  std::uint64_t uniform_u64(std::uint64_t n);

  // Uniform on {1, ..., m}.
  int uniform_action(int m);

  bool bernoulli(double p);

  // 1-based index drawn from a probability vector; the last positive entry
  // absorbs rounding slack.
  int categorical(const Eigen::VectorXd& probs);

  // Uniform draw from the m-simplex (flat Dirichlet via normalized
  // exponentials).
  Eigen::VectorXd uniform_simplex(int m);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(
          uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace gamelearn

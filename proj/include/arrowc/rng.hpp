#pragma once

// Counter-based seeding over xoshiro256**. A run is fully determined by the
// experiment seed and the trial index, whatever the thread schedule.

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "arrowc/rational.hpp"

namespace arrowc {

inline constexpr std::string_view kRngProtocol = "sm64-xoshiro256ss/v1";

std::uint64_t splitmix64_next(std::uint64_t& state);

/// Seed for trial k of an experiment.
std::uint64_t subseed(std::uint64_t seed, std::uint64_t k);

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

  /// Uniform on [0, n), n >= 1, without modulo bias.
  std::uint64_t bounded(std::uint64_t n);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Exact sampling from rational weights: the weights are scaled to integers
/// over their common denominator, which must fit in 64 bits (kCapExceeded).
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<Rational>& weights);
  std::size_t operator()(Rng& rng) const;

 private:
  std::vector<std::uint64_t> cumulative_;
  std::uint64_t total_ = 0;
};

/// Bernoulli(p) as next() < floor(p * 2^64); p = 1 always succeeds.
class BernoulliSampler {
 public:
  explicit BernoulliSampler(const Rational& p);
  bool operator()(Rng& rng) const { return always_ || rng.next() < threshold_; }

 private:
  std::uint64_t threshold_ = 0;
  bool always_ = false;
};

}  // namespace arrowc

#include "arrowc/rng.hpp"

#include <algorithm>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t to_u64(const BigInt& v) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64)
    throw Error(ErrorCode::kCapExceeded, "sampling weights need more than 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

}  // namespace

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += kGolden;
  return mix(state);
}

std::uint64_t subseed(std::uint64_t seed, std::uint64_t k) { return mix(seed + (k + 1) * kGolden); }

Rng::Rng(std::uint64_t seed) {
  for (auto& w : s_) w = splitmix64_next(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::bounded(std::uint64_t n) {
  // Lemire's multiply-and-reject.
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

DiscreteSampler::DiscreteSampler(const std::vector<Rational>& weights) {
  if (weights.empty()) throw Error(ErrorCode::kBadParam, "cannot sample from an empty distribution");
  const BigInt lcd = common_denominator(weights);
  BigInt running = 0;
  cumulative_.reserve(weights.size());
  for (const auto& w : weights) {
    if (sgn(w) < 0) throw Error(ErrorCode::kNegativeWeight, "negative sampling weight");
    running += BigInt(w.get_num() * (lcd / w.get_den()));
    cumulative_.push_back(to_u64(running));
  }
  total_ = cumulative_.back();
  if (total_ == 0) throw Error(ErrorCode::kBadParam, "sampling weights sum to zero");
}

std::size_t DiscreteSampler::operator()(Rng& rng) const {
  const std::uint64_t r = rng.bounded(total_);
  return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), r) - cumulative_.begin());
}

BernoulliSampler::BernoulliSampler(const Rational& p) {
  if (p < 0 || p > 1) throw Error(ErrorCode::kBadParam, "Bernoulli parameter outside [0, 1]");
  if (p == 1) {
    always_ = true;
    return;
  }
  BigInt scaled = (BigInt(p.get_num()) << 64) / BigInt(p.get_den());
  threshold_ = to_u64(scaled);
}

}  // namespace arrowc

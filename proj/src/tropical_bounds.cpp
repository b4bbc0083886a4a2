#include "arrowc/tropical_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

double phi_over_n(const TropicalBoundParams& p, double n) { return 2.0 * p.c * std::pow(n, -0.25); }

// t^(1/4) - ln^(3/2) t; the comparison holds where this is >= 0.
double comparison_gap(double t) { return std::pow(t, 0.25) - std::pow(std::log(t), 1.5); }

double bisect(double lo, double hi) {
  // comparison_gap changes sign once on [lo, hi].
  const bool lo_sign = comparison_gap(lo) >= 0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((comparison_gap(mid) >= 0) == lo_sign) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double aep_rate(const TropicalBoundParams& p, double n) {
  if (!(n >= 2)) throw Error(ErrorCode::kRangeError, "aep rate needs n >= 2");
  const double l = std::log(n);
  return p.c * std::sqrt(l * l * l / n);
}

double phi_defect(const TropicalBoundParams& p, double t) {
  if (!(t >= 1)) throw Error(ErrorCode::kRangeError, "phi needs t >= 1");
  return 2.0 * p.c * std::pow(t, 0.75);
}

bool phi_comparison_holds(double t) { return t >= 1 && comparison_gap(t) >= 0; }

Interval phi_comparison_failure() {
  // The gap is positive just above 1, negative at e^4 and positive again
  // for large t.
  return Interval{bisect(1.5, std::exp(4.0)), bisect(std::exp(4.0), 1e12)};
}

double Epsilons::max() const { return std::max({conditional, x, height}); }

Epsilons contraction_epsilons(const TropicalBoundParams& p, double n) {
  if (!(n >= 2)) throw Error(ErrorCode::kRangeError, "epsilon schedule needs n >= 2");
  if (!(p.log_card_x0 > 0)) throw Error(ErrorCode::kRangeError, "log_card must be positive");
  const double f = phi_over_n(p, n);
  Epsilons e;
  e.conditional = 2.0 * p.d_phi * f;
  e.x = 20.0 * static_cast<double>(p.size_g) / n + p.d_phi * f;
  e.height = 4.0 * std::log(n * p.log_card_x0) / n + 2.0 * p.d_phi * f;
  return e;
}

std::uint64_t epsilon_monotone_threshold(const TropicalBoundParams& p) {
  if (!(p.log_card_x0 > 0)) throw Error(ErrorCode::kRangeError, "log_card must be positive");
  // ln(n L)/n decreases once n L >= e; the other terms always decrease.
  const double n0 = std::exp(1.0) / p.log_card_x0;
  return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(n0)));
}

std::uint64_t minimal_n_for(const TropicalBoundParams& p, double target) {
  if (!(target > 0)) throw Error(ErrorCode::kRangeError, "target must be positive");
  const std::uint64_t n0 = epsilon_monotone_threshold(p);
  for (std::uint64_t n = 2; n <= n0; ++n)
    if (contraction_epsilons(p, static_cast<double>(n)).max() <= target) return n;
  std::uint64_t lo = n0;  // fails
  std::uint64_t hi = n0 * 2;
  while (contraction_epsilons(p, static_cast<double>(hi)).max() > target) {
    lo = hi;
    hi *= 2;
    if (hi > (std::uint64_t{1} << 62)) throw Error(ErrorCode::kRangeError, "target not reached");
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (contraction_epsilons(p, static_cast<double>(mid)).max() <= target) hi = mid;
    else lo = mid;
  }
  return hi;
}

bool chain_cone_check(std::span<const double> v) {
  double prev = 0.0;
  for (double x : v) {
    if (!(x >= prev)) return false;
    prev = x;
  }
  return true;
}

std::vector<double> normalized_power_entropy(const Diagram& d, unsigned n, std::size_t max_atoms) {
  if (n == 0) throw Error(ErrorCode::kBadParam, "power must be positive");
  const double base = static_cast<double>(d.initial_space().size());
  if (std::pow(base, n) > static_cast<double>(max_atoms))
    throw Error(ErrorCode::kCapExceeded, "tensor power too large");
  Diagram power = d;
  for (unsigned k = 1; k < n; ++k) power = tensor_diagrams(power, d);
  std::vector<double> h = entropy_vector(power);
  for (auto& v : h) v /= n;
  return h;
}

}  // namespace arrowc

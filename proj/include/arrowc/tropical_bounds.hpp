#pragma once

// Closed-form rate and defect calculators, the epsilon schedule of the
// contraction argument, chain-cone membership and normalized tensor powers.

#include <cstdint>
#include <span>
#include <vector>

#include "arrowc/diagrams.hpp"

namespace arrowc {

/// C and D_phi are free constants; the defaults are for exploration only.
struct TropicalBoundParams {
  double c = 1.0;
  double d_phi = 1.0;
  std::size_t size_g = 1;
  double log_card_x0 = 1.0;  // ln|X0(n)| = n * log_card_x0
};

/// C sqrt(ln^3 n / n). Throws kRangeError for n < 2.
double aep_rate(const TropicalBoundParams& p, double n);

/// phi(t) = 2 C t^(3/4). Throws kRangeError for t < 1.
double phi_defect(const TropicalBoundParams& p, double t);

/// Whether 2C t^(3/4) >= 2C t^(1/2) ln^(3/2) t.
bool phi_comparison_holds(double t);

/// Open interval of t > 1 where the comparison fails (it holds on [1, lo]
/// and on [hi, inf)).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval phi_comparison_failure();

struct Epsilons {
  double conditional = 0.0;  // 2 D phi(n)/n
  double x = 0.0;            // 20|G|/n + D phi(n)/n
  double height = 0.0;       // 4 ln(n log_card)/n + 2 D phi(n)/n
  double max() const;
};

/// Throws kRangeError for n < 2 or log_card_x0 <= 0.
Epsilons contraction_epsilons(const TropicalBoundParams& p, double n);

/// Smallest integer n >= 2 beyond which all three epsilons are nonincreasing.
std::uint64_t epsilon_monotone_threshold(const TropicalBoundParams& p);

/// Smallest integer n >= 2 with max epsilon <= target. Throws kRangeError
/// when target <= 0.
std::uint64_t minimal_n_for(const TropicalBoundParams& p, double target);

/// 0 <= x_1 <= ... <= x_k.
bool chain_cone_check(std::span<const double> v);

/// (1/n) ent(D^n); throws kCapExceeded when the initial space of D^n would
/// exceed max_atoms.
std::vector<double> normalized_power_entropy(const Diagram& d, unsigned n, std::size_t max_atoms = 1 << 20);

}  // namespace arrowc

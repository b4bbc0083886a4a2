#pragma once

// Entropy distance of fans, bounds on the intrinsic distance, exact
// minimum-entropy couplings of single spaces and the local coupling estimate.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "arrowc/diagrams.hpp"
#include "arrowc/rng.hpp"

namespace arrowc {

/// Sum over objects of (H(Z_i) - H(X_i)) + (H(Z_i) - H(Y_i)).
double kd_of_fan(const FanOfDiagrams& fan);

struct CouplingWitness {
  FanOfDiagrams fan;
  double kd = 0.0;
};

/// Joint table indexed [x atom][y atom]; rows and columns must sum to the
/// marginals.
using CouplingTable = std::vector<std::vector<Rational>>;

/// 2 H(Z) - H(X) - H(Y).
double coupling_kd(const ProbSpace& x, const ProbSpace& y, const CouplingTable& table);

/// Single-object fan for a coupling table. Throws kMapError on bad marginals.
CouplingWitness coupling_witness(const ProbSpace& x, const ProbSpace& y, const CouplingTable& table);

struct CouplingOptions {
  /// Exact enumeration is attempted only for |X|*|Y| up to this (at most 64).
  std::size_t cap = 30;
  /// Throw kCapExceeded instead of falling back to the greedy coupling.
  bool require_exact = false;
};

struct MinCouplingResult {
  CouplingTable table;
  double value = 0.0;
  bool exact = false;          // false: greedy upper bound only
  std::size_t vertices = 0;    // distinct vertices visited
};

/// Minimizes 2H(Z) - H(X) - H(Y) over all couplings by visiting every vertex
/// of the transportation polytope (one per spanning tree basis).
MinCouplingResult min_entropy_coupling(const ProbSpace& x, const ProbSpace& y, const CouplingOptions& options = {});

/// Repeatedly pairs the heaviest remaining row and column mass.
CouplingTable greedy_coupling(const ProbSpace& x, const ProbSpace& y);

/// A random exact coupling: cells in random order each receive a random
/// fraction of the largest admissible mass, the remainder is filled in
/// northwest-corner order.
CouplingTable random_coupling(const ProbSpace& x, const ProbSpace& y, Rng& rng);

/// Sets and surjections underlying a diagram, with distributions on the
/// initial set given as weight vectors (zero entries allowed).
struct SetDiagram {
  IndexingCategory category;
  std::vector<std::vector<Atom>> sets;              // by object
  std::vector<std::vector<std::size_t>> from_initial;  // initial set -> set i

  /// Sets of d's supports with its composite maps.
  static SetDiagram of(const Diagram& d);
  const std::vector<Atom>& initial_set() const { return sets[category.initial()]; }
};

/// The diagram (S, pi): pushforwards of pi along every map.
Diagram distribution_diagram(const SetDiagram& s, const std::vector<Rational>& pi0);
/// pi0 as a weight vector over s.initial_set(); throws kUnknownAtom.
std::vector<Rational> initial_distribution(const SetDiagram& s, const Diagram& d);

/// pi = (1-alpha) common + alpha rest_left, pi' likewise with rest_right.
/// With alpha = 1 the common part is empty and the rests are pi, pi'.
struct LocalDecomposition {
  Rational alpha;
  std::vector<Rational> common;
  std::vector<Rational> rest_left;
  std::vector<Rational> rest_right;
  bool degenerate() const { return alpha == 1; }
};

LocalDecomposition local_decomposition(const std::vector<Rational>& pi, const std::vector<Rational>& pi_prime);

struct LocalOptions {
  /// Build the witness fan explicitly when |S0|^2 is at most this.
  std::size_t materialize_cap = 4096;
  /// Build the two fans over Lambda_alpha and check their slices.
  bool lambda_fans = true;
};

struct LocalEstimate {
  Rational alpha;
  double bound = 0.0;           // 2|G|(alpha ln|S0| + H(Lambda_alpha))
  double witness_kd = 0.0;      // closed form
  std::optional<double> materialized_kd;
  std::optional<FanOfDiagrams> witness;
  std::optional<std::pair<FanOfDiagrams, FanOfDiagrams>> lambda_fans;  // over constant Lambda_alpha
  bool slices_ok = true;        // conditioned slices of the two fans match
  bool rough = false;           // alpha = 1
};

/// Mixture coupling: with probability 1-alpha both sides draw the same atom
/// from the common part, otherwise independent draws from the two rests.
LocalEstimate local_estimate_witness(const SetDiagram& s, const std::vector<Rational>& pi,
                                     const std::vector<Rational>& pi_prime, const LocalOptions& options = {});

struct IkdBounds {
  double lower = 0.0;
  double upper = 0.0;
  CouplingWitness witness;   // achieves upper
  bool exact = false;        // single spaces within the coupling cap; lower == upper
};

/// Lower bound from entropy gaps; upper bound from the best of the
/// independent coupling, the identity coupling of isomorphic diagrams, the
/// local witness when the supports agree, and the exact coupling for single
/// spaces. Throws kShapeMismatch.
IkdBounds ikd_bounds(const Diagram& x, const Diagram& y, const CouplingOptions& options = {});

/// Sum_u p(u) upper(u) + 2|G| H(U) where both fans project onto a constant
/// diagram of U. Throws kMismatchedU.
double slicing_rhs(const FanOfDiagrams& fan_x, const FanOfDiagrams& fan_y,
                   const std::function<double(std::size_t)>& per_u_upper);

}  // namespace arrowc

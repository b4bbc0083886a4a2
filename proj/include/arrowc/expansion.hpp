#pragma once

// Arrow expansion of a reduced admissible fan by an independent uniform
// space W on the ancestors of U.

#include <string>
#include <vector>

#include "arrowc/diagrams.hpp"

namespace arrowc {

struct ExpansionSpec {
  Diagram base;
  FanIndices fan;
  unsigned m = 1;  // W = uniform(m), so the added entropy is ln m
};

/// Spaces V at ancestors of u become V (x) W with atoms "(v,w)". Throws
/// kNotReduced, kBadParam (m = 0 or an object in both cones).
Diagram expand_diagram(const ExpansionSpec& spec);

/// Inverse of expand_diagram: drops the W coordinate again.
Diagram marginalize_expansion(const Diagram& expanded, const ExpansionSpec& spec);

struct ExpansionReport {
  double z_given_x = 0.0;   // H(Z) - H(X) after expansion
  double expected = 0.0;    // ln m + H(Z) - H(X) before
  double max_shift_error = 0.0;
  std::size_t conditioned_checked = 0;
  bool admissible = false;
  bool reduced = false;
  bool recovered = false;
  std::vector<std::string> clauses;  // passed clauses, in order
};

/// Throws kVerificationFailed naming the first violated clause.
ExpansionReport verify_expansion(const Diagram& original, const Diagram& expanded, const ExpansionSpec& spec);

}  // namespace arrowc

#pragma once

// Named coordinate diagrams used by the CLI, the demo and the tests.

#include <string>
#include <string_view>
#include <vector>

#include "arrowc/diagrams.hpp"

namespace arrowc {

struct Fixture {
  std::string name;
  Diagram diagram;
  FanIndices fan;
};

/// "1..15", "3,5,7" or mixtures like "1..3,9". Throws kParse.
std::vector<int> parse_index_list(std::string_view text);

/// Objects z -> x, z -> u with coordinates {1..l}, I and J.
Fixture coordinate_two_fan(int l, const std::vector<int>& x_coords, const std::vector<int>& u_coords);

/// Full Lambda_3 shape on l = 6 coordinates: "1" = {1,2}, "2" = {2,3,4},
/// "3" = {4,5,6}; every other object carries the union over its subset.
/// The fan is "1,2" <- "1,2,3" -> "3".
Fixture lambda3_fixture();

/// Same shape with "1" = {1,2}, "2" = {2,3}, "3" = {1,3} on l = 3, so the
/// fan "1,2" <- "1,2,3" -> "3" is reduced.
Fixture lambda3_reduced_fixture();

/// z -> x, z -> w -> u with w strictly finer than u: admissible but the
/// ancestors of u are not generated by the fan.
Fixture not_fan_generated_fixture();

/// Diamond z -> x, z -> y, x -> v, y -> v whose two paths to v disagree.
/// Returned as JSON text since it cannot be built as a Diagram.
std::string broken_diamond_json();

/// two_fan (l = 6, I = 1..4, J = 3..6), reduced_two_fan (l = 4, I = 1..4,
/// J = 3..4), coord (uses l, I, J), lambda3, lambda3_reduced,
/// not_fan_generated. Throws kConfig for unknown names.
Fixture named_fixture(std::string_view name, int l = 0, const std::vector<int>& x_coords = {},
                      const std::vector<int>& u_coords = {});

}  // namespace arrowc

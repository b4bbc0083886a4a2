#include "doctest.h"

#include <cmath>

#include "arrowc/error.hpp"
#include "arrowc/expansion.hpp"
#include "arrowc/fixtures.hpp"

using namespace arrowc;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kParse;
}

}  // namespace

TEST_CASE("trivial expansion") {
  const Fixture f = named_fixture("reduced_two_fan");
  const ExpansionSpec spec{f.diagram, f.fan, 1};
  const auto e = expand_diagram(spec);
  CHECK(diagram_isomorphic(e, f.diagram).has_value());
  const auto r = verify_expansion(f.diagram, e, spec);
  CHECK(std::abs(r.z_given_x) < 1e-12);
  CHECK(r.recovered);
  CHECK(r.clauses.size() >= 5);
}

TEST_CASE("expansion shifts the upper cone by ln m") {
  for (const char* name : {"reduced_two_fan", "lambda3_reduced"}) {
    const Fixture f = named_fixture(name);
    const auto& cat = f.diagram.category();
    const auto upper = cat.ancestors(f.fan.u);
    for (unsigned m : {1u, 2u, 3u, 4u}) {
      const ExpansionSpec spec{f.diagram, f.fan, m};
      const auto e = expand_diagram(spec);
      const double lm = std::log(static_cast<double>(m));
      CHECK(std::abs(e.initial_space().entropy() - e.space(f.fan.x).entropy() - lm) < 1e-12);
      for (std::size_t i = 0; i < cat.size(); ++i) {
        const bool up = std::find(upper.begin(), upper.end(), i) != upper.end();
        const double shift = e.space(i).entropy() - f.diagram.space(i).entropy();
        CHECK(std::abs(shift - (up ? lm : 0.0)) < 1e-12);
      }
      const auto r = verify_expansion(f.diagram, e, spec);
      CHECK(std::abs(r.z_given_x - r.expected) < 1e-12);
      CHECK(r.conditioned_checked > 0);
      CHECK(r.admissible);
      CHECK(r.recovered);
      CHECK(same_labeled(marginalize_expansion(e, spec), f.diagram));
      CHECK(analyze(e).homogeneous);
    }
  }
}

TEST_CASE("expansion preconditions") {
  const Fixture f = named_fixture("two_fan");
  CHECK(code_of([&] { expand_diagram({f.diagram, f.fan, 2}); }) == ErrorCode::kNotReduced);
  const Fixture r = named_fixture("reduced_two_fan");
  CHECK(code_of([&] { expand_diagram({r.diagram, r.fan, 0}); }) == ErrorCode::kBadParam);
}

TEST_CASE("verification rejects a wrong expansion") {
  const Fixture r = named_fixture("reduced_two_fan");
  const ExpansionSpec spec{r.diagram, r.fan, 2};
  const auto wrong = expand_diagram({r.diagram, r.fan, 3});
  CHECK(code_of([&] { verify_expansion(r.diagram, wrong, spec); }) == ErrorCode::kVerificationFailed);
}

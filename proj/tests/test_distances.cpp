#include "doctest.h"

#include <cmath>

#include "arrowc/distances.hpp"
#include "arrowc/error.hpp"
#include "arrowc/fixtures.hpp"
#include "test_support.hpp"

using namespace arrowc;

namespace {

const double kLn2 = std::log(2.0);
constexpr double kIkdU2Lambda = 0.8239592165010822685;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kParse;
}

const IndexingCategory& point() {
  static const IndexingCategory cat = IndexingCategory::build({"0"}, {});
  return cat;
}

Diagram single(const ProbSpace& x) { return Diagram::constant(point(), x); }

CouplingTable diagonal(const ProbSpace& x) {
  CouplingTable t(x.size(), std::vector<Rational>(x.size(), 0));
  for (std::size_t i = 0; i < x.size(); ++i) t[i][i] = x.weight(i);
  return t;
}

CouplingTable independent(const ProbSpace& x, const ProbSpace& y) {
  CouplingTable t(x.size(), std::vector<Rational>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) t[i][j] = x.weight(i) * y.weight(j);
  return t;
}

void check_marginals(const ProbSpace& x, const ProbSpace& y, const CouplingTable& t) {
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(testing::table_row_sum(t, i) == x.weight(i));
  for (std::size_t j = 0; j < y.size(); ++j) CHECK(testing::table_col_sum(t, j) == y.weight(j));
  for (const auto& row : t)
    for (const auto& q : row) CHECK(q >= 0);
}

// X (x) U^G with its two projections.
FanOfDiagrams product_fan(const Diagram& x, const ProbSpace& u) {
  const Diagram uc = Diagram::constant(x.category(), u);
  Diagram top = tensor_diagrams(x, uc);
  std::vector<std::vector<std::size_t>> to_l(x.size()), to_r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < top.space(i).size(); ++k) {
      to_l[i].push_back(k / u.size());
      to_r[i].push_back(k % u.size());
    }
  return FanOfDiagrams::make(top, x, uc, to_l, to_r);
}

}  // namespace

TEST_CASE("entropy distance of explicit couplings") {
  const auto u2 = uniform_space(2);
  CHECK(coupling_kd(u2, u2, diagonal(u2)) == doctest::Approx(0.0));
  CHECK(coupling_kd(u2, u2, independent(u2, u2)) == doctest::Approx(2 * kLn2));
  CHECK(coupling_witness(u2, u2, independent(u2, u2)).kd == doctest::Approx(2 * kLn2));
  const auto w = coupling_witness(u2, u2, diagonal(u2));
  CHECK(kd_of_fan(w.fan) == doctest::Approx(0.0));
  CHECK(w.fan.top.initial_space().size() == 2);
  auto bad = diagonal(u2);
  std::swap(bad[1][0], bad[1][1]);
  std::swap(bad[0][0], bad[0][1]);
  bad[1][0] = 0;
  bad[1][1] = Rational(1, 2);
  CHECK(code_of([&] { coupling_witness(u2, u2, bad); }) == ErrorCode::kMapError);

  const Fixture f = named_fixture("two_fan");
  const auto& d = f.diagram;
  std::vector<std::vector<std::size_t>> ids(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t a = 0; a < d.space(i).size(); ++a) ids[i].push_back(a);
  CHECK(kd_of_fan(FanOfDiagrams::make(d, d, d, ids, ids)) == 0.0);
}

TEST_CASE("minimum-entropy coupling examples") {
  const auto u2 = uniform_space(2), u4 = uniform_space(4), l = lambda_space(Rational(1, 4));
  const auto same = min_entropy_coupling(l, l);
  CHECK(same.exact);
  CHECK(std::abs(same.value) < 1e-15);
  CHECK(same.table[0][1] == 0);
  const auto r24 = min_entropy_coupling(u2, u4);
  CHECK(std::abs(r24.value - kLn2) < 1e-12);
  check_marginals(u2, u4, r24.table);
  const auto r2l = min_entropy_coupling(u2, l);
  CHECK(std::abs(r2l.value - kIkdU2Lambda) < 1e-12);
  check_marginals(u2, l, r2l.table);
  std::size_t nonzero = 0;
  for (const auto& row : r2l.table)
    for (const auto& q : row) nonzero += q != 0;
  CHECK(nonzero == 3);

  const auto big = uniform_space(9);
  CHECK(code_of([&] { min_entropy_coupling(big, big, CouplingOptions{30, true}); }) == ErrorCode::kCapExceeded);
  const auto fallback = min_entropy_coupling(big, big);
  CHECK_FALSE(fallback.exact);
  check_marginals(big, big, fallback.table);
}

TEST_CASE("vertex enumeration matches brute force") {
  Rng rng(31);
  for (int k = 0; k < 60; ++k) {
    const auto x = testing::random_space(rng, 4, "x");
    const auto y = testing::random_space(rng, 4, "y");
    const auto r = min_entropy_coupling(x, y);
    REQUIRE(r.exact);
    check_marginals(x, y, r.table);
    CHECK(std::abs(r.value - testing::brute_force_mec(x, y)) < 1e-9);
    CHECK(std::abs(coupling_kd(x, y, r.table) - r.value) < 1e-12);
    CHECK(r.value >= std::abs(x.entropy() - y.entropy()) - 1e-9);
    const auto g = greedy_coupling(x, y);
    check_marginals(x, y, g);
    CHECK(coupling_kd(x, y, g) >= r.value - 1e-9);
    for (int j = 0; j < 20; ++j) {
      const auto t = random_coupling(x, y, rng);
      check_marginals(x, y, t);
      CHECK(coupling_kd(x, y, t) >= r.value - 1e-9);
    }
  }
}

TEST_CASE("intrinsic distance bounds") {
  const Fixture f = named_fixture("two_fan");
  const auto self = ikd_bounds(f.diagram, f.diagram);
  CHECK(self.lower == 0.0);
  CHECK(self.upper == doctest::Approx(0.0));

  const auto b = ikd_bounds(single(uniform_space(2)), single(uniform_space(4)));
  CHECK(b.exact);
  CHECK(std::abs(b.lower - kLn2) < 1e-12);
  CHECK(std::abs(b.upper - kLn2) < 1e-12);
  CHECK(b.witness.kd == doctest::Approx(b.upper));

  // Same sets and maps, different distributions: the local witness applies.
  const auto z = uniform_space(4);
  const auto zl = ProbSpace::make(z.atoms(), std::vector<std::string>{"1/4", "1/4", "1/8", "3/8"});
  auto fan_on = [&](const ProbSpace& base) {
    return Diagram::from_variables(standard_category(StandardKind::kTwoFan), base,
                                   {{0, 1, 2, 3}, {0, 0, 1, 1}, {0, 1, 0, 1}}, {z.atoms(), {"0", "1"}, {"0", "1"}});
  };
  const auto near = ikd_bounds(fan_on(z), fan_on(zl));
  CHECK(near.lower <= near.upper + 1e-12);
  CHECK(kd_of_fan(near.witness.fan) == doctest::Approx(near.upper));
  CHECK(code_of([&] { ikd_bounds(fan_on(z), single(z)); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("local decomposition") {
  const std::vector<Rational> half{Rational(1, 2), Rational(1, 2)};
  const std::vector<Rational> quarter{Rational(1, 4), Rational(3, 4)};
  const auto same = local_decomposition(half, half);
  CHECK(same.alpha == 0);
  CHECK(same.common == half);
  const auto apart = local_decomposition({1, 0}, {0, 1});
  CHECK(apart.alpha == 1);
  CHECK(apart.degenerate());
  const auto d = local_decomposition(half, quarter);
  CHECK(d.alpha == Rational(1, 4));
  CHECK(d.common == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});
  CHECK(d.rest_left == std::vector<Rational>{1, 0});
  CHECK(d.rest_right == std::vector<Rational>{0, 1});
}

TEST_CASE("local estimate") {
  const SetDiagram s = SetDiagram::of(named_fixture("reduced_two_fan").diagram);
  const std::size_t card = s.initial_set().size();
  const double ln_card = std::log(static_cast<double>(card));
  const std::vector<Rational> flat(card, Rational(1, static_cast<unsigned long>(card)));

  const auto zero = local_estimate_witness(s, flat, flat);
  CHECK(zero.bound == 0.0);
  CHECK(std::abs(zero.witness_kd) < 1e-12);
  REQUIRE(zero.materialized_kd.has_value());
  CHECK(std::abs(*zero.materialized_kd) < 1e-12);

  std::vector<Rational> left(card, 0), right(card, 0);
  left[0] = 1;
  right[1] = 1;
  const auto rough = local_estimate_witness(s, left, right);
  CHECK(rough.rough);
  CHECK(rough.bound == doctest::Approx(2.0 * 3 * ln_card));

  Rng rng(32);
  for (int k = 0; k < 50; ++k) {
    const auto pi = testing::random_weights(rng, card, 6, true);
    const auto pj = testing::random_weights(rng, card, 6, true);
    const auto est = local_estimate_witness(s, pi, pj);
    REQUIRE(est.materialized_kd.has_value());
    CHECK(std::abs(*est.materialized_kd - est.witness_kd) < 1e-9);
    CHECK(est.witness_kd <= est.bound + 1e-9);
    CHECK(est.slices_ok);
    REQUIRE(est.lambda_fans.has_value());
    if (est.alpha > 0 && est.alpha < 1) {
      // Slices over the two atoms of Lambda_alpha: the common one costs
      // nothing, the other at most the rough estimate.
      const auto& [fx, fy] = *est.lambda_fans;
      const auto lam = fx.right.initial_space();
      const double rhs = slicing_rhs(fx, fy, [&](std::size_t u) {
        return lam.atom(u) == "■" ? 2.0 * 3 * ln_card : 0.0;
      });
      CHECK(std::abs(rhs - est.bound) < 1e-9);
    }
  }
}

TEST_CASE("slicing right-hand side") {
  const auto d = named_fixture("reduced_two_fan").diagram;
  const auto fd = product_fan(d, dirac_space());
  CHECK(slicing_rhs(fd, fd, [](std::size_t) { return 1.25; }) == doctest::Approx(1.25));
  const auto u3 = uniform_space(3);
  const auto fu = product_fan(d, u3);
  CHECK(slicing_rhs(fu, fu, [](std::size_t) { return 0.0; }) == doctest::Approx(2.0 * 3 * std::log(3.0)));
  CHECK(code_of([&] { slicing_rhs(fd, fu, [](std::size_t) { return 0.0; }); }) == ErrorCode::kMismatchedU);
}

TEST_CASE("set diagrams round trip") {
  const auto d = named_fixture("two_fan").diagram;
  const SetDiagram s = SetDiagram::of(d);
  const auto pi = initial_distribution(s, d);
  CHECK(same_labeled(distribution_diagram(s, pi), d));
  std::vector<Rational> point_mass(pi.size(), 0);
  point_mass[5] = 1;
  const auto dirac = distribution_diagram(s, point_mass);
  for (std::size_t i = 0; i < dirac.size(); ++i) CHECK(dirac.space(i).size() == 1);
}

#include "doctest.h"

#include <cmath>

#include "arrowc/contraction.hpp"
#include "arrowc/error.hpp"
#include "arrowc/fixtures.hpp"
#include "test_support.hpp"

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

ExtendedFan extend(const Fixture& f) { return extend_admissible_fan(f.diagram, f.fan); }

Fixture coord(int l, const std::string& i, const std::string& j) {
  return coordinate_two_fan(l, parse_index_list(i), parse_index_list(j));
}

double conditional(const Diagram& d, std::size_t a, std::size_t b) {
  return joint_space(d, a, b).space.entropy() - d.space(b).entropy();
}

}  // namespace

TEST_CASE("extension of admissible fans") {
  const auto two = extend(named_fixture("two_fan"));
  CHECK(two.size_h() == 1);
  CHECK(two.size_g() == 3);
  CHECK(two.card_x0() == 16);
  CHECK(two.rho == Rational(1, 4));
  CHECK(two.y0_pairs.size() == 64);
  CHECK(two.ydiag.initial_space().size() == 64);
  for (const auto& fiber : two.fiber_of_u) CHECK(fiber.size() == 4);

  const auto lam = extend(lambda3_fixture());
  CHECK(lam.size_h() == 3);
  CHECK(lam.ydiag.size() == 3);
  CHECK(lam.rho == Rational(1, 2));
  CHECK(lam.conditioned_x(0).initial_space().size() == 8);

  const auto cat = IndexingCategory::build({"z", "x", "u", "w"}, {{"z", "x"}, {"z", "u"}, {"z", "w"}});
  const auto outside = coordinate_diagram(cat, {{"x", {1}}, {"u", {2}}, {"w", {3}}}, 3);
  CHECK(code_of([&] { extend_admissible_fan(outside, FanIndices::from_ids(cat, "x", "z", "u")); }) ==
        ErrorCode::kNotAdmissible);

  // A skewed distribution on the product of two bits: admissible, not homogeneous.
  const auto fan = standard_category(StandardKind::kTwoFan);
  const auto z = ProbSpace::make({"00", "01", "10", "11"}, std::vector<std::string>{"1/8", "1/8", "3/8", "3/8"});
  const auto skew = Diagram::from_variables(fan, z, {{0, 1, 2, 3}, {0, 0, 1, 1}, {0, 1, 0, 1}},
                                            {z.atoms(), {"0", "1"}, {"0", "1"}});
  CHECK(code_of([&] { extend_admissible_fan(skew, FanIndices::from_ids(fan, "x", "z", "u")); }) ==
        ErrorCode::kNotHomogeneous);
}

TEST_CASE("default parameters") {
  const auto big = extend(coord(17, "1..15", "14..17"));
  const auto p = default_parameters(big, 5);
  CHECK(p.n == 4496);
  CHECK(std::abs(p.t - 0.96179669392597560) < 1e-12);
  CHECK_FALSE(p.regime_warning);
  CHECK(p.seed == 5);

  const auto small = default_parameters(extend(named_fixture("two_fan")), 1);
  CHECK(small.n == 86);
  CHECK(std::abs(small.t - 3.6067376022224085) < 1e-12);
  CHECK(small.regime_warning);

  const auto trivial = extend(coord(4, "1..4", ""));
  CHECK(trivial.rho == 1);
  const double l = std::log(16.0);
  CHECK(default_parameters(trivial, 1).n == static_cast<std::uint64_t>(std::ceil(l * l * l)));

  CHECK(code_of([] { default_parameters(extend(coord(1, "", "1")), 1); }) == ErrorCode::kBadParam);
}

TEST_CASE("contraction with trivial U") {
  const auto ext = extend(coord(4, "1..4", ""));
  auto p = default_parameters(ext, 3);
  const auto run = contract_once(ext, p);
  CHECK(run.alpha == 0);
  CHECK(run.coverage);
  CHECK(run.total == p.n * 16);
  for (auto c : run.counts) CHECK(c == p.n);
  CHECK(run.height == doctest::Approx(std::log(static_cast<double>(p.n))));
  REQUIRE(run.x_prime.has_value());
  CHECK(same_labeled(*run.x_prime, ext.xdiag));
  CHECK(run.witness_kd == doctest::Approx(0.0));
}

TEST_CASE("contraction identities over many seeds") {
  const auto ext = extend(coord(8, "1..6", "5..8"));
  auto p = default_parameters(ext, 11);
  p.n = 150;
  p.t = 0.5;
  const auto runs = contract_many(ext, p, 20, 1);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k];
    CHECK(r.seed == subseed(11, k));
    CHECK(r.sum_nu_ok(ext));
    CHECK(r.sum_p_ok());
    CHECK(r.fiber_iso_ok);
    CHECK(std::abs(r.height - r.height_alt) < 1e-9);
    CHECK(r.witness_kd <= r.ikd_upper + 1e-9);
    CHECK(r.ikd_threshold == 20.0);
    CHECK(r.u_bar.size() == 150);
    std::uint64_t total = 0;
    for (auto c : r.counts) total += c;
    CHECK(total == r.total);
    // Every sample index contributes exactly its fiber.
    CHECK(r.total == 150 * ext.fiber_of_u[0].size());
    REQUIRE(r.y_prime.has_value());
    CHECK(r.y_prime->initial_space().size() == r.total);
  }
  const auto threaded = contract_many(ext, p, 20, 4);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    CHECK(threaded[k].counts == runs[k].counts);
    CHECK(threaded[k].u_bar == runs[k].u_bar);
  }
}

TEST_CASE("recovery of the collapsed diagram") {
  const Fixture two = named_fixture("two_fan");
  const auto ext = extend(two);
  const auto run = contract_once(ext, default_parameters(ext, 2));
  const auto rec = recover_collapsed_diagram(ext, run);
  CHECK(rec.category() == two.diagram.category());
  CHECK(same_labeled(sub_diagram(rec, ext.h), *run.x_prime));
  CHECK(rec.space(two.fan.u).size() <= run.v_n.size());
  CHECK(rec.initial_space().size() == run.total);
  CHECK(std::abs(conditional(rec, two.fan.x, two.fan.u) - conditional(two.diagram, two.fan.x, two.fan.u)) < 1e-9);

  const Fixture lam = lambda3_fixture();
  const auto lext = extend(lam);
  const auto lrun = contract_once(lext, default_parameters(lext, 4));
  const auto lrec = recover_collapsed_diagram(lext, lrun);
  CHECK(lrec.size() == 7);
  CHECK(std::abs(conditional(lrec, lam.fan.x, lam.fan.u) - conditional(lam.diagram, lam.fan.x, lam.fan.u)) < 1e-9);
  for (std::size_t m : lext.h.members) CHECK(lrec.space(m).size() <= lam.diagram.space(m).size());

  const Fixture bad = not_fan_generated_fixture();
  const auto bext = extend(bad);
  const auto brun = contract_once(bext, default_parameters(bext, 1));
  CHECK(code_of([&] { recover_collapsed_diagram(bext, brun); }) == ErrorCode::kNotFanGenerated);

  ContractOptions no_y;
  no_y.y_prime_cap = 0;
  const auto thin = contract_once(ext, default_parameters(ext, 2), no_y);
  CHECK_FALSE(thin.y_prime.has_value());
  CHECK(code_of([&] { recover_collapsed_diagram(ext, thin); }) == ErrorCode::kCapExceeded);
}

TEST_CASE("analytic tail bounds") {
  const auto i = tail_bound(TailKind::kBinomialTwoSided, 200, Rational(1, 4), 0.5);
  CHECK(std::abs(i.bound - 0.031007707198018638) < 1e-15);
  const auto zero = tail_bound(TailKind::kBinomialTwoSided, 200, Rational(1, 4), 0.0);
  CHECK(zero.bound == 2.0);
  CHECK(zero.reported == 1.0);
  CHECK(code_of([] { tail_bound(TailKind::kBinomialTwoSided, 10, Rational(1, 2), 1.5); }) == ErrorCode::kRangeError);
  CHECK(tail_bound(TailKind::kBinomialEntropy, 10, Rational(1, 2), 1.5).bound > 0);
  CHECK(code_of([] { tail_bound(TailKind::kHeight, 10, Rational(1, 2), 2.5); }) == ErrorCode::kRangeError);
  CHECK(code_of([] { tail_bound(TailKind::kTotalVar, 10, Rational(0), 0.5); }) == ErrorCode::kRangeError);

  const TailExtra e64{64, 3};
  const auto tv = tail_bound(TailKind::kTotalVar, 200, Rational(1, 2), 0.5, e64);
  CHECK(std::abs(tv.bound - 0.030767292981697819) < 1e-15);
  const auto h = tail_bound(TailKind::kHeight, 200, Rational(1, 2), 0.5, e64);
  CHECK(h.bound == doctest::Approx(7.9689).epsilon(1e-4));
  CHECK(h.reported == 1.0);
  CHECK(*h.threshold == doctest::Approx(std::log(100.0) + 0.5));
  CHECK(code_of([&] { tail_bound(TailKind::kIkd, 200, Rational(1, 2), 0.5, e64); }) == ErrorCode::kRangeError);

  // With N rho = ln^3|X0| the height threshold is 3 ln ln|X0| + t.
  const std::size_t card = std::size_t{1} << 15;
  const double l = std::log(static_cast<double>(card));
  const Rational rho(1, 4);
  const auto n = static_cast<std::uint64_t>(std::ceil(l * l * l * 4));
  const auto th = *tail_bound(TailKind::kHeight, n, rho, 0.9617966939259756, {card, 3}).threshold;
  CHECK(th == doctest::Approx(3 * std::log(l) + 0.9617966939259756).epsilon(1e-4));
  CHECK(th == doctest::Approx(7.986445724379612).epsilon(1e-12));
  CHECK(th <= 4 * std::log(l));
  const auto ikd = tail_bound(TailKind::kIkd, n, rho, 0.9617966939259756, {card, 3});
  CHECK(*ikd.threshold == doctest::Approx(0.9617966939259756 * 6 * l));
  CHECK(tail_kind_name(TailKind::kBinomialTwoSided) != tail_kind_name(TailKind::kBinomialEntropy));
}

TEST_CASE("Monte Carlo tails") {
  const auto rs = monte_carlo_binomial(200, Rational(1, 4), {0.5, 1.0}, {0.5}, 20000, 9, 1);
  REQUIRE(rs.size() == 3);
  for (const auto& r : rs) {
    CHECK(r.pass);
    CHECK(r.trials == 20000);
  }
  CHECK(rs[0].empirical < 0.031);
  CHECK(rs[1].t == 1.0);
  const auto again = monte_carlo_binomial(200, Rational(1, 4), {0.5, 1.0}, {0.5}, 20000, 9, 3);
  for (std::size_t k = 0; k < rs.size(); ++k) CHECK(again[k].hits == rs[k].hits);

  const auto ext = extend(coord(7, "1..6", "6..7"));
  CHECK(ext.card_x0() == 64);
  CHECK(ext.rho == Rational(1, 2));
  const auto cs = monte_carlo_contraction(ext, 200, 0.5, 300, 4, 1);
  REQUIRE(cs.size() == 2);
  for (const auto& r : cs) CHECK(r.pass);
  CHECK(cs[0].kind == TailKind::kTotalVar);
  CHECK(cs[1].kind == TailKind::kHeight);
}

TEST_CASE("sampler and generator") {
  CHECK(std::string(kRngProtocol) == "sm64-xoshiro256ss/v1");
  Rng a(1), b(1);
  for (int k = 0; k < 10; ++k) CHECK(a.next() == b.next());
  CHECK(subseed(1, 0) != subseed(1, 1));
  Rng r(5);
  for (int k = 0; k < 1000; ++k) CHECK(r.bounded(7) < 7);
  const DiscreteSampler s({Rational(1, 4), Rational(0), Rational(3, 4)});
  std::size_t counts[3] = {0, 0, 0};
  for (int k = 0; k < 40000; ++k) ++counts[s(r)];
  CHECK(counts[1] == 0);
  CHECK(std::abs(static_cast<double>(counts[0]) / 40000 - 0.25) < 0.01);
  const BernoulliSampler always(1), never(0);
  CHECK(always(r));
  CHECK_FALSE(never(r));
}

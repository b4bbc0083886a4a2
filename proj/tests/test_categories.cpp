#include "doctest.h"

#include "arrowc/categories.hpp"
#include "arrowc/error.hpp"
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

IndexingCategory diamond() { return standard_category(StandardKind::kDiamond); }

}  // namespace

TEST_CASE("two-fan from covers") {
  const auto cat = IndexingCategory::build({"z", "x", "u"}, {{"z", "x"}, {"z", "u"}});
  CHECK(cat.size() == 3);
  CHECK(cat.id(cat.initial()) == "z");
  CHECK(cat.prime_morphisms().size() == 2);
  CHECK(cat == standard_category(StandardKind::kTwoFan));
}

TEST_CASE("single object category") {
  const auto cat = IndexingCategory::build({"a"}, {});
  CHECK(cat.initial() == 0);
  CHECK(cat.morphism_count() == 0);
}

TEST_CASE("construction errors") {
  CHECK(code_of([] { IndexingCategory::build({"x", "u", "v"}, {{"x", "v"}, {"u", "v"}}); }) ==
        ErrorCode::kNoInitialObject);
  CHECK(code_of([] { IndexingCategory::build({"a", "b"}, {{"a", "b"}, {"b", "a"}}); }) == ErrorCode::kCycle);
  CHECK(code_of([] { IndexingCategory::build({"a"}, {{"a", "q"}}); }) == ErrorCode::kUnknownObject);
  // Two incomparable common ancestors of x and y below the root.
  CHECK(code_of([] {
          IndexingCategory::build({"r", "p", "q", "x", "y"},
                                  {{"r", "p"}, {"r", "q"}, {"p", "x"}, {"p", "y"}, {"q", "x"}, {"q", "y"}});
        }) == ErrorCode::kLcaViolation);
  CHECK(code_of([] { parse_standard_kind("cube"); }) == ErrorCode::kUnknownKind);
}

TEST_CASE("declared composites are not prime") {
  const auto cat = IndexingCategory::build({"3", "2", "1"}, {{"3", "2"}, {"2", "1"}, {"3", "1"}});
  CHECK(cat.prime_morphisms().size() == 2);
  CHECK_FALSE(cat.is_prime(0, 2));
  CHECK(cat.prime_path(0, 2) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("standard categories") {
  const auto chain = standard_category(StandardKind::kChain, 3);
  CHECK(chain.size() == 3);
  CHECK(chain.morphism_count() == 3);
  CHECK(chain.id(chain.initial()) == "3");

  for (std::size_t n = 1; n <= 5; ++n) {
    const auto lam = standard_category(StandardKind::kFullLambda, n);
    CHECK(lam.size() == (std::size_t{1} << n) - 1);
    // Subset order: S -> T iff T is a subset of S, checked by enumeration.
    for (std::size_t i = 0; i < lam.size(); ++i)
      for (std::size_t j = 0; j < lam.size(); ++j) {
        auto bits = [](const std::string& id) {
          unsigned m = 0;
          std::size_t pos = 0;
          while (pos < id.size()) {
            const std::size_t end = id.find(',', pos);
            m |= 1u << std::stoi(id.substr(pos, end - pos));
            if (end == std::string::npos) break;
            pos = end + 1;
          }
          return m;
        };
        const unsigned s = bits(lam.id(i)), t = bits(lam.id(j));
        CHECK(lam.reaches(i, j) == ((s & t) == t));
      }
  }
  const auto lam2 = standard_category(StandardKind::kFullLambda, 2);
  CHECK(lam2.id(lam2.initial()) == "1,2");
}

TEST_CASE("cones") {
  const auto fan = standard_category(StandardKind::kTwoFan);
  CHECK(cone_members(fan, "z", ConeDirection::kAncestors).members == std::vector<std::size_t>{0});
  CHECK(cone_members(fan, "z", ConeDirection::kDescendants).members.size() == 3);
  const auto chain = standard_category(StandardKind::kChain, 3);
  CHECK(cone_members(chain, "1", ConeDirection::kAncestors).members.size() == 3);
  CHECK(cone_members(chain, "2", ConeDirection::kDescendants).category.size() == 2);
  const auto d = diamond();
  const auto up = cone_members(d, "x", ConeDirection::kAncestors);
  CHECK(up.category.id(up.category.initial()) == "z");
  CHECK(code_of([&] { restrict_category(d, {0, 3}); }) == ErrorCode::kNotClosed);
}

TEST_CASE("least common ancestors") {
  const auto fan = standard_category(StandardKind::kTwoFan);
  CHECK(fan.lca(1, 1) == 1);
  CHECK(fan.lca(1, 2) == 0);
  const auto d = diamond();
  CHECK(d.id(d.lca(d.index_of("x"), d.index_of("y"))) == "z");
  CHECK(d.id(d.lca(d.index_of("x"), d.index_of("v"))) == "x");
}

TEST_CASE("collapse of a prime pair") {
  const auto fan = standard_category(StandardKind::kTwoFan);
  const auto c = collapse_object_pair(fan, 0, 1);
  CHECK(c.category.size() == 2);
  CHECK(c.mapping[0] == c.mapping[1]);
  CHECK(c.category.reaches(c.mapping[1], c.mapping[2]));
  CHECK(c.category.id(c.mapping[0]) == "x");

  const auto chain = standard_category(StandardKind::kChain, 3);
  const auto c2 = collapse_object_pair(chain, chain.index_of("3"), chain.index_of("2"));
  CHECK(c2.category.size() == 2);
  CHECK(c2.category.morphism_count() == 1);
  CHECK(code_of([&] { collapse_object_pair(chain, chain.index_of("3"), chain.index_of("1")); }) ==
        ErrorCode::kNotPrime);
}

TEST_CASE("random posets agree with search") {
  Rng rng(7);
  int built = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.bounded(7);
    std::vector<ObjectId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("o" + std::to_string(i));
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    std::vector<std::pair<ObjectId, ObjectId>> named;
    for (std::size_t j = 1; j < n; ++j) {
      const std::size_t parent = rng.bounded(j);
      covers.push_back({parent, j});
      for (std::size_t i = 0; i < j; ++i)
        if (i != parent && rng.bounded(4) == 0) covers.push_back({i, j});
    }
    for (const auto& [a, b] : covers) named.push_back({ids[a], ids[b]});
    const auto reach = testing::bfs_reachability(n, covers);
    // LCA property by brute force over the BFS closure.
    bool lca_ok = true;
    for (std::size_t a = 0; a < n && lca_ok; ++a)
      for (std::size_t b = 0; b < n && lca_ok; ++b) {
        std::vector<std::size_t> common;
        for (std::size_t k = 0; k < n; ++k)
          if (reach[k][a] && reach[k][b]) common.push_back(k);
        bool found = false;
        for (std::size_t c : common)
          found = found || std::all_of(common.begin(), common.end(), [&](std::size_t k) { return reach[k][c]; });
        lca_ok = found;
      }
    if (!lca_ok) {
      CHECK(code_of([&] { IndexingCategory::build(ids, named); }) == ErrorCode::kLcaViolation);
      continue;
    }
    const auto cat = IndexingCategory::build(ids, named);
    ++built;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        CHECK(cat.reaches(a, b) == (reach[a][b] != 0));
        const std::size_t l = cat.lca(a, b);
        CHECK(cat.reaches(l, a));
        CHECK(cat.reaches(l, b));
      }
    // Primes are exactly the covers with no intermediate object.
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        bool prime = a != b && reach[a][b];
        for (std::size_t k = 0; k < n && prime; ++k)
          if (k != a && k != b && reach[a][k] && reach[k][b]) prime = false;
        CHECK(cat.is_prime(a, b) == prime);
      }
    const auto& topo = cat.topological_order();
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) CHECK_FALSE(cat.reaches(topo[q], topo[p]));
  }
  CHECK(built > 100);
}

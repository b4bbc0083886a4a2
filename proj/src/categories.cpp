#include "arrowc/categories.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

/// Subsets of {1..n} listed by increasing size, then lexicographically.
std::vector<std::vector<int>> nonempty_subsets(std::size_t n) {
  std::vector<std::vector<int>> result;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> s;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (std::size_t{1} << b)) s.push_back(static_cast<int>(b) + 1);
    result.push_back(std::move(s));
  }
  std::stable_sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return result;
}

std::string subset_id(const std::vector<int>& s) {
  std::string id;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k) id += ',';
    id += std::to_string(s[k]);
  }
  return id;
}

}  // namespace

IndexingCategory IndexingCategory::build(std::vector<ObjectId> objects,
                                         const std::vector<std::pair<ObjectId, ObjectId>>& covers) {
  if (objects.empty()) throw Error(ErrorCode::kNoInitialObject, "category has no objects");
  IndexingCategory c;
  c.objects_ = std::move(objects);
  const std::size_t n = c.objects_.size();
  {
    std::set<std::string> seen;
    for (const auto& o : c.objects_)
      if (!seen.insert(o).second) throw Error(ErrorCode::kBadParam, "duplicate object id '" + o + "'");
  }
  std::set<Cover> declared;
  for (const auto& [a, b] : covers) {
    const std::size_t i = c.index_of(a);
    const std::size_t j = c.index_of(b);
    if (i == j) throw Error(ErrorCode::kCycle, "self-loop on '" + a + "'");
    declared.insert({i, j});
  }
  c.covers_.assign(declared.begin(), declared.end());

  c.reach_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) c.reach_[i * n + i] = 1;
  for (const auto& [i, j] : c.covers_) c.reach_[i * n + j] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (c.reach_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (c.reach_[k * n + j]) c.reach_[i * n + j] = 1;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (c.reaches(i, j) && c.reaches(j, i))
        throw Error(ErrorCode::kCycle,
                    "objects '" + c.objects_[i] + "' and '" + c.objects_[j] + "' lie on a cycle");

  bool found_initial = false;
  for (std::size_t i = 0; i < n && !found_initial; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < n && all; ++j) all = c.reaches(i, j);
    if (all) {
      c.initial_ = i;
      found_initial = true;
    }
  }
  if (!found_initial) throw Error(ErrorCode::kNoInitialObject, "no object is an ancestor of all others");

  c.lca_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> common;
      for (std::size_t k = 0; k < n; ++k)
        if (c.reaches(k, i) && c.reaches(k, j)) common.push_back(k);
      bool ok = false;
      for (std::size_t l : common) {
        bool least = std::all_of(common.begin(), common.end(),
                                 [&](std::size_t k) { return c.reaches(k, l); });
        if (least) {
          c.lca_[i * n + j] = l;
          ok = true;
          break;
        }
      }
      if (!ok)
        throw Error(ErrorCode::kLcaViolation, "objects '" + c.objects_[i] + "' and '" + c.objects_[j] +
                                                  "' have no least common ancestor");
    }
  }

  c.prime_in_.assign(n, {});
  c.prime_out_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !c.reaches(i, j)) continue;
      bool factors = false;
      for (std::size_t k = 0; k < n && !factors; ++k)
        factors = k != i && k != j && c.reaches(i, k) && c.reaches(k, j);
      if (!factors) {
        c.primes_.push_back({i, j});
        c.prime_out_[i].push_back(j);
        c.prime_in_[j].push_back(i);
      }
    }
  }

  std::vector<std::size_t> indegree(n, 0);
  for (const auto& [i, j] : c.primes_) ++indegree[j];
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.insert(i);
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    c.topo_.push_back(i);
    for (std::size_t j : c.prime_out_[i])
      if (--indegree[j] == 0) ready.insert(j);
  }
  return c;
}

std::size_t IndexingCategory::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < objects_.size(); ++i)
    if (objects_[i] == id) return i;
  throw Error(ErrorCode::kUnknownObject, "unknown object '" + std::string(id) + "'");
}

bool IndexingCategory::contains(std::string_view id) const {
  return std::find(objects_.begin(), objects_.end(), id) != objects_.end();
}

bool IndexingCategory::is_prime(std::size_t i, std::size_t j) const {
  return std::find(primes_.begin(), primes_.end(), Cover{i, j}) != primes_.end();
}

std::vector<std::size_t> IndexingCategory::ancestors(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (reaches(i, k)) out.push_back(i);
  return out;
}

std::vector<std::size_t> IndexingCategory::descendants(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (reaches(k, j)) out.push_back(j);
  return out;
}

std::vector<std::size_t> IndexingCategory::prime_path(std::size_t i, std::size_t j) const {
  if (!reaches(i, j))
    throw Error(ErrorCode::kUnknownObject, "no morphism " + objects_[i] + " -> " + objects_[j]);
  std::vector<std::size_t> path{i};
  std::size_t cur = i;
  while (cur != j) {
    for (std::size_t next : prime_out_[cur]) {
      if (reaches(next, j)) {
        cur = next;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

std::size_t IndexingCategory::morphism_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j && reaches(i, j)) ++count;
  return count;
}

StandardKind parse_standard_kind(std::string_view name) {
  if (name == "two_fan") return StandardKind::kTwoFan;
  if (name == "diamond") return StandardKind::kDiamond;
  if (name == "full_lambda") return StandardKind::kFullLambda;
  if (name == "chain") return StandardKind::kChain;
  throw Error(ErrorCode::kUnknownKind, "unknown category kind '" + std::string(name) + "'");
}

IndexingCategory standard_category(StandardKind kind, std::size_t n) {
  switch (kind) {
    case StandardKind::kTwoFan:
      return IndexingCategory::build({"z", "x", "u"}, {{"z", "x"}, {"z", "u"}});
    case StandardKind::kDiamond:
      return IndexingCategory::build({"z", "x", "y", "v"},
                                     {{"z", "x"}, {"z", "y"}, {"x", "v"}, {"y", "v"}});
    case StandardKind::kChain: {
      if (n < 1) throw Error(ErrorCode::kBadParam, "chain needs n >= 1");
      std::vector<ObjectId> objects;
      std::vector<std::pair<ObjectId, ObjectId>> covers;
      for (std::size_t i = 1; i <= n; ++i) objects.push_back(std::to_string(i));
      for (std::size_t i = 2; i <= n; ++i) covers.push_back({std::to_string(i), std::to_string(i - 1)});
      return IndexingCategory::build(std::move(objects), covers);
    }
    case StandardKind::kFullLambda: {
      if (n < 1 || n > 12) throw Error(ErrorCode::kBadParam, "full_lambda needs 1 <= n <= 12");
      const auto subsets = nonempty_subsets(n);
      std::vector<ObjectId> objects;
      std::vector<std::pair<ObjectId, ObjectId>> covers;
      for (const auto& s : subsets) objects.push_back(subset_id(s));
      for (const auto& s : subsets) {
        if (s.size() < 2) continue;
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
          std::vector<int> t;
          for (std::size_t k = 0; k < s.size(); ++k)
            if (k != drop) t.push_back(s[k]);
          covers.push_back({subset_id(s), subset_id(t)});
        }
      }
      return IndexingCategory::build(std::move(objects), covers);
    }
  }
  throw Error(ErrorCode::kUnknownKind, "unknown category kind");
}

SubCategory restrict_category(const IndexingCategory& cat, const std::vector<std::size_t>& members) {
  std::vector<std::size_t> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) throw Error(ErrorCode::kNotClosed, "empty member set");
  std::vector<char> in(cat.size(), 0);
  for (std::size_t m : sorted) {
    if (m >= cat.size()) throw Error(ErrorCode::kUnknownObject, "member index out of range");
    in[m] = 1;
  }
  for (std::size_t a : sorted)
    for (std::size_t b : sorted)
      for (std::size_t c = 0; c < cat.size(); ++c)
        if (!in[c] && cat.reaches(a, c) && cat.reaches(c, b))
          throw Error(ErrorCode::kNotClosed, "object '" + cat.id(c) + "' lies between '" + cat.id(a) +
                                                 "' and '" + cat.id(b) + "' but is not a member");
  std::vector<ObjectId> ids;
  std::vector<std::pair<ObjectId, ObjectId>> covers;
  for (std::size_t m : sorted) ids.push_back(cat.id(m));
  for (const auto& [i, j] : cat.prime_morphisms())
    if (in[i] && in[j]) covers.push_back({cat.id(i), cat.id(j)});
  return SubCategory{IndexingCategory::build(std::move(ids), covers), std::move(sorted)};
}

SubCategory cone_members(const IndexingCategory& cat, std::string_view k, ConeDirection direction) {
  return cone_members(cat, cat.index_of(k), direction);
}

SubCategory cone_members(const IndexingCategory& cat, std::size_t k, ConeDirection direction) {
  if (k >= cat.size()) throw Error(ErrorCode::kUnknownObject, "object index out of range");
  return restrict_category(cat, direction == ConeDirection::kAncestors ? cat.ancestors(k)
                                                                       : cat.descendants(k));
}

CollapsedCategory collapse_object_pair(const IndexingCategory& cat, std::size_t i, std::size_t j) {
  if (!cat.is_prime(i, j))
    throw Error(ErrorCode::kNotPrime, "'" + cat.id(i) + "' -> '" + cat.id(j) + "' is not a prime morphism");
  CollapsedCategory result;
  std::vector<ObjectId> ids;
  result.mapping.assign(cat.size(), 0);
  for (std::size_t k = 0; k < cat.size(); ++k) {
    if (k == i) continue;
    result.mapping[k] = ids.size();
    ids.push_back(cat.id(k));
  }
  result.mapping[i] = result.mapping[j];
  std::vector<std::pair<ObjectId, ObjectId>> covers;
  for (const auto& [a, b] : cat.prime_morphisms()) {
    const std::size_t na = result.mapping[a];
    const std::size_t nb = result.mapping[b];
    if (na != nb) covers.push_back({ids[na], ids[nb]});
  }
  try {
    result.category = IndexingCategory::build(std::move(ids), covers);
  } catch (const Error& e) {
    throw Error(ErrorCode::kResultNotIndexing, std::string("quotient is not an indexing category: ") + e.what());
  }
  return result;
}

}  // namespace arrowc

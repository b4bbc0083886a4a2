#pragma once

// Finite poset categories with the least-common-ancestor property.
//
// Morphisms are stored as the declared cover relation; the reachability
// order and the prime (non-factorizable) morphisms are derived from it.
// Object ids are opaque strings. Object indices follow declaration order.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arrowc {

using ObjectId = std::string;
using Cover = std::pair<std::size_t, std::size_t>;

class IndexingCategory {
 public:
  /// Validates and derives reachability, initial object and prime morphisms.
  /// Throws kCycle, kNoInitialObject, kLcaViolation, kUnknownObject.
  static IndexingCategory build(std::vector<ObjectId> objects,
                                const std::vector<std::pair<ObjectId, ObjectId>>& covers);

  std::size_t size() const { return objects_.size(); }
  const std::vector<ObjectId>& objects() const { return objects_; }
  const ObjectId& id(std::size_t i) const { return objects_.at(i); }

  /// Throws kUnknownObject.
  std::size_t index_of(std::string_view id) const;
  bool contains(std::string_view id) const;

  /// True iff a morphism i -> j exists (identities included).
  bool reaches(std::size_t i, std::size_t j) const { return reach_[i * size() + j] != 0; }

  std::size_t initial() const { return initial_; }

  /// Declared covers, possibly including composites.
  const std::vector<Cover>& covers() const { return covers_; }
  /// Transitive reduction of the declared order.
  const std::vector<Cover>& prime_morphisms() const { return primes_; }
  bool is_prime(std::size_t i, std::size_t j) const;

  /// Ancestors of k including k, i.e. the co-ideal generated by k.
  std::vector<std::size_t> ancestors(std::size_t k) const;
  /// Descendants of k including k, i.e. the ideal generated by k.
  std::vector<std::size_t> descendants(std::size_t k) const;

  std::size_t lca(std::size_t i, std::size_t j) const { return lca_[i * size() + j]; }

  /// Objects ordered so that every morphism goes forward; initial first.
  const std::vector<std::size_t>& topological_order() const { return topo_; }

  /// Prime morphisms i -> j, as sources of each target.
  const std::vector<std::size_t>& prime_sources(std::size_t j) const { return prime_in_[j]; }
  const std::vector<std::size_t>& prime_targets(std::size_t i) const { return prime_out_[i]; }

  /// Path of objects i = p0 -> p1 -> ... -> j along prime morphisms.
  std::vector<std::size_t> prime_path(std::size_t i, std::size_t j) const;

  /// Number of non-identity morphisms.
  std::size_t morphism_count() const;

  /// Same object ids in the same order and the same order relation.
  friend bool operator==(const IndexingCategory& a, const IndexingCategory& b) {
    return a.objects_ == b.objects_ && a.reach_ == b.reach_;
  }

 private:
  std::vector<ObjectId> objects_;
  std::vector<Cover> covers_;
  std::vector<Cover> primes_;
  std::vector<char> reach_;
  std::vector<std::size_t> lca_;
  std::vector<std::size_t> topo_;
  std::vector<std::vector<std::size_t>> prime_in_;
  std::vector<std::vector<std::size_t>> prime_out_;
  std::size_t initial_ = 0;
};

enum class StandardKind { kTwoFan, kDiamond, kFullLambda, kChain };

/// Parses "two_fan", "diamond", "full_lambda", "chain". Throws kUnknownKind.
StandardKind parse_standard_kind(std::string_view name);

/// two_fan: z -> x, z -> u.  diamond: z -> x, z -> y, x -> v, y -> v.
/// chain(n): objects "1".."n", a morphism i -> j for every i >= j (initial "n").
/// full_lambda(n): nonempty subsets of {1..n} ("1", "1,2", ...), S -> T iff T is a subset of S.
IndexingCategory standard_category(StandardKind kind, std::size_t n = 0);

enum class ConeDirection { kAncestors, kDescendants };

struct SubCategory {
  IndexingCategory category;          // restriction, itself an indexing category
  std::vector<std::size_t> members;   // parent indices, in parent order
};

/// Restricts to a subset of objects; the subset must be convex
/// (throws kNotClosed) and form an indexing category.
SubCategory restrict_category(const IndexingCategory& cat, const std::vector<std::size_t>& members);

SubCategory cone_members(const IndexingCategory& cat, std::string_view k, ConeDirection direction);
SubCategory cone_members(const IndexingCategory& cat, std::size_t k, ConeDirection direction);

struct CollapsedCategory {
  IndexingCategory category;
  std::vector<std::size_t> mapping;  // old index -> new index
};

/// Merges the ends of the prime morphism i -> j into one object carrying
/// j's id. Throws kNotPrime or kResultNotIndexing.
CollapsedCategory collapse_object_pair(const IndexingCategory& cat, std::size_t i, std::size_t j);

}  // namespace arrowc

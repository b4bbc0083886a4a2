#pragma once

// Commutative diagrams of finite probability spaces indexed by an
// IndexingCategory, together with the structural operations used by the
// contraction and expansion constructions.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arrowc/categories.hpp"
#include "arrowc/rational.hpp"
#include "arrowc/spaces.hpp"

namespace arrowc {

/// Atom-index maps keyed by (source, target) object index.
using MapTable = std::map<Cover, std::vector<std::size_t>>;
using LabeledMap = std::unordered_map<Atom, Atom>;

/// Immutable Γ-diagram; copies share storage.
class Diagram {
 public:
  Diagram();

  /// One space per object (category order) and one map per prime morphism.
  /// Maps for composite pairs may be supplied and are checked against the
  /// composite. Throws kMapError, kCommutativity.
  static Diagram make(IndexingCategory cat, std::vector<ProbSpace> spaces, MapTable maps);

  /// Label-based variant; keys are object ids.
  static Diagram make_labeled(IndexingCategory cat, const std::map<ObjectId, ProbSpace>& spaces,
                              const std::map<std::pair<ObjectId, ObjectId>, LabeledMap>& maps);

  /// Diagram of random variables on a common base space: object i carries the
  /// pushforward of `base` along `classes[i]` (base atom -> class index into
  /// `labels[i]`); classes with no mass are dropped. Prime maps are derived and
  /// must be well defined (kMapError otherwise).
  static Diagram from_variables(IndexingCategory cat, const ProbSpace& base,
                                const std::vector<std::vector<std::size_t>>& classes,
                                const std::vector<std::vector<Atom>>& labels);

  /// X^G: every object carries x, every morphism is the identity.
  static Diagram constant(IndexingCategory cat, const ProbSpace& x);

  const IndexingCategory& category() const { return data_->category; }
  std::size_t size() const { return data_->category.size(); }
  const ProbSpace& space(std::size_t i) const { return data_->spaces.at(i); }
  const ProbSpace& space(std::string_view id) const { return space(category().index_of(id)); }
  const ProbSpace& initial_space() const { return space(category().initial()); }

  const std::vector<std::size_t>& prime_map(std::size_t i, std::size_t j) const;
  /// Composite map initial -> i.
  const std::vector<std::size_t>& from_initial(std::size_t i) const { return data_->from_initial.at(i); }
  /// Composite map i -> j; throws kMapError when no morphism exists.
  std::vector<std::size_t> composite_map(std::size_t i, std::size_t j) const;
  Reduction reduction(std::size_t i, std::size_t j) const;

  /// Set by constructors that know the automorphism group acts transitively
  /// (coordinate diagrams and operations preserving that property).
  bool homogeneity_certified() const { return data_->certified; }
  Diagram with_homogeneity_certificate(bool certified) const;

  /// Total number of atoms over all objects.
  std::size_t total_atoms() const;

 private:
  struct Data {
    IndexingCategory category;
    std::vector<ProbSpace> spaces;
    MapTable maps;
    std::vector<std::vector<std::size_t>> from_initial;
    bool certified = false;
  };
  std::shared_ptr<const Data> data_;
};

/// Designates a fan X <- Z -> U inside a diagram by object index.
struct FanIndices {
  std::size_t x = 0;
  std::size_t z = 0;
  std::size_t u = 0;

  static FanIndices from_ids(const IndexingCategory& cat, std::string_view x, std::string_view z,
                             std::string_view u);
};

/// Fan of diagrams of a common shape, with natural projections.
struct FanOfDiagrams {
  Diagram top;
  Diagram left;
  Diagram right;
  std::vector<std::vector<std::size_t>> to_left;   // per object, top atom -> left atom
  std::vector<std::vector<std::size_t>> to_right;  // per object, top atom -> right atom

  /// Checks shapes, that every projection is a reduction and naturality.
  /// Throws kShapeMismatch, kMapError, kCommutativity.
  static FanOfDiagrams make(Diagram top, Diagram left, Diagram right,
                            std::vector<std::vector<std::size_t>> to_left,
                            std::vector<std::vector<std::size_t>> to_right);
};

/// Coordinate sets are 1-based subsets of {1..l}; the initial object must
/// carry {1..l} (it defaults to that when absent). Each space is uniform on
/// {0,1}^S, atoms are bit strings in increasing coordinate order ("*" for the
/// empty set), maps are coordinate projections. Throws kNotMonotone, kBadParam.
Diagram coordinate_diagram(const IndexingCategory& cat, const std::map<ObjectId, std::vector<int>>& coord_sets,
                           int l);

/// Entropies in nats, by object index.
std::vector<double> entropy_vector(const Diagram& d);

/// Object-wise tensor product. Throws kShapeMismatch.
Diagram tensor_diagrams(const Diagram& a, const Diagram& b);

/// Restricts the initial space to the fiber over `atom` of the composite map
/// initial -> obj and pushes the conditioned measure to every object.
/// Throws kUnknownAtom.
Diagram condition_diagram(const Diagram& d, std::size_t obj, std::string_view atom);
Diagram condition_diagram(const Diagram& d, std::size_t obj, std::size_t atom);

/// Restriction to a convex member set that is itself an indexing category.
/// Throws kNotClosed.
Diagram sub_diagram(const Diagram& d, const std::vector<std::size_t>& members);
Diagram sub_diagram(const Diagram& d, const SubCategory& members);

struct AnalyzeOptions {
  /// Automorphism search is refused above this many initial atoms unless the
  /// diagram carries a homogeneity certificate.
  std::size_t enumeration_cap = 10000;
  /// Automorphism group order is computed only up to this many initial atoms.
  std::size_t order_cap = 64;
  std::size_t node_budget = 20'000'000;
};

struct Analysis {
  bool minimal = false;
  bool homogeneous = false;
  bool certified = false;               // homogeneity taken from the certificate
  std::optional<BigInt> aut_order;      // absent when not computed
  std::vector<std::pair<std::size_t, std::size_t>> non_minimal_pairs;
};

/// Throws kTooLarge when homogeneity cannot be decided within the cap.
Analysis analyze(const Diagram& d, const AnalyzeOptions& options = {});

/// Injectivity of the joint map lca(i,j) -> (i, j).
bool fan_is_minimal(const Diagram& d, std::size_t i, std::size_t top, std::size_t j);

struct FanClassification {
  bool admissible = false;
  bool reduced = false;
  bool minimal = false;
  bool top_is_initial = false;
  std::vector<ObjectId> witness;  // objects outside desc(x) ∪ anc(u)
};

FanClassification classify_fan(const Diagram& d, const FanIndices& fi);

/// Identifies the ends of the prime isomorphism i -> j; the merged object
/// carries j's id and space. Throws kNotPrime, kNotIso.
Diagram arrow_collapse(const Diagram& d, std::size_t i, std::size_t j);

struct IsoOptions {
  std::size_t enumeration_cap = 10000;
  std::size_t node_budget = 20'000'000;
};

/// Per-object atom bijections d1 -> d2 commuting with all maps, or nullopt.
using DiagramIso = std::vector<std::vector<std::size_t>>;

/// Backtracking search seeded at the initial space with weight-class
/// pruning. Throws kShapeMismatch (different categories), kTooLarge.
std::optional<DiagramIso> diagram_isomorphic(const Diagram& d1, const Diagram& d2, const IsoOptions& options = {});

struct JointSpace {
  ProbSpace space;
  std::vector<Reduction> legs;  // one per requested object
};

/// Pushforward of the initial space along the tuple of composite maps.
/// Atoms are "(a,b)" for two objects, "(a,b,c,...)" in general.
JointSpace joint_space(const Diagram& d, const std::vector<std::size_t>& objects);
JointSpace joint_space(const Diagram& d, std::size_t i, std::size_t j);

/// Same shape, same labeled spaces and the same maps on labels; atom order
/// may differ.
bool same_labeled(const Diagram& a, const Diagram& b);

/// Label of a tuple atom.
std::string tuple_label(const std::vector<const Atom*>& parts);

}  // namespace arrowc

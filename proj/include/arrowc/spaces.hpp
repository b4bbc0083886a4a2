#pragma once

// Finite probability spaces with exact rational weights.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arrowc/rational.hpp"

namespace arrowc {

using Atom = std::string;

/// Immutable; copies share storage. Every atom has positive weight and the
/// weights sum to exactly one.
class ProbSpace {
 public:
  /// Placeholder with no atoms; only meaningful as an assignment target.
  ProbSpace();

  /// Drops zero-weight atoms. Throws kWeightSumNotOne, kNegativeWeight,
  /// kDuplicateAtom, kBadParam (length mismatch or empty).
  static ProbSpace make(std::vector<Atom> atoms, std::vector<Rational> weights);

  /// Parses weights with parse_rational.
  static ProbSpace make(std::vector<Atom> atoms, const std::vector<std::string>& weights);

  std::size_t size() const { return data_->labels.size(); }
  const std::vector<Atom>& atoms() const { return data_->labels; }
  const std::vector<Rational>& weights() const { return data_->weights; }
  const Atom& atom(std::size_t i) const { return data_->labels[i]; }
  const Rational& weight(std::size_t i) const { return data_->weights[i]; }

  std::optional<std::size_t> find(std::string_view atom) const;
  /// Throws kUnknownAtom.
  std::size_t index_of(std::string_view atom) const;

  bool is_uniform() const;
  /// Entropy in nats.
  double entropy() const { return data_->entropy; }

  /// Same atoms with the same weights, in any order.
  bool same_distribution(const ProbSpace& other) const;

 private:
  struct Data {
    std::vector<Atom> labels;
    std::vector<Rational> weights;
    std::unordered_map<std::string, std::size_t> index;
    double entropy = 0.0;
  };
  std::shared_ptr<const Data> data_;
};

enum class SpecialKind { kUniform, kLambda, kDirac };

/// uniform(n): atoms "0".."n-1". lambda(a): atoms "□" (1-a) and "■" (a),
/// zero-weight atoms dropped. dirac: single atom "*". Throws kBadParam.
ProbSpace special_space(SpecialKind kind, const Rational& param = 0);
ProbSpace uniform_space(std::size_t n);
ProbSpace lambda_space(const Rational& alpha);
ProbSpace dirac_space();

double entropy(const ProbSpace& x);

/// Label of a product atom.
std::string pair_label(std::string_view a, std::string_view b);

/// Product atoms "(a,b)" ordered with the first factor major.
ProbSpace tensor_spaces(const ProbSpace& x, const ProbSpace& y);

/// Pushforward of `domain` along an index map onto `target_labels`.
/// Classes receiving no mass are dropped from the result; `class_map` receives
/// old class index -> result atom index (npos for dropped classes).
ProbSpace pushforward(const ProbSpace& domain, const std::vector<std::size_t>& map,
                      const std::vector<Atom>& target_labels,
                      std::vector<std::size_t>* class_map = nullptr);

inline constexpr std::size_t kNoAtom = static_cast<std::size_t>(-1);

/// Measure-preserving surjection, stored as an index map on the domain support.
class Reduction {
 public:
  /// Target weights computed by pushforward. Throws kNotSurjective when a
  /// target label receives no mass, kMapError when the map is not total or
  /// points outside target_labels.
  static Reduction make(const ProbSpace& domain, const std::unordered_map<Atom, Atom>& map,
                        const std::vector<Atom>& target_labels);
  static Reduction make(const ProbSpace& domain, std::vector<std::size_t> map,
                        const std::vector<Atom>& target_labels);
  /// Checks that `map` pushes domain onto target exactly. Throws kMapError.
  static Reduction between(const ProbSpace& domain, const ProbSpace& target, std::vector<std::size_t> map);

  const ProbSpace& domain() const { return domain_; }
  const ProbSpace& target() const { return target_; }
  const std::vector<std::size_t>& map() const { return map_; }
  std::size_t operator()(std::size_t atom) const { return map_[atom]; }

  /// Bijective on supports.
  bool is_iso() const { return domain_.size() == target_.size(); }

 private:
  ProbSpace domain_;
  ProbSpace target_;
  std::vector<std::size_t> map_;
};

Reduction make_reduction(const ProbSpace& x, const std::unordered_map<Atom, Atom>& map,
                         const std::vector<Atom>& target_labels);

/// Domain restricted to the fiber over u, renormalized. Throws kUnknownAtom.
ProbSpace condition_fiber(const Reduction& r, std::string_view u);
ProbSpace condition_fiber(const Reduction& r, std::size_t u);

/// Exact sum of |p - p'| over the union of the supports (the l1 norm; the
/// halved value is the usual variation distance alpha).
Rational tv_distance(const ProbSpace& p, const ProbSpace& q);

}  // namespace arrowc

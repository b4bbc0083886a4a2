#include "arrowc/diagrams.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

std::string path_text(const IndexingCategory& cat, const std::vector<std::size_t>& path) {
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) s += " -> ";
    s += cat.id(path[k]);
  }
  return s;
}

std::vector<std::size_t> compose(const std::vector<std::size_t>& first, const std::vector<std::size_t>& second) {
  std::vector<std::size_t> out(first.size());
  for (std::size_t a = 0; a < first.size(); ++a) out[a] = second[first[a]];
  return out;
}

struct PairHash {
  std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const noexcept {
    return std::hash<std::size_t>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
  }
};

struct VecHash {
  std::size_t operator()(const std::vector<std::size_t>& v) const noexcept {
    std::size_t h = v.size();
    for (std::size_t x : v) h ^= x + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

Diagram::Diagram() {
  static const auto empty = std::make_shared<const Data>();
  data_ = empty;
}

Diagram Diagram::make(IndexingCategory cat, std::vector<ProbSpace> spaces, MapTable maps) {
  const std::size_t n = cat.size();
  if (spaces.size() != n) throw Error(ErrorCode::kMapError, "expected one space per object");
  for (const auto& [ij, m] : maps) {
    const auto [i, j] = ij;
    if (i >= n || j >= n || i == j || !cat.reaches(i, j))
      throw Error(ErrorCode::kMapError, "map supplied for a pair that is not a morphism");
    if (m.size() != spaces[i].size())
      throw Error(ErrorCode::kMapError, "map " + cat.id(i) + " -> " + cat.id(j) + " is not total");
    std::vector<Rational> mass(spaces[j].size(), Rational(0));
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m[a] >= spaces[j].size())
        throw Error(ErrorCode::kMapError, "map " + cat.id(i) + " -> " + cat.id(j) + " leaves the target");
      mass[m[a]] += spaces[i].weight(a);
    }
    for (std::size_t b = 0; b < mass.size(); ++b)
      if (mass[b] != spaces[j].weight(b))
        throw Error(ErrorCode::kMapError, "map " + cat.id(i) + " -> " + cat.id(j) +
                                              " is not measure preserving at atom '" + spaces[j].atom(b) + "'");
  }
  for (const auto& [i, j] : cat.prime_morphisms())
    if (!maps.count({i, j}))
      throw Error(ErrorCode::kMapError, "missing map for prime morphism " + cat.id(i) + " -> " + cat.id(j));

  auto data = std::make_shared<Data>();
  data->from_initial.assign(n, {});
  const std::size_t root = cat.initial();
  data->from_initial[root].resize(spaces[root].size());
  std::iota(data->from_initial[root].begin(), data->from_initial[root].end(), std::size_t{0});
  std::vector<std::size_t> first_source(n, kNoAtom);
  for (std::size_t j : cat.topological_order()) {
    if (j == root) continue;
    for (std::size_t k : cat.prime_sources(j)) {
      auto candidate = compose(data->from_initial[k], maps.at({k, j}));
      if (first_source[j] == kNoAtom) {
        data->from_initial[j] = std::move(candidate);
        first_source[j] = k;
      } else if (candidate != data->from_initial[j]) {
        auto p1 = cat.prime_path(root, first_source[j]);
        auto p2 = cat.prime_path(root, k);
        p1.push_back(j);
        p2.push_back(j);
        throw Error(ErrorCode::kCommutativity, "objects " + cat.id(root) + " and " + cat.id(j) +
                                                   ": paths [" + path_text(cat, p1) + "] and [" +
                                                   path_text(cat, p2) + "] disagree");
      }
    }
  }
  // Supplied composites must agree with the prime factorization.
  for (const auto& [ij, m] : maps) {
    const auto [i, j] = ij;
    if (cat.is_prime(i, j)) continue;
    if (compose(data->from_initial[i], m) != data->from_initial[j])
      throw Error(ErrorCode::kCommutativity, "supplied composite " + cat.id(i) + " -> " + cat.id(j) +
                                                 " disagrees with [" + path_text(cat, cat.prime_path(i, j)) + "]");
  }
  data->category = std::move(cat);
  data->spaces = std::move(spaces);
  data->maps = std::move(maps);
  Diagram d;
  d.data_ = std::move(data);
  return d;
}

Diagram Diagram::make_labeled(IndexingCategory cat, const std::map<ObjectId, ProbSpace>& spaces,
                              const std::map<std::pair<ObjectId, ObjectId>, LabeledMap>& maps) {
  std::vector<ProbSpace> ordered;
  for (const auto& id : cat.objects()) {
    auto it = spaces.find(id);
    if (it == spaces.end()) throw Error(ErrorCode::kMapError, "no space given for object '" + id + "'");
    ordered.push_back(it->second);
  }
  for (const auto& [id, _] : spaces)
    if (!cat.contains(id)) throw Error(ErrorCode::kUnknownObject, "space given for unknown object '" + id + "'");
  MapTable table;
  for (const auto& [ij, m] : maps) {
    const std::size_t i = cat.index_of(ij.first);
    const std::size_t j = cat.index_of(ij.second);
    const ProbSpace& src = ordered[i];
    const ProbSpace& dst = ordered[j];
    std::vector<std::size_t> idx(src.size());
    for (std::size_t a = 0; a < src.size(); ++a) {
      auto it = m.find(src.atom(a));
      if (it == m.end())
        throw Error(ErrorCode::kMapError, "map " + ij.first + " -> " + ij.second + " undefined on '" + src.atom(a) + "'");
      auto b = dst.find(it->second);
      if (!b)
        throw Error(ErrorCode::kMapError, "map " + ij.first + " -> " + ij.second + " sends '" + src.atom(a) +
                                              "' to unknown atom '" + it->second + "'");
      idx[a] = *b;
    }
    table.emplace(Cover{i, j}, std::move(idx));
  }
  return make(std::move(cat), std::move(ordered), std::move(table));
}

Diagram Diagram::from_variables(IndexingCategory cat, const ProbSpace& base,
                                const std::vector<std::vector<std::size_t>>& classes,
                                const std::vector<std::vector<Atom>>& labels) {
  const std::size_t n = cat.size();
  if (classes.size() != n || labels.size() != n)
    throw Error(ErrorCode::kMapError, "expected one variable per object");
  std::vector<ProbSpace> spaces;
  std::vector<std::vector<std::size_t>> compact(n);
  spaces.reserve(n);
  for (std::size_t i = 0; i < n; ++i) spaces.push_back(pushforward(base, classes[i], labels[i], &compact[i]));
  MapTable maps;
  for (const auto& [i, j] : cat.prime_morphisms()) {
    std::vector<std::size_t> m(spaces[i].size(), kNoAtom);
    for (std::size_t a = 0; a < base.size(); ++a) {
      const std::size_t src = compact[i][classes[i][a]];
      const std::size_t dst = compact[j][classes[j][a]];
      if (m[src] == kNoAtom) {
        m[src] = dst;
      } else if (m[src] != dst) {
        throw Error(ErrorCode::kMapError, "variable at '" + cat.id(j) + "' is not a function of the variable at '" +
                                              cat.id(i) + "'");
      }
    }
    maps.emplace(Cover{i, j}, std::move(m));
  }
  return make(std::move(cat), std::move(spaces), std::move(maps));
}

Diagram Diagram::constant(IndexingCategory cat, const ProbSpace& x) {
  std::vector<ProbSpace> spaces(cat.size(), x);
  MapTable maps;
  std::vector<std::size_t> id(x.size());
  std::iota(id.begin(), id.end(), std::size_t{0});
  for (const auto& c : cat.prime_morphisms()) maps.emplace(c, id);
  return make(std::move(cat), std::move(spaces), std::move(maps));
}

const std::vector<std::size_t>& Diagram::prime_map(std::size_t i, std::size_t j) const {
  auto it = data_->maps.find({i, j});
  if (it == data_->maps.end()) throw Error(ErrorCode::kMapError, "no map stored for the pair");
  return it->second;
}

std::vector<std::size_t> Diagram::composite_map(std::size_t i, std::size_t j) const {
  const auto& cat = category();
  if (!cat.reaches(i, j)) throw Error(ErrorCode::kMapError, "no morphism " + cat.id(i) + " -> " + cat.id(j));
  std::vector<std::size_t> m(space(i).size());
  std::iota(m.begin(), m.end(), std::size_t{0});
  const auto path = cat.prime_path(i, j);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) m = compose(m, prime_map(path[k], path[k + 1]));
  return m;
}

Reduction Diagram::reduction(std::size_t i, std::size_t j) const {
  return Reduction::between(space(i), space(j), composite_map(i, j));
}

Diagram Diagram::with_homogeneity_certificate(bool certified) const {
  auto data = std::make_shared<Data>(*data_);
  data->certified = certified;
  Diagram d;
  d.data_ = std::move(data);
  return d;
}

std::size_t Diagram::total_atoms() const {
  std::size_t total = 0;
  for (const auto& s : data_->spaces) total += s.size();
  return total;
}

FanIndices FanIndices::from_ids(const IndexingCategory& cat, std::string_view x, std::string_view z,
                                std::string_view u) {
  return FanIndices{cat.index_of(x), cat.index_of(z), cat.index_of(u)};
}

FanOfDiagrams FanOfDiagrams::make(Diagram top, Diagram left, Diagram right,
                                  std::vector<std::vector<std::size_t>> to_left,
                                  std::vector<std::vector<std::size_t>> to_right) {
  if (!(top.category() == left.category()) || !(top.category() == right.category()))
    throw Error(ErrorCode::kShapeMismatch, "fan legs have different shapes");
  const auto& cat = top.category();
  if (to_left.size() != cat.size() || to_right.size() != cat.size())
    throw Error(ErrorCode::kMapError, "expected one projection per object");
  for (std::size_t i = 0; i < cat.size(); ++i) {
    Reduction::between(top.space(i), left.space(i), to_left[i]);
    Reduction::between(top.space(i), right.space(i), to_right[i]);
  }
  auto natural = [&](const Diagram& side, const std::vector<std::vector<std::size_t>>& proj, const char* name) {
    for (const auto& [i, j] : cat.prime_morphisms()) {
      const auto& tm = top.prime_map(i, j);
      const auto& sm = side.prime_map(i, j);
      for (std::size_t a = 0; a < tm.size(); ++a)
        if (proj[j][tm[a]] != sm[proj[i][a]])
          throw Error(ErrorCode::kCommutativity, std::string(name) + " projection is not natural at " + cat.id(i) +
                                                     " -> " + cat.id(j));
    }
  };
  natural(left, to_left, "left");
  natural(right, to_right, "right");
  return FanOfDiagrams{std::move(top), std::move(left), std::move(right), std::move(to_left), std::move(to_right)};
}

Diagram coordinate_diagram(const IndexingCategory& cat, const std::map<ObjectId, std::vector<int>>& coord_sets,
                           int l) {
  if (l < 0 || l > 24) throw Error(ErrorCode::kBadParam, "coordinate count must lie in [0, 24]");
  const std::size_t n = cat.size();
  std::vector<std::vector<int>> sets(n);
  for (const auto& [id, s] : coord_sets) {
    const std::size_t i = cat.index_of(id);
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    sets[i] = std::move(sorted);
  }
  std::vector<int> full(static_cast<std::size_t>(l));
  std::iota(full.begin(), full.end(), 1);
  if (!coord_sets.count(cat.id(cat.initial()))) sets[cat.initial()] = full;
  if (sets[cat.initial()] != full)
    throw Error(ErrorCode::kBadParam, "initial object must carry coordinates {1.." + std::to_string(l) + "}");
  for (std::size_t i = 0; i < n; ++i)
    if (!coord_sets.count(cat.id(i)) && i != cat.initial())
      throw Error(ErrorCode::kBadParam, "no coordinate set for object '" + cat.id(i) + "'");
  for (const auto& [i, j] : cat.prime_morphisms())
    if (!std::includes(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end()))
      throw Error(ErrorCode::kNotMonotone, "coordinates of '" + cat.id(j) + "' are not contained in those of '" +
                                               cat.id(i) + "'");

  const std::size_t atoms = std::size_t{1} << l;
  auto bits_label = [](std::size_t value, std::size_t width) {
    if (width == 0) return std::string("*");
    std::string s(width, '0');
    for (std::size_t k = 0; k < width; ++k)
      if (value & (std::size_t{1} << k)) s[k] = '1';
    return s;
  };
  std::vector<Atom> base_labels(atoms);
  for (std::size_t a = 0; a < atoms; ++a) base_labels[a] = bits_label(a, static_cast<std::size_t>(l));
  const ProbSpace base = ProbSpace::make(base_labels, std::vector<Rational>(atoms, Rational(1, atoms)));

  std::vector<std::vector<std::size_t>> classes(n, std::vector<std::size_t>(atoms));
  std::vector<std::vector<Atom>> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = sets[i];
    const std::size_t width = s.size();
    labels[i].resize(std::size_t{1} << width);
    for (std::size_t c = 0; c < labels[i].size(); ++c) labels[i][c] = bits_label(c, width);
    for (std::size_t a = 0; a < atoms; ++a) {
      std::size_t c = 0;
      for (std::size_t k = 0; k < width; ++k)
        if (a & (std::size_t{1} << (s[k] - 1))) c |= std::size_t{1} << k;
      classes[i][a] = c;
    }
  }
  return Diagram::from_variables(cat, base, classes, labels).with_homogeneity_certificate(true);
}

std::vector<double> entropy_vector(const Diagram& d) {
  std::vector<double> h(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) h[i] = d.space(i).entropy();
  return h;
}

Diagram tensor_diagrams(const Diagram& a, const Diagram& b) {
  if (!(a.category() == b.category())) throw Error(ErrorCode::kShapeMismatch, "tensor of diagrams of different shapes");
  const ProbSpace base = tensor_spaces(a.initial_space(), b.initial_space());
  const std::size_t n = a.size();
  const std::size_t nb0 = b.initial_space().size();
  std::vector<std::vector<std::size_t>> classes(n, std::vector<std::size_t>(base.size()));
  std::vector<std::vector<Atom>> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sa = a.space(i);
    const auto& sb = b.space(i);
    labels[i].reserve(sa.size() * sb.size());
    for (std::size_t x = 0; x < sa.size(); ++x)
      for (std::size_t y = 0; y < sb.size(); ++y) labels[i].push_back(pair_label(sa.atom(x), sb.atom(y)));
    const auto& fa = a.from_initial(i);
    const auto& fb = b.from_initial(i);
    for (std::size_t p = 0; p < base.size(); ++p) classes[i][p] = fa[p / nb0] * sb.size() + fb[p % nb0];
  }
  return Diagram::from_variables(a.category(), base, classes, labels)
      .with_homogeneity_certificate(a.homogeneity_certified() && b.homogeneity_certified());
}

Diagram condition_diagram(const Diagram& d, std::size_t obj, std::string_view atom) {
  if (obj >= d.size()) throw Error(ErrorCode::kUnknownObject, "object index out of range");
  return condition_diagram(d, obj, d.space(obj).index_of(atom));
}

Diagram condition_diagram(const Diagram& d, std::size_t obj, std::size_t atom) {
  if (obj >= d.size()) throw Error(ErrorCode::kUnknownObject, "object index out of range");
  if (atom >= d.space(obj).size()) throw Error(ErrorCode::kUnknownAtom, "atom index out of range");
  const ProbSpace& z0 = d.initial_space();
  const auto& to_obj = d.from_initial(obj);
  const Rational& mass = d.space(obj).weight(atom);
  std::vector<std::size_t> fiber;
  for (std::size_t a = 0; a < z0.size(); ++a)
    if (to_obj[a] == atom) fiber.push_back(a);
  std::vector<Atom> base_atoms;
  std::vector<Rational> base_weights;
  base_atoms.reserve(fiber.size());
  base_weights.reserve(fiber.size());
  for (std::size_t a : fiber) {
    base_atoms.push_back(z0.atom(a));
    base_weights.push_back(z0.weight(a) / mass);
  }
  const ProbSpace base = ProbSpace::make(std::move(base_atoms), std::move(base_weights));
  std::vector<std::vector<std::size_t>> classes(d.size(), std::vector<std::size_t>(fiber.size()));
  std::vector<std::vector<Atom>> labels(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    labels[i] = d.space(i).atoms();
    const auto& f = d.from_initial(i);
    for (std::size_t k = 0; k < fiber.size(); ++k) classes[i][k] = f[fiber[k]];
  }
  return Diagram::from_variables(d.category(), base, classes, labels);
}

Diagram sub_diagram(const Diagram& d, const std::vector<std::size_t>& members) {
  return sub_diagram(d, restrict_category(d.category(), members));
}

Diagram sub_diagram(const Diagram& d, const SubCategory& sub) {
  std::vector<ProbSpace> spaces;
  for (std::size_t m : sub.members) spaces.push_back(d.space(m));
  MapTable maps;
  for (const auto& [i, j] : sub.category.prime_morphisms())
    maps.emplace(Cover{i, j}, d.composite_map(sub.members[i], sub.members[j]));
  return Diagram::make(sub.category, std::move(spaces), std::move(maps))
      .with_homogeneity_certificate(d.homogeneity_certified());
}

bool fan_is_minimal(const Diagram& d, std::size_t i, std::size_t top, std::size_t j) {
  const auto to_i = d.composite_map(top, i);
  const auto to_j = d.composite_map(top, j);
  std::unordered_set<std::pair<std::size_t, std::size_t>, PairHash> seen;
  seen.reserve(to_i.size());
  for (std::size_t a = 0; a < to_i.size(); ++a)
    if (!seen.insert({to_i[a], to_j[a]}).second) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Isomorphism search.

namespace {

class IsoSearch {
 public:
  IsoSearch(const Diagram& d1, const Diagram& d2, std::size_t node_budget)
      : d1_(d1), d2_(d2), budget_(node_budget) {}

  /// False when the cheap invariants already differ.
  bool prepare() {
    const std::size_t n = d1_.size();
    atoms_ = d1_.initial_space().size();
    if (d2_.initial_space().size() != atoms_) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (d1_.space(i).size() != d2_.space(i).size()) return false;

    std::map<Rational, long> weight_id;
    auto wid = [&](const Rational& q) {
      auto [it, inserted] = weight_id.emplace(q, static_cast<long>(weight_id.size()));
      return it->second;
    };
    auto colors_of = [&](const Diagram& d) {
      std::vector<std::vector<long>> colors(atoms_);
      std::vector<std::vector<long>> fiber(n);
      for (std::size_t i = 0; i < n; ++i) {
        fiber[i].assign(d.space(i).size(), 0);
        for (std::size_t a = 0; a < atoms_; ++a) ++fiber[i][d.from_initial(i)[a]];
      }
      for (std::size_t a = 0; a < atoms_; ++a) {
        auto& c = colors[a];
        c.reserve(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t x = d.from_initial(i)[a];
          c.push_back(wid(d.space(i).weight(x)));
          c.push_back(fiber[i][x]);
        }
      }
      return colors;
    };
    const auto c1 = colors_of(d1_);
    const auto c2 = colors_of(d2_);
    std::map<std::vector<long>, std::size_t> color_id;
    color1_.resize(atoms_);
    for (std::size_t a = 0; a < atoms_; ++a) {
      auto [it, _] = color_id.emplace(c1[a], color_id.size());
      color1_[a] = it->second;
    }
    pools_.assign(color_id.size(), {});
    for (std::size_t b = 0; b < atoms_; ++b) {
      auto it = color_id.find(c2[b]);
      if (it == color_id.end()) return false;
      pools_[it->second].push_back(b);
    }
    std::vector<std::size_t> count(color_id.size(), 0);
    for (std::size_t a = 0; a < atoms_; ++a) ++count[color1_[a]];
    for (std::size_t c = 0; c < count.size(); ++c)
      if (count[c] != pools_[c].size()) return false;

    // Visit atoms so that neighbours in small spaces come together.
    order_.resize(atoms_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<std::size_t> by_size(n);
    std::iota(by_size.begin(), by_size.end(), std::size_t{0});
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&](std::size_t x, std::size_t y) { return d1_.space(x).size() < d1_.space(y).size(); });
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) {
      for (std::size_t i : by_size) {
        const std::size_t fx = d1_.from_initial(i)[x];
        const std::size_t fy = d1_.from_initial(i)[y];
        if (fx != fy) return fx < fy;
      }
      return false;
    });

    forward_.assign(n, {});
    backward_.assign(n, {});
    refcount_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      forward_[i].assign(d1_.space(i).size(), kNoAtom);
      backward_[i].assign(d2_.space(i).size(), kNoAtom);
      refcount_[i].assign(d1_.space(i).size(), 0);
    }
    phi_.assign(atoms_, kNoAtom);
    used_.assign(atoms_, 0);
    return true;
  }

  /// Fixes a -> b before the search; returns false if inconsistent.
  bool force(std::size_t a, std::size_t b) {
    if (color1_[a] != color_of_target(b) || used_[b] || phi_[a] != kNoAtom || !compatible(a, b)) return false;
    assign(a, b);
    return true;
  }

  std::optional<std::vector<std::size_t>> run() {
    if (search(0)) return phi_;
    return std::nullopt;
  }

  bool exhausted() const { return exhausted_; }

  DiagramIso full_iso() const {
    DiagramIso iso(d1_.size());
    for (std::size_t i = 0; i < d1_.size(); ++i) iso[i] = forward_[i];
    return iso;
  }

 private:
  std::size_t color_of_target(std::size_t b) const {
    for (std::size_t c = 0; c < pools_.size(); ++c)
      if (std::find(pools_[c].begin(), pools_[c].end(), b) != pools_[c].end()) return c;
    return kNoAtom;
  }

  bool compatible(std::size_t a, std::size_t b) const {
    for (std::size_t i = 0; i < d1_.size(); ++i) {
      const std::size_t x = d1_.from_initial(i)[a];
      const std::size_t y = d2_.from_initial(i)[b];
      const std::size_t fx = forward_[i][x];
      if (fx == kNoAtom) {
        if (backward_[i][y] != kNoAtom) return false;
      } else if (fx != y) {
        return false;
      }
    }
    return true;
  }

  void assign(std::size_t a, std::size_t b) {
    phi_[a] = b;
    used_[b] = 1;
    for (std::size_t i = 0; i < d1_.size(); ++i) {
      const std::size_t x = d1_.from_initial(i)[a];
      const std::size_t y = d2_.from_initial(i)[b];
      if (refcount_[i][x]++ == 0) {
        forward_[i][x] = y;
        backward_[i][y] = x;
      }
    }
  }

  void unassign(std::size_t a) {
    const std::size_t b = phi_[a];
    phi_[a] = kNoAtom;
    used_[b] = 0;
    for (std::size_t i = 0; i < d1_.size(); ++i) {
      const std::size_t x = d1_.from_initial(i)[a];
      if (--refcount_[i][x] == 0) {
        backward_[i][forward_[i][x]] = kNoAtom;
        forward_[i][x] = kNoAtom;
      }
    }
  }

  bool search(std::size_t pos) {
    while (pos < atoms_ && phi_[order_[pos]] != kNoAtom) ++pos;
    if (pos == atoms_) return true;
    const std::size_t a = order_[pos];
    for (std::size_t b : pools_[color1_[a]]) {
      if (used_[b] || !compatible(a, b)) continue;
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return false;
      }
      assign(a, b);
      if (search(pos + 1)) return true;
      unassign(a);
      if (exhausted_) return false;
    }
    return false;
  }

  const Diagram& d1_;
  const Diagram& d2_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
  std::size_t atoms_ = 0;
  std::vector<std::size_t> color1_;
  std::vector<std::vector<std::size_t>> pools_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> forward_;
  std::vector<std::vector<std::size_t>> backward_;
  std::vector<std::vector<std::size_t>> refcount_;
  std::vector<std::size_t> phi_;
  std::vector<char> used_;
};

std::optional<DiagramIso> single_object_iso(const Diagram& d1, const Diagram& d2) {
  const ProbSpace& a = d1.initial_space();
  const ProbSpace& b = d2.initial_space();
  if (a.size() != b.size()) return std::nullopt;
  std::vector<std::size_t> ia(a.size());
  std::vector<std::size_t> ib(b.size());
  std::iota(ia.begin(), ia.end(), std::size_t{0});
  std::iota(ib.begin(), ib.end(), std::size_t{0});
  std::sort(ia.begin(), ia.end(), [&](std::size_t x, std::size_t y) { return a.weight(x) < a.weight(y); });
  std::sort(ib.begin(), ib.end(), [&](std::size_t x, std::size_t y) { return b.weight(x) < b.weight(y); });
  std::vector<std::size_t> phi(a.size());
  for (std::size_t k = 0; k < ia.size(); ++k) {
    if (a.weight(ia[k]) != b.weight(ib[k])) return std::nullopt;
    phi[ia[k]] = ib[k];
  }
  return DiagramIso{std::move(phi)};
}

/// Searches for an automorphism extending the forced pairs.
/// Returns nullopt if none exists; throws kTooLarge when the budget runs out.
std::optional<std::vector<std::size_t>> automorphism_with(const Diagram& d,
                                                          const std::vector<std::pair<std::size_t, std::size_t>>& forced,
                                                          std::size_t budget) {
  IsoSearch s(d, d, budget);
  if (!s.prepare()) return std::nullopt;
  for (const auto& [a, b] : forced)
    if (!s.force(a, b)) return std::nullopt;
  auto r = s.run();
  if (!r && s.exhausted()) throw Error(ErrorCode::kTooLarge, "automorphism search exceeded its node budget");
  return r;
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

std::optional<DiagramIso> diagram_isomorphic(const Diagram& d1, const Diagram& d2, const IsoOptions& options) {
  if (!(d1.category() == d2.category())) throw Error(ErrorCode::kShapeMismatch, "diagrams have different shapes");
  if (d1.size() == 1) return single_object_iso(d1, d2);
  if (d1.initial_space().size() > options.enumeration_cap || d2.initial_space().size() > options.enumeration_cap)
    throw Error(ErrorCode::kTooLarge, "initial space exceeds the enumeration cap");
  IsoSearch s(d1, d2, options.node_budget);
  if (!s.prepare()) return std::nullopt;
  if (!s.run()) {
    if (s.exhausted()) throw Error(ErrorCode::kTooLarge, "isomorphism search exceeded its node budget");
    return std::nullopt;
  }
  return s.full_iso();
}

Analysis analyze(const Diagram& d, const AnalyzeOptions& options) {
  Analysis result;
  const auto& cat = d.category();
  result.minimal = true;
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = i + 1; j < cat.size(); ++j) {
      const std::size_t top = cat.lca(i, j);
      if (top == i || top == j) continue;
      if (!fan_is_minimal(d, i, top, j)) {
        result.minimal = false;
        result.non_minimal_pairs.push_back({i, j});
      }
    }

  const std::size_t n = d.initial_space().size();
  if (d.homogeneity_certified()) {
    result.homogeneous = true;
    result.certified = true;
  } else {
    if (n > options.enumeration_cap)
      throw Error(ErrorCode::kTooLarge, "homogeneity check needs " + std::to_string(n) +
                                            " initial atoms, above the cap and uncertified");
    UnionFind orbits(n);
    for (std::size_t b = 1; b < n; ++b) {
      if (orbits.find(b) == orbits.find(0)) continue;
      auto phi = automorphism_with(d, {{0, b}}, options.node_budget);
      if (!phi) continue;
      for (std::size_t a = 0; a < n; ++a) orbits.unite(a, (*phi)[a]);
    }
    result.homogeneous = true;
    for (std::size_t a = 1; a < n && result.homogeneous; ++a) result.homogeneous = orbits.find(a) == orbits.find(0);
  }

  if (n <= options.order_cap) {
    // Orbit-stabilizer along the base 0, 1, ..., n-1.
    BigInt order = 1;
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t orbit = 0;
      for (std::size_t b = 0; b < n; ++b) {
        auto forced = fixed;
        forced.push_back({k, b});
        if (automorphism_with(d, forced, options.node_budget)) ++orbit;
      }
      order *= static_cast<unsigned long>(orbit);
      fixed.push_back({k, k});
    }
    result.aut_order = order;
  }
  return result;
}

FanClassification classify_fan(const Diagram& d, const FanIndices& fi) {
  FanClassification c;
  const auto& cat = d.category();
  if (fi.x >= cat.size() || fi.z >= cat.size() || fi.u >= cat.size())
    throw Error(ErrorCode::kUnknownObject, "fan index out of range");
  c.top_is_initial = fi.z == cat.initial();
  const bool legs = cat.reaches(fi.z, fi.x) && cat.reaches(fi.z, fi.u);
  c.minimal = legs && fan_is_minimal(d, fi.x, fi.z, fi.u);
  for (std::size_t k = 0; k < cat.size(); ++k)
    if (!cat.reaches(fi.x, k) && !cat.reaches(k, fi.u)) c.witness.push_back(cat.id(k));
  c.admissible = c.minimal && c.top_is_initial && c.witness.empty();
  c.reduced = c.admissible && d.space(fi.z).size() == d.space(fi.x).size();
  return c;
}

Diagram arrow_collapse(const Diagram& d, std::size_t i, std::size_t j) {
  const auto& cat = d.category();
  if (!cat.is_prime(i, j))
    throw Error(ErrorCode::kNotPrime, "'" + cat.id(i) + "' -> '" + cat.id(j) + "' is not a prime morphism");
  const auto& iso = d.prime_map(i, j);
  if (d.space(i).size() != d.space(j).size())
    throw Error(ErrorCode::kNotIso, "'" + cat.id(i) + "' -> '" + cat.id(j) + "' is not an isomorphism");
  std::vector<std::size_t> inverse(iso.size());
  for (std::size_t a = 0; a < iso.size(); ++a) inverse[iso[a]] = a;

  auto collapsed = collapse_object_pair(cat, i, j);
  const auto& qcat = collapsed.category;
  std::vector<ProbSpace> spaces(qcat.size());
  for (std::size_t k = 0; k < cat.size(); ++k)
    if (k != i) spaces[collapsed.mapping[k]] = d.space(k);

  MapTable maps;
  for (const auto& [a, b] : cat.prime_morphisms()) {
    if ((a == i && b == j)) continue;
    const Cover image{collapsed.mapping[a], collapsed.mapping[b]};
    if (image.first == image.second || !qcat.is_prime(image.first, image.second) || maps.count(image)) continue;
    std::vector<std::size_t> m = d.prime_map(a, b);
    if (a == i) m = compose(inverse, m);  // merged space is j's
    if (b == i) m = compose(m, iso);
    maps.emplace(image, std::move(m));
  }
  return Diagram::make(qcat, std::move(spaces), std::move(maps))
      .with_homogeneity_certificate(d.homogeneity_certified());
}

bool same_labeled(const Diagram& a, const Diagram& b) {
  if (!(a.category() == b.category())) return false;
  std::vector<std::vector<std::size_t>> to_b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const ProbSpace& sa = a.space(i);
    const ProbSpace& sb = b.space(i);
    if (sa.size() != sb.size()) return false;
    to_b[i].resize(sa.size());
    for (std::size_t k = 0; k < sa.size(); ++k) {
      auto j = sb.find(sa.atom(k));
      if (!j || sb.weight(*j) != sa.weight(k)) return false;
      to_b[i][k] = *j;
    }
  }
  for (const auto& [i, j] : a.category().prime_morphisms()) {
    const auto& ma = a.prime_map(i, j);
    const auto& mb = b.prime_map(i, j);
    for (std::size_t k = 0; k < ma.size(); ++k)
      if (to_b[j][ma[k]] != mb[to_b[i][k]]) return false;
  }
  return true;
}

std::string tuple_label(const std::vector<const Atom*>& parts) {
  std::string s = "(";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) s += ',';
    s += *parts[k];
  }
  s += ')';
  return s;
}

JointSpace joint_space(const Diagram& d, const std::vector<std::size_t>& objects) {
  const ProbSpace& z0 = d.initial_space();
  std::unordered_map<std::vector<std::size_t>, std::size_t, VecHash> class_of;
  std::vector<std::vector<std::size_t>> keys;
  std::vector<std::size_t> classes(z0.size());
  std::vector<std::size_t> key(objects.size());
  for (std::size_t a = 0; a < z0.size(); ++a) {
    for (std::size_t k = 0; k < objects.size(); ++k) key[k] = d.from_initial(objects[k])[a];
    auto [it, inserted] = class_of.emplace(key, keys.size());
    if (inserted) keys.push_back(key);
    classes[a] = it->second;
  }
  std::vector<Atom> labels;
  labels.reserve(keys.size());
  std::vector<const Atom*> parts(objects.size());
  for (const auto& kv : keys) {
    for (std::size_t k = 0; k < objects.size(); ++k) parts[k] = &d.space(objects[k]).atom(kv[k]);
    labels.push_back(tuple_label(parts));
  }
  JointSpace joint;
  joint.space = pushforward(z0, classes, labels);
  for (std::size_t k = 0; k < objects.size(); ++k) {
    std::vector<std::size_t> leg(keys.size());
    for (std::size_t c = 0; c < keys.size(); ++c) leg[c] = keys[c][k];
    joint.legs.push_back(Reduction::between(joint.space, d.space(objects[k]), std::move(leg)));
  }
  return joint;
}

JointSpace joint_space(const Diagram& d, std::size_t i, std::size_t j) { return joint_space(d, std::vector<std::size_t>{i, j}); }

}  // namespace arrowc

#include "arrowc/spaces.hpp"

#include <algorithm>
#include <set>

#include "arrowc/error.hpp"

namespace arrowc {

ProbSpace::ProbSpace() {
  static const auto empty = std::make_shared<const Data>();
  data_ = empty;
}

ProbSpace ProbSpace::make(std::vector<Atom> atoms, std::vector<Rational> weights) {
  if (atoms.size() != weights.size())
    throw Error(ErrorCode::kBadParam, "atoms and weights differ in length");
  auto data = std::make_shared<Data>();
  data->labels.reserve(atoms.size());
  data->weights.reserve(atoms.size());
  data->index.reserve(atoms.size());
  Rational total = 0;
  std::set<std::string> seen_zero;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const int s = sgn(weights[i]);
    if (s < 0) throw Error(ErrorCode::kNegativeWeight, "atom '" + atoms[i] + "' has negative weight");
    if (data->index.count(atoms[i]) || seen_zero.count(atoms[i]))
      throw Error(ErrorCode::kDuplicateAtom, "atom '" + atoms[i] + "' listed twice");
    if (s == 0) {
      seen_zero.insert(atoms[i]);
      continue;
    }
    total += weights[i];
    data->index.emplace(atoms[i], data->labels.size());
    data->labels.push_back(std::move(atoms[i]));
    data->weights.push_back(std::move(weights[i]));
  }
  if (total != 1) throw Error(ErrorCode::kWeightSumNotOne, "weights sum to " + format_rational(total));
  data->entropy = entropy_of(data->weights);
  ProbSpace x;
  x.data_ = std::move(data);
  return x;
}

ProbSpace ProbSpace::make(std::vector<Atom> atoms, const std::vector<std::string>& weights) {
  std::vector<Rational> w;
  w.reserve(weights.size());
  for (const auto& s : weights) w.push_back(parse_rational(s));
  return make(std::move(atoms), std::move(w));
}

std::optional<std::size_t> ProbSpace::find(std::string_view atom) const {
  auto it = data_->index.find(std::string(atom));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t ProbSpace::index_of(std::string_view atom) const {
  auto i = find(atom);
  if (!i) throw Error(ErrorCode::kUnknownAtom, "unknown atom '" + std::string(atom) + "'");
  return *i;
}

bool ProbSpace::is_uniform() const {
  const auto& w = weights();
  return std::all_of(w.begin(), w.end(), [&](const Rational& q) { return q == w.front(); });
}

bool ProbSpace::same_distribution(const ProbSpace& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    auto j = other.find(atom(i));
    if (!j || other.weight(*j) != weight(i)) return false;
  }
  return true;
}

ProbSpace uniform_space(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::kBadParam, "uniform space needs n >= 1");
  std::vector<Atom> atoms;
  std::vector<Rational> w(n, Rational(1, static_cast<unsigned long>(n)));
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(std::to_string(i));
  return ProbSpace::make(std::move(atoms), std::move(w));
}

ProbSpace lambda_space(const Rational& alpha) {
  if (alpha < 0 || alpha > 1) throw Error(ErrorCode::kBadParam, "lambda parameter outside [0,1]");
  return ProbSpace::make({"□", "■"}, {Rational(1 - alpha), alpha});
}

ProbSpace dirac_space() { return ProbSpace::make({"*"}, {Rational(1)}); }

ProbSpace special_space(SpecialKind kind, const Rational& param) {
  switch (kind) {
    case SpecialKind::kUniform:
      if (param.get_den() != 1 || param < 1) throw Error(ErrorCode::kBadParam, "uniform needs integer n >= 1");
      return uniform_space(param.get_num().get_ui());
    case SpecialKind::kLambda:
      return lambda_space(param);
    case SpecialKind::kDirac:
      return dirac_space();
  }
  throw Error(ErrorCode::kBadParam, "unknown special space");
}

double entropy(const ProbSpace& x) { return x.entropy(); }

std::string pair_label(std::string_view a, std::string_view b) {
  std::string s;
  s.reserve(a.size() + b.size() + 3);
  s += '(';
  s += a;
  s += ',';
  s += b;
  s += ')';
  return s;
}

ProbSpace tensor_spaces(const ProbSpace& x, const ProbSpace& y) {
  std::vector<Atom> atoms;
  std::vector<Rational> w;
  atoms.reserve(x.size() * y.size());
  w.reserve(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      atoms.push_back(pair_label(x.atom(i), y.atom(j)));
      w.push_back(x.weight(i) * y.weight(j));
    }
  return ProbSpace::make(std::move(atoms), std::move(w));
}

ProbSpace pushforward(const ProbSpace& domain, const std::vector<std::size_t>& map,
                      const std::vector<Atom>& target_labels, std::vector<std::size_t>* class_map) {
  if (map.size() != domain.size()) throw Error(ErrorCode::kMapError, "map is not total on the domain");
  std::vector<Rational> mass(target_labels.size(), Rational(0));
  for (std::size_t a = 0; a < map.size(); ++a) {
    if (map[a] >= target_labels.size()) throw Error(ErrorCode::kMapError, "map points outside the target");
    mass[map[a]] += domain.weight(a);
  }
  std::vector<Atom> atoms;
  std::vector<Rational> w;
  if (class_map) class_map->assign(target_labels.size(), kNoAtom);
  for (std::size_t c = 0; c < target_labels.size(); ++c) {
    if (sgn(mass[c]) == 0) continue;
    if (class_map) (*class_map)[c] = atoms.size();
    atoms.push_back(target_labels[c]);
    w.push_back(std::move(mass[c]));
  }
  return ProbSpace::make(std::move(atoms), std::move(w));
}

Reduction Reduction::make(const ProbSpace& domain, std::vector<std::size_t> map,
                          const std::vector<Atom>& target_labels) {
  std::vector<std::size_t> class_map;
  ProbSpace target = pushforward(domain, map, target_labels, &class_map);
  for (std::size_t c = 0; c < class_map.size(); ++c)
    if (class_map[c] == kNoAtom)
      throw Error(ErrorCode::kNotSurjective, "target atom '" + target_labels[c] + "' has an empty preimage");
  Reduction r;
  r.domain_ = domain;
  r.target_ = std::move(target);
  for (auto& m : map) m = class_map[m];
  r.map_ = std::move(map);
  return r;
}

Reduction Reduction::make(const ProbSpace& domain, const std::unordered_map<Atom, Atom>& map,
                          const std::vector<Atom>& target_labels) {
  std::unordered_map<std::string, std::size_t> target_index;
  for (std::size_t i = 0; i < target_labels.size(); ++i)
    if (!target_index.emplace(target_labels[i], i).second)
      throw Error(ErrorCode::kDuplicateAtom, "target atom '" + target_labels[i] + "' listed twice");
  std::vector<std::size_t> index_map(domain.size());
  for (std::size_t a = 0; a < domain.size(); ++a) {
    auto it = map.find(domain.atom(a));
    if (it == map.end()) throw Error(ErrorCode::kMapError, "map undefined on atom '" + domain.atom(a) + "'");
    auto jt = target_index.find(it->second);
    if (jt == target_index.end())
      throw Error(ErrorCode::kMapError, "map sends '" + domain.atom(a) + "' to unknown '" + it->second + "'");
    index_map[a] = jt->second;
  }
  return make(domain, std::move(index_map), target_labels);
}

Reduction Reduction::between(const ProbSpace& domain, const ProbSpace& target, std::vector<std::size_t> map) {
  if (map.size() != domain.size()) throw Error(ErrorCode::kMapError, "map is not total on the domain");
  std::vector<Rational> mass(target.size(), Rational(0));
  for (std::size_t a = 0; a < map.size(); ++a) {
    if (map[a] >= target.size()) throw Error(ErrorCode::kMapError, "map points outside the target");
    mass[map[a]] += domain.weight(a);
  }
  for (std::size_t b = 0; b < target.size(); ++b)
    if (mass[b] != target.weight(b))
      throw Error(ErrorCode::kMapError, "map is not measure preserving at '" + target.atom(b) + "'");
  Reduction r;
  r.domain_ = domain;
  r.target_ = target;
  r.map_ = std::move(map);
  return r;
}

Reduction make_reduction(const ProbSpace& x, const std::unordered_map<Atom, Atom>& map,
                         const std::vector<Atom>& target_labels) {
  return Reduction::make(x, map, target_labels);
}

ProbSpace condition_fiber(const Reduction& r, std::string_view u) {
  return condition_fiber(r, r.target().index_of(u));
}

ProbSpace condition_fiber(const Reduction& r, std::size_t u) {
  if (u >= r.target().size()) throw Error(ErrorCode::kUnknownAtom, "atom index out of range");
  const Rational& pu = r.target().weight(u);
  std::vector<Atom> atoms;
  std::vector<Rational> w;
  for (std::size_t a = 0; a < r.domain().size(); ++a) {
    if (r(a) != u) continue;
    atoms.push_back(r.domain().atom(a));
    w.push_back(r.domain().weight(a) / pu);
  }
  return ProbSpace::make(std::move(atoms), std::move(w));
}

Rational tv_distance(const ProbSpace& p, const ProbSpace& q) {
  Rational total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto j = q.find(p.atom(i));
    total += j ? Rational(abs(p.weight(i) - q.weight(*j))) : p.weight(i);
  }
  for (std::size_t j = 0; j < q.size(); ++j)
    if (!p.find(q.atom(j))) total += q.weight(j);
  return total;
}

}  // namespace arrowc

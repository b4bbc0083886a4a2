#include "arrowc/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

const IndexingCategory& point_category() {
  static const IndexingCategory cat = IndexingCategory::build({"0"}, {});
  return cat;
}

long double f_log(long double p) { return p > 0 ? -p * std::log(p) : 0.0L; }

std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return m;
}

// Union-find with rollback: union by size, no path compression.
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }
  void rollback() {
    const std::size_t b = history_.back();
    history_.pop_back();
    size_[parent_[b]] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> history_;
};

template <class T>
class VertexEnumerator {
 public:
  VertexEnumerator(std::size_t m, std::size_t n, std::vector<T> rows, std::vector<T> cols)
      : m_(m), n_(n), rows_(std::move(rows)), cols_(std::move(cols)), uf_(m + n) {}

  template <class Visit>
  void run(Visit&& visit) {
    chosen_.clear();
    dfs(0, visit);
  }

 private:
  template <class Visit>
  void dfs(std::size_t cell, Visit& visit) {
    const std::size_t need = m_ + n_ - 1;
    if (chosen_.size() == need) {
      solve(visit);
      return;
    }
    if (m_ * n_ - cell < need - chosen_.size()) return;
    const std::size_t r = cell / n_;
    const std::size_t c = cell % n_;
    if (uf_.unite(r, m_ + c)) {
      chosen_.push_back(cell);
      dfs(cell + 1, visit);
      chosen_.pop_back();
      uf_.rollback();
    }
    dfs(cell + 1, visit);
  }

  // Leaf peeling on the basis tree.
  template <class Visit>
  void solve(Visit& visit) {
    const std::size_t verts = m_ + n_;
    residual_.assign(verts, T(0));
    for (std::size_t i = 0; i < m_; ++i) residual_[i] = rows_[i];
    for (std::size_t j = 0; j < n_; ++j) residual_[m_ + j] = cols_[j];
    degree_.assign(verts, 0);
    for (std::size_t cell : chosen_) {
      ++degree_[cell / n_];
      ++degree_[m_ + cell % n_];
    }
    done_.assign(chosen_.size(), 0);
    value_.assign(chosen_.size(), T(0));
    std::size_t remaining = chosen_.size();
    bool progress = true;
    while (remaining > 0 && progress) {
      progress = false;
      for (std::size_t e = 0; e < chosen_.size(); ++e) {
        if (done_[e]) continue;
        const std::size_t a = chosen_[e] / n_;
        const std::size_t b = m_ + chosen_[e] % n_;
        std::size_t leaf = verts, other = verts;
        if (degree_[a] == 1) {
          leaf = a;
          other = b;
        } else if (degree_[b] == 1) {
          leaf = b;
          other = a;
        } else {
          continue;
        }
        const T v = residual_[leaf];
        if (v < 0) return;
        value_[e] = v;
        residual_[leaf] = 0;
        residual_[other] -= v;
        --degree_[a];
        --degree_[b];
        done_[e] = 1;
        --remaining;
        progress = true;
      }
    }
    std::uint64_t support = 0;
    for (std::size_t e = 0; e < chosen_.size(); ++e)
      if (value_[e] > 0) support |= std::uint64_t{1} << chosen_[e];
    if (!seen_.insert(support).second) return;
    visit(chosen_, value_);
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<T> rows_;
  std::vector<T> cols_;
  RollbackUnionFind uf_;
  std::vector<std::size_t> chosen_;
  std::vector<T> residual_;
  std::vector<int> degree_;
  std::vector<char> done_;
  std::vector<T> value_;
  std::unordered_set<std::uint64_t> seen_;
};

bool fits_int64(const BigInt& v) { return mpz_sizeinbase(v.get_mpz_t(), 2) <= 62; }

double table_kd(const ProbSpace& x, const ProbSpace& y, const std::vector<long double>& cells) {
  long double h = 0;
  for (long double p : cells) h += f_log(p);
  return static_cast<double>(2 * h) - x.entropy() - y.entropy();
}

std::vector<Rational> push(const std::vector<Rational>& pi, const std::vector<std::size_t>& map, std::size_t size) {
  std::vector<Rational> out(size, Rational(0));
  for (std::size_t a = 0; a < pi.size(); ++a)
    if (sgn(pi[a]) != 0) out[map[a]] += pi[a];
  return out;
}

long double weights_entropy(const std::vector<Rational>& w) {
  long double h = 0;
  for (const auto& q : w)
    if (sgn(q) > 0) h += f_log(static_cast<long double>(to_double(q)));
  return h;
}

// Diagram obtained by conditioning the top of a fan on a fiber of its right
// leg over the initial object.
Diagram slice_top(const FanOfDiagrams& fan, std::size_t right_atom) {
  const auto& cat = fan.top.category();
  const std::size_t root = cat.initial();
  const ProbSpace& z0 = fan.top.initial_space();
  std::vector<std::size_t> fiber;
  Rational mass = 0;
  for (std::size_t a = 0; a < z0.size(); ++a)
    if (fan.to_right[root][a] == right_atom) {
      fiber.push_back(a);
      mass += z0.weight(a);
    }
  std::vector<Atom> atoms;
  std::vector<Rational> weights;
  for (std::size_t a : fiber) {
    atoms.push_back(z0.atom(a));
    weights.push_back(z0.weight(a) / mass);
  }
  const ProbSpace base = ProbSpace::make(std::move(atoms), std::move(weights));
  std::vector<std::vector<std::size_t>> classes(cat.size());
  std::vector<std::vector<Atom>> labels(cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    labels[i] = fan.top.space(i).atoms();
    for (std::size_t a : fiber) classes[i].push_back(fan.top.from_initial(i)[a]);
  }
  return Diagram::from_variables(cat, base, classes, labels);
}

}  // namespace

double kd_of_fan(const FanOfDiagrams& fan) {
  long double total = 0;
  for (std::size_t i = 0; i < fan.top.size(); ++i)
    total += 2.0L * fan.top.space(i).entropy() - fan.left.space(i).entropy() - fan.right.space(i).entropy();
  return static_cast<double>(total);
}

double coupling_kd(const ProbSpace& x, const ProbSpace& y, const CouplingTable& table) {
  std::vector<long double> cells;
  for (const auto& row : table)
    for (const auto& q : row) cells.push_back(static_cast<long double>(to_double(q)));
  return table_kd(x, y, cells);
}

CouplingWitness coupling_witness(const ProbSpace& x, const ProbSpace& y, const CouplingTable& table) {
  if (table.size() != x.size()) throw Error(ErrorCode::kMapError, "coupling table has the wrong number of rows");
  std::vector<Atom> atoms;
  std::vector<Rational> weights;
  std::vector<std::size_t> to_x, to_y;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (table[a].size() != y.size()) throw Error(ErrorCode::kMapError, "coupling table has the wrong number of columns");
    for (std::size_t b = 0; b < y.size(); ++b) {
      if (sgn(table[a][b]) == 0) continue;
      atoms.push_back(pair_label(x.atom(a), y.atom(b)));
      weights.push_back(table[a][b]);
      to_x.push_back(a);
      to_y.push_back(b);
    }
  }
  const ProbSpace z = ProbSpace::make(std::move(atoms), std::move(weights));
  const IndexingCategory& cat = point_category();
  FanOfDiagrams fan = FanOfDiagrams::make(Diagram::make(cat, {z}, {}), Diagram::make(cat, {x}, {}),
                                          Diagram::make(cat, {y}, {}), {std::move(to_x)}, {std::move(to_y)});
  const double kd = kd_of_fan(fan);
  return CouplingWitness{std::move(fan), kd};
}

CouplingTable greedy_coupling(const ProbSpace& x, const ProbSpace& y) {
  std::vector<Rational> r = x.weights();
  std::vector<Rational> c = y.weights();
  CouplingTable t(x.size(), std::vector<Rational>(y.size(), Rational(0)));
  for (;;) {
    const auto i = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
    const auto j = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    if (sgn(r[i]) == 0 || sgn(c[j]) == 0) break;
    const Rational v = std::min(r[i], c[j]);
    t[i][j] += v;
    r[i] -= v;
    c[j] -= v;
  }
  return t;
}

CouplingTable random_coupling(const ProbSpace& x, const ProbSpace& y, Rng& rng) {
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  std::vector<Rational> r = x.weights();
  std::vector<Rational> c = y.weights();
  CouplingTable t(m, std::vector<Rational>(n, Rational(0)));
  std::vector<std::size_t> order = identity_map(m * n);
  for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.bounded(k)]);
  constexpr unsigned kSteps = 8;
  for (std::size_t cell : order) {
    const std::size_t i = cell / n;
    const std::size_t j = cell % n;
    const Rational room = std::min(r[i], c[j]);
    Rational share(static_cast<unsigned long>(rng.bounded(kSteps + 1)), kSteps);
    share.canonicalize();
    const Rational v = room * share;
    t[i][j] += v;
    r[i] -= v;
    c[j] -= v;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational v = std::min(r[i], c[j]);
      t[i][j] += v;
      r[i] -= v;
      c[j] -= v;
    }
  return t;
}

MinCouplingResult min_entropy_coupling(const ProbSpace& x, const ProbSpace& y, const CouplingOptions& options) {
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  MinCouplingResult result;
  if (m * n > std::min<std::size_t>(options.cap, 64)) {
    if (options.require_exact)
      throw Error(ErrorCode::kCapExceeded, std::to_string(m) + "x" + std::to_string(n) +
                                               " coupling is above the exact enumeration cap");
    result.table = greedy_coupling(x, y);
    result.value = coupling_kd(x, y, result.table);
    return result;
  }

  std::vector<Rational> all = x.weights();
  all.insert(all.end(), y.weights().begin(), y.weights().end());
  const BigInt lcd = common_denominator(all);
  std::vector<BigInt> rows, cols;
  for (const auto& w : x.weights()) rows.push_back(BigInt(w * lcd));
  for (const auto& w : y.weights()) cols.push_back(BigInt(w * lcd));

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_cells;
  std::vector<BigInt> best_values;
  const long double scale = static_cast<long double>(lcd.get_d());
  auto consider = [&](const std::vector<std::size_t>& cells, const auto& values) {
    ++result.vertices;
    std::vector<long double> probs;
    probs.reserve(values.size());
    for (const auto& v : values) probs.push_back(static_cast<long double>(BigInt(v).get_d()) / scale);
    const double kd = table_kd(x, y, probs);
    if (kd < best) {
      best = kd;
      best_cells = cells;
      best_values.clear();
      for (const auto& v : values) best_values.emplace_back(v);
    }
  };
  if (fits_int64(lcd)) {
    std::vector<long> ri, ci;
    for (const auto& v : rows) ri.push_back(v.get_si());
    for (const auto& v : cols) ci.push_back(v.get_si());
    VertexEnumerator<long> e(m, n, std::move(ri), std::move(ci));
    e.run([&](const std::vector<std::size_t>& cells, const std::vector<long>& values) {
      std::vector<BigInt> big;
      big.reserve(values.size());
      for (long v : values) big.emplace_back(v);
      consider(cells, big);
    });
  } else {
    VertexEnumerator<BigInt> e(m, n, rows, cols);
    e.run(consider);
  }

  result.table.assign(m, std::vector<Rational>(n, Rational(0)));
  for (std::size_t k = 0; k < best_cells.size(); ++k) {
    Rational q(best_values[k], lcd);
    q.canonicalize();
    result.table[best_cells[k] / n][best_cells[k] % n] = q;
  }
  result.value = coupling_kd(x, y, result.table);
  result.exact = true;
  return result;
}

SetDiagram SetDiagram::of(const Diagram& d) {
  SetDiagram s;
  s.category = d.category();
  for (std::size_t i = 0; i < d.size(); ++i) {
    s.sets.push_back(d.space(i).atoms());
    s.from_initial.push_back(d.from_initial(i));
  }
  return s;
}

Diagram distribution_diagram(const SetDiagram& s, const std::vector<Rational>& pi0) {
  const auto& init = s.initial_set();
  if (pi0.size() != init.size()) throw Error(ErrorCode::kBadParam, "distribution length does not match the initial set");
  std::vector<std::size_t> kept;
  std::vector<Atom> atoms;
  std::vector<Rational> weights;
  for (std::size_t a = 0; a < pi0.size(); ++a)
    if (sgn(pi0[a]) != 0) {
      kept.push_back(a);
      atoms.push_back(init[a]);
      weights.push_back(pi0[a]);
    }
  const ProbSpace base = ProbSpace::make(std::move(atoms), std::move(weights));
  std::vector<std::vector<std::size_t>> classes(s.category.size());
  for (std::size_t i = 0; i < s.category.size(); ++i)
    for (std::size_t a : kept) classes[i].push_back(s.from_initial[i][a]);
  return Diagram::from_variables(s.category, base, classes, s.sets);
}

std::vector<Rational> initial_distribution(const SetDiagram& s, const Diagram& d) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t a = 0; a < s.initial_set().size(); ++a) index.emplace(s.initial_set()[a], a);
  std::vector<Rational> pi(s.initial_set().size(), Rational(0));
  const ProbSpace& z = d.initial_space();
  for (std::size_t a = 0; a < z.size(); ++a) {
    auto it = index.find(z.atom(a));
    if (it == index.end()) throw Error(ErrorCode::kUnknownAtom, "atom '" + z.atom(a) + "' is not in the initial set");
    pi[it->second] = z.weight(a);
  }
  return pi;
}

LocalDecomposition local_decomposition(const std::vector<Rational>& pi, const std::vector<Rational>& pi_prime) {
  if (pi.size() != pi_prime.size()) throw Error(ErrorCode::kBadParam, "distributions on different sets");
  LocalDecomposition d;
  Rational l1 = 0;
  for (std::size_t a = 0; a < pi.size(); ++a) l1 += abs(pi[a] - pi_prime[a]);
  d.alpha = l1 / 2;
  const std::size_t n = pi.size();
  if (d.alpha == 1) {
    d.common.assign(n, Rational(0));
    d.rest_left = pi;
    d.rest_right = pi_prime;
    return d;
  }
  if (sgn(d.alpha) == 0) {
    d.common = pi;
    d.rest_left = pi;
    d.rest_right = pi_prime;
    return d;
  }
  const Rational keep = 1 - d.alpha;
  d.common.resize(n);
  d.rest_left.resize(n);
  d.rest_right.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Rational lo = std::min(pi[a], pi_prime[a]);
    d.common[a] = lo / keep;
    d.rest_left[a] = (pi[a] - lo) / d.alpha;
    d.rest_right[a] = (pi_prime[a] - lo) / d.alpha;
  }
  return d;
}

LocalEstimate local_estimate_witness(const SetDiagram& s, const std::vector<Rational>& pi,
                                     const std::vector<Rational>& pi_prime, const LocalOptions& options) {
  const auto& cat = s.category;
  const std::size_t objects = cat.size();
  const std::size_t card = s.initial_set().size();
  const LocalDecomposition dec = local_decomposition(pi, pi_prime);
  LocalEstimate est;
  est.alpha = dec.alpha;
  est.rough = dec.degenerate();
  const long double alpha = to_double(dec.alpha);
  const long double h_lambda = f_log(alpha) + f_log(1.0L - alpha);
  est.bound = static_cast<double>(2.0L * objects * (alpha * std::log(static_cast<long double>(card)) + h_lambda));

  // Closed-form entropies of the pushed-forward mixture.
  long double kd = 0;
  for (std::size_t i = 0; i < objects; ++i) {
    const std::size_t size = s.sets[i].size();
    const auto& sigma = s.from_initial[i];
    const auto common = push(dec.common, sigma, size);
    const auto left = push(dec.rest_left, sigma, size);
    const auto right = push(dec.rest_right, sigma, size);
    long double hz = 0;
    if (alpha > 0) hz = -alpha * std::log(alpha) + alpha * (weights_entropy(left) + weights_entropy(right));
    for (std::size_t a = 0; a < size; ++a) {
      const long double l = to_double(left[a]);
      const long double r = to_double(right[a]);
      const long double c = to_double(common[a]);
      hz += f_log((1.0L - alpha) * c + alpha * l * r) - f_log(alpha * l * r);
    }
    kd += 2 * hz - weights_entropy(push(pi, sigma, size)) - weights_entropy(push(pi_prime, sigma, size));
  }
  est.witness_kd = static_cast<double>(kd);

  const Diagram dx = distribution_diagram(s, pi);
  const Diagram dy = distribution_diagram(s, pi_prime);
  auto label_index = [](const Diagram& d, std::size_t i, const Atom& label) { return d.space(i).index_of(label); };

  if (card * card <= options.materialize_cap) {
    // Base atoms (a, b) of S0 x S0 with positive mixture weight.
    const Rational keep = 1 - dec.alpha;
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::vector<Atom> atoms;
    std::vector<Rational> weights;
    for (std::size_t a = 0; a < card; ++a)
      for (std::size_t b = 0; b < card; ++b) {
        Rational w = dec.alpha * dec.rest_left[a] * dec.rest_right[b];
        if (a == b) w += keep * dec.common[a];
        if (sgn(w) == 0) continue;
        cells.push_back({a, b});
        atoms.push_back(pair_label(s.initial_set()[a], s.initial_set()[b]));
        weights.push_back(w);
      }
    const ProbSpace base = ProbSpace::make(std::move(atoms), std::move(weights));
    std::vector<std::vector<std::size_t>> classes(objects);
    std::vector<std::vector<Atom>> labels(objects);
    for (std::size_t i = 0; i < objects; ++i) {
      const auto& set = s.sets[i];
      for (const auto& p : set)
        for (const auto& q : set) labels[i].push_back(pair_label(p, q));
      for (const auto& [a, b] : cells) classes[i].push_back(s.from_initial[i][a] * set.size() + s.from_initial[i][b]);
    }
    Diagram top = Diagram::from_variables(cat, base, classes, labels);
    std::vector<std::vector<std::size_t>> to_left(objects), to_right(objects);
    for (std::size_t i = 0; i < objects; ++i) {
      to_left[i].assign(top.space(i).size(), kNoAtom);
      to_right[i].assign(top.space(i).size(), kNoAtom);
      for (std::size_t k = 0; k < cells.size(); ++k) {
        const std::size_t atom = top.from_initial(i)[k];
        to_left[i][atom] = label_index(dx, i, s.sets[i][s.from_initial[i][cells[k].first]]);
        to_right[i][atom] = label_index(dy, i, s.sets[i][s.from_initial[i][cells[k].second]]);
      }
    }
    FanOfDiagrams fan = FanOfDiagrams::make(std::move(top), dx, dy, std::move(to_left), std::move(to_right));
    est.materialized_kd = kd_of_fan(fan);
    est.witness = std::move(fan);
  }

  if (options.lambda_fans) {
    const ProbSpace lambda = lambda_space(dec.alpha);
    const Diagram constant = Diagram::constant(cat, lambda);
    const Rational keep = 1 - dec.alpha;
    auto tilde = [&](const std::vector<Rational>& rest, const Diagram& side) {
      std::vector<std::pair<std::size_t, int>> cells;
      std::vector<Atom> atoms;
      std::vector<Rational> weights;
      for (std::size_t a = 0; a < card; ++a)
        for (int bit = 0; bit < 2; ++bit) {
          const Rational w = bit ? dec.alpha * rest[a] : keep * dec.common[a];
          if (sgn(w) == 0) continue;
          cells.push_back({a, bit});
          atoms.push_back(pair_label(s.initial_set()[a], bit ? "■" : "□"));
          weights.push_back(w);
        }
      const ProbSpace base = ProbSpace::make(std::move(atoms), std::move(weights));
      std::vector<std::vector<std::size_t>> classes(objects);
      std::vector<std::vector<Atom>> labels(objects);
      for (std::size_t i = 0; i < objects; ++i) {
        for (const auto& p : s.sets[i]) {
          labels[i].push_back(pair_label(p, "□"));
          labels[i].push_back(pair_label(p, "■"));
        }
        for (const auto& [a, bit] : cells) classes[i].push_back(s.from_initial[i][a] * 2 + static_cast<std::size_t>(bit));
      }
      Diagram top = Diagram::from_variables(cat, base, classes, labels);
      std::vector<std::vector<std::size_t>> to_side(objects), to_lambda(objects);
      for (std::size_t i = 0; i < objects; ++i) {
        to_side[i].assign(top.space(i).size(), kNoAtom);
        to_lambda[i].assign(top.space(i).size(), kNoAtom);
        for (std::size_t k = 0; k < cells.size(); ++k) {
          const std::size_t atom = top.from_initial(i)[k];
          to_side[i][atom] = label_index(side, i, s.sets[i][s.from_initial[i][cells[k].first]]);
          to_lambda[i][atom] = lambda.index_of(cells[k].second ? "■" : "□");
        }
      }
      return FanOfDiagrams::make(std::move(top), side, constant, std::move(to_side), std::move(to_lambda));
    };
    auto fans = std::make_pair(tilde(dec.rest_left, dx), tilde(dec.rest_right, dy));
    auto slice_matches = [&](const FanOfDiagrams& fan, const char* mark, const std::vector<Rational>& expected) {
      const auto atom = lambda.find(mark);
      if (!atom) return true;  // zero-weight slice
      const Diagram slice = slice_top(fan, *atom);
      const Diagram want = distribution_diagram(s, expected);
      return diagram_isomorphic(slice, want).has_value();
    };
    est.slices_ok = slice_matches(fans.first, "□", dec.common) && slice_matches(fans.first, "■", dec.rest_left) &&
                    slice_matches(fans.second, "□", dec.common) && slice_matches(fans.second, "■", dec.rest_right);
    est.lambda_fans = std::move(fans);
  }
  return est;
}

IkdBounds ikd_bounds(const Diagram& x, const Diagram& y, const CouplingOptions& options) {
  if (!(x.category() == y.category())) throw Error(ErrorCode::kShapeMismatch, "diagrams have different shapes");
  const std::size_t n = x.size();
  IkdBounds b;
  for (std::size_t i = 0; i < n; ++i) b.lower += std::abs(x.space(i).entropy() - y.space(i).entropy());

  // Independent coupling.
  {
    Diagram top = tensor_diagrams(x, y);
    const std::size_t nb0 = y.initial_space().size();
    std::vector<std::vector<std::size_t>> to_x(n), to_y(n);
    for (std::size_t i = 0; i < n; ++i) {
      to_x[i].assign(top.space(i).size(), kNoAtom);
      to_y[i].assign(top.space(i).size(), kNoAtom);
      for (std::size_t p = 0; p < top.initial_space().size(); ++p) {
        const std::size_t atom = top.from_initial(i)[p];
        to_x[i][atom] = x.from_initial(i)[p / nb0];
        to_y[i][atom] = y.from_initial(i)[p % nb0];
      }
    }
    FanOfDiagrams fan = FanOfDiagrams::make(std::move(top), x, y, std::move(to_x), std::move(to_y));
    const double kd = kd_of_fan(fan);
    b.upper = kd;
    b.witness = CouplingWitness{std::move(fan), kd};
  }
  auto offer = [&](CouplingWitness w) {
    if (w.kd < b.upper) {
      b.upper = w.kd;
      b.witness = std::move(w);
    }
  };

  std::optional<DiagramIso> iso;
  try {
    iso = diagram_isomorphic(x, y);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTooLarge) throw;
  }
  if (iso) {
    std::vector<std::vector<std::size_t>> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = identity_map(x.space(i).size());
    FanOfDiagrams fan = FanOfDiagrams::make(x, x, y, std::move(ids), *iso);
    offer(CouplingWitness{std::move(fan), 0.0});
  }

  if (n == 1) {
    const auto& xs = x.initial_space();
    const auto& ys = y.initial_space();
    if (xs.size() * ys.size() <= std::min<std::size_t>(options.cap, 64)) {
      const auto mec = min_entropy_coupling(xs, ys, options);
      offer(coupling_witness(xs, ys, mec.table));
      b.exact = true;
    }
  }

  // Local witness when both diagrams live on the same sets and maps.
  const SetDiagram sx = SetDiagram::of(x);
  const SetDiagram sy = SetDiagram::of(y);
  if (sx.sets == sy.sets && sx.from_initial == sy.from_initial) {
    const auto est = local_estimate_witness(sx, initial_distribution(sx, x), initial_distribution(sx, y),
                                            LocalOptions{4096, false});
    if (est.witness) offer(CouplingWitness{*est.witness, *est.materialized_kd});
  }
  if (b.exact) b.lower = b.upper;
  return b;
}

double slicing_rhs(const FanOfDiagrams& fan_x, const FanOfDiagrams& fan_y,
                   const std::function<double(std::size_t)>& per_u_upper) {
  const ProbSpace& u = fan_x.right.initial_space();
  if (!u.same_distribution(fan_y.right.initial_space()) || !(fan_x.top.category() == fan_y.top.category()))
    throw Error(ErrorCode::kMismatchedU, "fans do not share the same U");
  long double total = 0;
  for (std::size_t a = 0; a < u.size(); ++a) total += to_double(u.weight(a)) * per_u_upper(a);
  total += 2.0L * fan_x.top.size() * u.entropy();
  return static_cast<double>(total);
}

}  // namespace arrowc

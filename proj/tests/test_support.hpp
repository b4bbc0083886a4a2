#pragma once

// Random generators and brute-force reference implementations shared by the
// unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "arrowc/categories.hpp"
#include "arrowc/diagrams.hpp"
#include "arrowc/distances.hpp"
#include "arrowc/rng.hpp"
#include "arrowc/spaces.hpp"

namespace testing {

using arrowc::Atom;
using arrowc::ProbSpace;
using arrowc::Rational;
using arrowc::Rng;

inline std::vector<Atom> labels(std::size_t n, const std::string& prefix = "a") {
  std::vector<Atom> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Normalized integer weights in 1..max_w; with allow_zero some are zero
/// (only when at least one stays positive).
inline std::vector<Rational> random_weights(Rng& rng, std::size_t n, unsigned max_w = 9, bool allow_zero = false) {
  std::vector<unsigned long> w(n);
  unsigned long total = 0;
  for (auto& x : w) {
    x = allow_zero ? rng.bounded(max_w + 1) : 1 + rng.bounded(max_w);
    total += x;
  }
  if (total == 0) {
    w[rng.bounded(n)] = 1;
    total = 1;
  }
  std::vector<Rational> out;
  for (auto x : w) {
    Rational q(x, total);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

inline ProbSpace random_space(Rng& rng, std::size_t max_support, const std::string& prefix = "a") {
  const std::size_t n = 1 + rng.bounded(max_support);
  return ProbSpace::make(labels(n, prefix), random_weights(rng, n));
}

/// Surjective index map of x onto k = 1..x.size() classes.
inline std::vector<std::size_t> random_surjection(Rng& rng, std::size_t n) {
  const std::size_t k = 1 + rng.bounded(n);
  std::vector<std::size_t> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = i < k ? i : rng.bounded(k);
  for (std::size_t i = n; i > 1; --i) std::swap(map[i - 1], map[rng.bounded(i)]);
  return map;
}

inline std::size_t class_count(const std::vector<std::size_t>& map) {
  return map.empty() ? 0 : *std::max_element(map.begin(), map.end()) + 1;
}

/// Reachability by breadth-first search over the covers.
inline std::vector<std::vector<char>> bfs_reachability(std::size_t n,
                                                       const std::vector<std::pair<std::size_t, std::size_t>>& covers) {
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> queue{s};
    reach[s][s] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (const auto& [a, b] : covers)
        if (a == queue[q] && !reach[s][b]) {
          reach[s][b] = 1;
          queue.push_back(b);
        }
  }
  return reach;
}

/// Exact solve of A v = b; nullopt unless consistent with a unique solution.
inline std::optional<std::vector<Rational>> solve_unique(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) return std::nullopt;  // free column
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (r < cols) return std::nullopt;
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rational> v(cols);
  for (std::size_t i = 0; i < r; ++i) v[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return v;
}

/// Minimum of 2H(Z) - H(X) - H(Y) over the vertices of the transportation
/// polytope, found by trying every support of size m + n - 1.
inline double brute_force_mec(const ProbSpace& x, const ProbSpace& y, std::size_t* vertex_count = nullptr) {
  const std::size_t m = x.size(), n = y.size(), cells = m * n, k = m + n - 1;
  double best = 1e300;
  std::size_t count = 0;
  std::vector<int> choose(cells, 0);
  std::fill(choose.end() - static_cast<long>(k), choose.end(), 1);
  do {
    std::vector<std::size_t> support;
    for (std::size_t c = 0; c < cells; ++c)
      if (choose[c]) support.push_back(c);
    std::vector<std::vector<Rational>> a(m + n, std::vector<Rational>(k, 0));
    std::vector<Rational> b(m + n);
    for (std::size_t i = 0; i < m; ++i) b[i] = x.weight(i);
    for (std::size_t j = 0; j < n; ++j) b[m + j] = y.weight(j);
    for (std::size_t s = 0; s < k; ++s) {
      a[support[s] / n][s] = 1;
      a[m + support[s] % n][s] = 1;
    }
    const auto v = solve_unique(a, b);
    if (!v || std::any_of(v->begin(), v->end(), [](const Rational& q) { return q < 0; })) continue;
    ++count;
    double h = 0;
    for (const auto& q : *v) h += arrowc::entropy_term(q);
    best = std::min(best, 2 * h - x.entropy() - y.entropy());
  } while (std::next_permutation(choose.begin(), choose.end()));
  if (vertex_count) *vertex_count = count;
  return best;
}

inline Rational table_row_sum(const arrowc::CouplingTable& t, std::size_t i) {
  Rational s = 0;
  for (const auto& q : t[i]) s += q;
  return s;
}

inline Rational table_col_sum(const arrowc::CouplingTable& t, std::size_t j) {
  Rational s = 0;
  for (const auto& row : t) s += row[j];
  return s;
}

/// Random variables on {0..b-1}^n: object S of full_lambda(n) carries the
/// projection onto the coordinates in S. Base weights are random, zero
/// entries allowed, and base atoms are listed in `order` when given.
inline arrowc::Diagram random_lambda_diagram(Rng& rng, std::size_t n, std::size_t b,
                                             std::vector<std::size_t> order = {}) {
  const auto cat = arrowc::standard_category(arrowc::StandardKind::kFullLambda, n);
  std::size_t cells = 1;
  for (std::size_t k = 0; k < n; ++k) cells *= b;
  if (order.empty())
    for (std::size_t c = 0; c < cells; ++c) order.push_back(c);
  const auto w = random_weights(rng, cells, 5, true);
  auto digits = [&](std::size_t c) {
    std::vector<std::size_t> d(n);
    for (std::size_t k = 0; k < n; ++k, c /= b) d[k] = c % b;
    return d;
  };
  std::vector<Atom> base_labels;
  std::vector<Rational> base_weights;
  for (std::size_t c : order) {
    std::string l;
    for (auto v : digits(c)) l += std::to_string(v);
    base_labels.push_back(l);
    base_weights.push_back(w[c]);
  }
  const ProbSpace base = ProbSpace::make(base_labels, base_weights);
  std::vector<std::vector<std::size_t>> classes(cat.size());
  std::vector<std::vector<Atom>> names(cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    std::vector<std::size_t> coords;
    for (std::size_t pos = 0; pos < cat.id(i).size(); pos += 2) coords.push_back(cat.id(i)[pos] - '1');
    std::size_t classes_i = 1;
    for (std::size_t k = 0; k < coords.size(); ++k) classes_i *= b;
    for (std::size_t c = 0; c < classes_i; ++c) {
      std::string l;
      for (std::size_t k = 0, v = c; k < coords.size(); ++k, v /= b) l += std::to_string(v % b);
      names[i].push_back(l);
    }
    for (std::size_t a = 0; a < base.size(); ++a) {
      // base atoms are ordered by `order` with zero weights dropped, so read
      // the digits back from the label.
      const Atom& lab = base.atom(a);
      std::size_t cls = 0;
      for (std::size_t k = coords.size(); k-- > 0;) cls = cls * b + static_cast<std::size_t>(lab[coords[k]] - '0');
      classes[i].push_back(cls);
    }
  }
  return arrowc::Diagram::from_variables(cat, base, classes, names);
}

}  // namespace testing

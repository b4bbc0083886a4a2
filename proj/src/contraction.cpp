#include "arrowc/contraction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_map>

#include "arrowc/distances.hpp"
#include "arrowc/error.hpp"

namespace arrowc {

namespace {

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= count) return;
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Sample {
  std::vector<std::size_t> u_bar;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

Sample draw(const ExtendedFan& ext, const DiscreteSampler& sampler, std::uint64_t n, Rng& rng, bool keep_u) {
  Sample s;
  std::vector<std::uint64_t> mult(ext.u_space.size(), 0);
  if (keep_u) s.u_bar.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::size_t u = sampler(rng);
    ++mult[u];
    if (keep_u) s.u_bar.push_back(u);
  }
  s.counts.assign(ext.card_x0(), 0);
  for (const auto& [x, u] : ext.y0_pairs) s.counts[x] += mult[u];
  for (auto c : s.counts) s.total += c;
  return s;
}

// 2 alpha as an exact rational: sum_x |N(x)|X0| - total| / (total |X0|).
Rational two_alpha(const Sample& s, std::size_t card) {
  BigInt diff = 0;
  const BigInt total(static_cast<unsigned long>(s.total));
  for (auto c : s.counts) diff += abs(BigInt(static_cast<unsigned long>(c)) * static_cast<unsigned long>(card) - total);
  Rational q(diff, total * static_cast<unsigned long>(card));
  q.canonicalize();
  return q;
}

double height_of(const Sample& s) {
  long double h = 0;
  const long double total = static_cast<long double>(s.total);
  for (auto c : s.counts)
    if (c > 0) h += static_cast<long double>(c) / total * std::log(static_cast<long double>(c));
  return static_cast<double>(h);
}

double lambda_entropy(double alpha) {
  auto f = [](double p) { return p > 0 ? -p * std::log(p) : 0.0; };
  return f(alpha) + f(1.0 - alpha);
}

Diagram uniform_over(const IndexingCategory& cat, const Diagram& x, const std::vector<std::size_t>& atoms) {
  const ProbSpace& x0 = x.initial_space();
  std::vector<Atom> labels;
  for (std::size_t a : atoms) labels.push_back(x0.atom(a));
  const ProbSpace base =
      ProbSpace::make(std::move(labels), std::vector<Rational>(atoms.size(), Rational(1, atoms.size())));
  std::vector<std::vector<std::size_t>> classes(cat.size());
  std::vector<std::vector<Atom>> names(cat.size());
  for (std::size_t k = 0; k < cat.size(); ++k) {
    names[k] = x.space(k).atoms();
    for (std::size_t a : atoms) classes[k].push_back(x.from_initial(k)[a]);
  }
  return Diagram::from_variables(cat, base, classes, names);
}

ProbSpace counter_space(std::uint64_t n) {
  std::vector<Atom> labels;
  labels.reserve(n);
  for (std::uint64_t k = 1; k <= n; ++k) labels.push_back(std::to_string(k));
  return ProbSpace::make(std::move(labels), std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))));
}

}  // namespace

Diagram ExtendedFan::conditioned_x(std::size_t u_atom) const {
  {
    std::lock_guard<std::mutex> lock(cache->mutex);
    auto it = cache->by_u.find(u_atom);
    if (it != cache->by_u.end()) return it->second;
  }
  Diagram d = sub_diagram(condition_diagram(source, fan.u, u_atom), h);
  std::lock_guard<std::mutex> lock(cache->mutex);
  return cache->by_u.emplace(u_atom, std::move(d)).first->second;
}

ExtendedFan extend_admissible_fan(const Diagram& d, const FanIndices& fi) {
  const auto& cat = d.category();
  const FanClassification cls = classify_fan(d, fi);
  if (!cls.admissible) {
    std::string why = !cls.minimal ? "fan is not minimal"
                      : !cls.top_is_initial ? "fan top is not the initial object"
                                            : "objects outside both cones:";
    for (const auto& w : cls.witness) why += " " + w;
    throw Error(ErrorCode::kNotAdmissible, why);
  }
  AnalyzeOptions ao;
  ao.order_cap = 0;
  if (!analyze(d, ao).homogeneous) throw Error(ErrorCode::kNotHomogeneous, "diagram is not homogeneous");

  ExtendedFan ext;
  ext.source = d;
  ext.fan = fi;
  ext.h = cone_members(cat, fi.x, ConeDirection::kDescendants);
  ext.xdiag = sub_diagram(d, ext.h);
  ext.u_space = d.space(fi.u);

  const auto& hcat = ext.h.category;
  const std::size_t hn = hcat.size();
  const ProbSpace& z0 = d.initial_space();
  const std::size_t nu = ext.u_space.size();
  std::vector<std::vector<std::size_t>> classes(hn, std::vector<std::size_t>(z0.size()));
  std::vector<std::vector<Atom>> labels(hn);
  for (std::size_t k = 0; k < hn; ++k) {
    const std::size_t g = ext.h.members[k];
    const ProbSpace& xk = d.space(g);
    for (std::size_t a = 0; a < xk.size(); ++a)
      for (std::size_t b = 0; b < nu; ++b) labels[k].push_back(pair_label(xk.atom(a), ext.u_space.atom(b)));
    for (std::size_t p = 0; p < z0.size(); ++p)
      classes[k][p] = d.from_initial(g)[p] * nu + d.from_initial(fi.u)[p];
  }
  ext.ydiag = Diagram::from_variables(hcat, z0, classes, labels);

  ext.y_to_x.resize(hn);
  ext.y_to_u.resize(hn);
  for (std::size_t k = 0; k < hn; ++k) {
    const std::size_t g = ext.h.members[k];
    ext.y_to_x[k].assign(ext.ydiag.space(k).size(), 0);
    ext.y_to_u[k].assign(ext.ydiag.space(k).size(), 0);
    for (std::size_t p = 0; p < z0.size(); ++p) {
      const std::size_t y = ext.ydiag.from_initial(k)[p];
      ext.y_to_x[k][y] = d.from_initial(g)[p];
      ext.y_to_u[k][y] = d.from_initial(fi.u)[p];
    }
  }
  const std::size_t root = hcat.initial();
  for (std::size_t y = 0; y < ext.ydiag.space(root).size(); ++y)
    ext.y0_pairs.push_back({ext.y_to_x[root][y], ext.y_to_u[root][y]});

  const ProbSpace& x0 = ext.xdiag.initial_space();
  if (!x0.is_uniform() || !ext.u_space.is_uniform())
    throw Error(ErrorCode::kNotHomogeneous, "X0 and U must be uniform");
  ext.fiber_of_u.assign(nu, {});
  for (const auto& [x, u] : ext.y0_pairs) ext.fiber_of_u[u].push_back(x);
  const std::size_t fiber = ext.fiber_of_u[0].size();
  for (const auto& f : ext.fiber_of_u)
    if (f.size() != fiber) throw Error(ErrorCode::kNotHomogeneous, "fibers of X0 over U differ in size");
  // Y0 must be uniform too, so that every fiber X0|u is uniform.
  if (!ext.ydiag.space(root).is_uniform())
    throw Error(ErrorCode::kNotHomogeneous, "joint of X0 and U is not uniform");
  ext.rho = Rational(static_cast<unsigned long>(fiber), static_cast<unsigned long>(x0.size()));
  ext.rho.canonicalize();
  return ext;
}

ContractionParams default_parameters(const ExtendedFan& ext, std::uint64_t seed) {
  const std::size_t card = ext.card_x0();
  if (card < 2) throw Error(ErrorCode::kBadParam, "default parameters need |X0| >= 2");
  const long double l = std::log(static_cast<long double>(card));
  ContractionParams p;
  p.n = static_cast<std::uint64_t>(std::ceil(l * l * l / static_cast<long double>(to_double(ext.rho))));
  p.t = static_cast<double>(10.0L / l);
  p.rho = ext.rho;
  p.seed = seed;
  p.regime_warning = p.t > 1.0;
  return p;
}

ContractionRun contract_once(const ExtendedFan& ext, const ContractionParams& params, const ContractOptions& options) {
  if (params.n == 0) throw Error(ErrorCode::kBadParam, "N must be positive");
  ContractionRun run;
  run.seed = params.seed;
  Rng rng(params.seed);
  const DiscreteSampler sampler(ext.u_space.weights());
  Sample s = draw(ext, sampler, params.n, rng, true);
  const std::size_t card = ext.card_x0();
  const auto& hcat = ext.h.category;

  run.u_bar = std::move(s.u_bar);
  run.counts = s.counts;
  run.total = s.total;
  run.sum_nu = Rational(static_cast<unsigned long>(s.total), static_cast<unsigned long>(params.n));
  run.sum_nu.canonicalize();
  std::vector<Rational> p(card);
  run.sum_p = 0;
  for (std::size_t x = 0; x < card; ++x) {
    p[x] = Rational(static_cast<unsigned long>(s.counts[x]), static_cast<unsigned long>(s.total));
    p[x].canonicalize();
    run.sum_p += p[x];
  }
  run.alpha = two_alpha(s, card) / 2;
  run.coverage = std::all_of(s.counts.begin(), s.counts.end(), [](std::uint64_t c) { return c > 0; });
  run.height = height_of(s);

  const long double lcard = std::log(static_cast<long double>(card));
  run.height_threshold = static_cast<double>(
      std::log(static_cast<long double>(params.n) * static_cast<long double>(to_double(ext.rho))) + params.t);
  run.height_loglog = static_cast<double>(4.0L * std::log(lcard));
  run.ikd_threshold = 20.0 * static_cast<double>(ext.size_h());

  // X' over h: X0 atoms weighted by N(x) / total.
  {
    const ProbSpace& x0 = ext.xdiag.initial_space();
    std::vector<std::size_t> kept;
    std::vector<Atom> labels;
    std::vector<Rational> weights;
    for (std::size_t x = 0; x < card; ++x)
      if (s.counts[x] > 0) {
        kept.push_back(x);
        labels.push_back(x0.atom(x));
        weights.push_back(p[x]);
      }
    const ProbSpace base = ProbSpace::make(std::move(labels), std::move(weights));
    std::vector<std::vector<std::size_t>> classes(hcat.size());
    std::vector<std::vector<Atom>> names(hcat.size());
    for (std::size_t k = 0; k < hcat.size(); ++k) {
      names[k] = ext.xdiag.space(k).atoms();
      for (std::size_t x : kept) classes[k].push_back(ext.xdiag.from_initial(k)[x]);
    }
    run.x_prime = Diagram::from_variables(hcat, base, classes, names);
    run.height_alt = static_cast<double>(std::log(static_cast<long double>(s.total)) - run.x_prime->initial_space().entropy());
  }

  const SetDiagram sets = SetDiagram::of(ext.xdiag);
  const std::vector<Rational> uniform(card, Rational(1, static_cast<unsigned long>(card)));
  LocalOptions lo;
  lo.materialize_cap = 0;
  lo.lambda_fans = false;
  const LocalEstimate est = local_estimate_witness(sets, p, uniform, lo);
  run.witness_kd = est.witness_kd;
  run.ikd_upper = run.coverage ? est.bound : static_cast<double>(2.0L * ext.size_h() * lcard);

  run.v_n = counter_space(params.n);
  if (run.total <= options.y_prime_cap) {
    const ProbSpace& x0 = ext.xdiag.initial_space();
    std::vector<std::pair<std::size_t, std::uint64_t>> cells;
    std::vector<Atom> labels;
    cells.reserve(run.total);
    for (std::uint64_t n = 0; n < params.n; ++n)
      for (std::size_t x : ext.fiber_of_u[run.u_bar[n]]) {
        cells.push_back({x, n});
        labels.push_back(pair_label(x0.atom(x), run.v_n.atom(n)));
      }
    const ProbSpace base =
        ProbSpace::make(std::move(labels), std::vector<Rational>(cells.size(), Rational(1, static_cast<unsigned long>(cells.size()))));
    std::vector<std::vector<std::size_t>> classes(hcat.size());
    std::vector<std::vector<Atom>> names(hcat.size());
    for (std::size_t k = 0; k < hcat.size(); ++k) {
      std::unordered_map<std::uint64_t, std::size_t> index;
      const ProbSpace& xk = ext.xdiag.space(k);
      for (const auto& [x, n] : cells) {
        const std::size_t a = ext.xdiag.from_initial(k)[x];
        const std::uint64_t key = static_cast<std::uint64_t>(a) * params.n + n;
        auto [it, inserted] = index.emplace(key, names[k].size());
        if (inserted) names[k].push_back(pair_label(xk.atom(a), run.v_n.atom(n)));
        classes[k].push_back(it->second);
      }
    }
    run.y_prime = Diagram::from_variables(hcat, base, classes, names);
  }

  if (options.check_fibers) {
    std::set<std::size_t> distinct(run.u_bar.begin(), run.u_bar.end());
    const std::size_t reference = run.u_bar.front();
    try {
      const Diagram ref = ext.conditioned_x(reference);
      for (std::size_t u : distinct) {
        const Diagram xu = ext.conditioned_x(u);
        const Diagram slice = uniform_over(hcat, ext.xdiag, ext.fiber_of_u[u]);
        if (!diagram_isomorphic(slice, xu)) {
          run.fiber_iso_ok = false;
          run.fiber_failure = "X'|n is not isomorphic to X|" + ext.u_space.atom(u);
          break;
        }
        if (!diagram_isomorphic(xu, ref)) {
          run.fiber_iso_ok = false;
          run.fiber_failure = "X|" + ext.u_space.atom(u) + " differs from X|" + ext.u_space.atom(reference);
          break;
        }
      }
    } catch (const Error& e) {
      run.fiber_iso_ok = false;
      run.fiber_failure = e.what();
    }
  }
  return run;
}

std::vector<ContractionRun> contract_many(const ExtendedFan& ext, const ContractionParams& params, std::size_t runs,
                                          std::size_t threads, const ContractOptions& options) {
  std::vector<ContractionRun> out(runs);
  parallel_for(runs, threads, [&](std::size_t k) {
    ContractionParams p = params;
    p.seed = subseed(params.seed, k);
    out[k] = contract_once(ext, p, options);
  });
  return out;
}

Diagram recover_collapsed_diagram(const ExtendedFan& ext, const ContractionRun& run) {
  if (!run.y_prime) throw Error(ErrorCode::kCapExceeded, "run has no materialized Y'");
  const Diagram& d = ext.source;
  const auto& cat = d.category();
  const std::size_t u = ext.fan.u;
  std::vector<std::size_t> local(cat.size(), kNoAtom);
  for (std::size_t k = 0; k < ext.h.members.size(); ++k) local[ext.h.members[k]] = k;

  // Fan generation: each ancestor g of u is the joint of its descendants in
  // h together with U.
  const auto upper = cat.ancestors(u);
  std::vector<std::vector<std::size_t>> below(cat.size());
  const ProbSpace& z0 = d.initial_space();
  for (std::size_t g : upper) {
    if (local[g] != kNoAtom)
      throw Error(ErrorCode::kNotFanGenerated, "object '" + cat.id(g) + "' lies in both cones");
    for (std::size_t k = 0; k < ext.h.members.size(); ++k)
      if (cat.reaches(g, ext.h.members[k])) below[g].push_back(k);
    std::set<std::vector<std::size_t>> keys;
    for (std::size_t p = 0; p < z0.size(); ++p) {
      std::vector<std::size_t> key;
      for (std::size_t k : below[g]) key.push_back(d.from_initial(ext.h.members[k])[p]);
      key.push_back(d.from_initial(u)[p]);
      keys.insert(key);
    }
    if (keys.size() != d.space(g).size())
      throw Error(ErrorCode::kNotFanGenerated, "object '" + cat.id(g) + "' is not the joint of its descendants with '" +
                                                   cat.id(u) + "'");
  }

  const Diagram& yp = *run.y_prime;
  const auto& hcat = ext.h.category;
  const std::size_t hroot = hcat.initial();
  const ProbSpace& base = yp.space(hroot);
  // Y'0 atom -> (X'0 atom, n): recover from the sampled cells.
  std::vector<std::size_t> y_to_x0(base.size()), y_to_n(base.size());
  {
    std::size_t k = 0;
    for (std::uint64_t n = 0; n < run.u_bar.size(); ++n)
      for (std::size_t x : ext.fiber_of_u[run.u_bar[n]]) {
        y_to_x0[k] = x;
        y_to_n[k] = n;
        ++k;
      }
  }
  std::vector<std::vector<std::size_t>> classes(cat.size(), std::vector<std::size_t>(base.size()));
  std::vector<std::vector<Atom>> labels(cat.size());
  for (std::size_t g = 0; g < cat.size(); ++g) {
    if (local[g] != kNoAtom) {
      const std::size_t k = local[g];
      labels[g] = ext.xdiag.space(k).atoms();
      for (std::size_t a = 0; a < base.size(); ++a) classes[g][a] = ext.xdiag.from_initial(k)[y_to_x0[a]];
      continue;
    }
    if (!cat.reaches(g, u))
      throw Error(ErrorCode::kNotAdmissible, "object '" + cat.id(g) + "' lies in neither cone");
    std::map<std::vector<std::size_t>, std::size_t> index;
    std::vector<const Atom*> parts;
    for (std::size_t a = 0; a < base.size(); ++a) {
      std::vector<std::size_t> key;
      for (std::size_t k : below[g]) key.push_back(ext.xdiag.from_initial(k)[y_to_x0[a]]);
      key.push_back(y_to_n[a]);
      auto [it, inserted] = index.emplace(key, labels[g].size());
      if (inserted) {
        parts.clear();
        for (std::size_t j = 0; j < below[g].size(); ++j) parts.push_back(&ext.xdiag.space(below[g][j]).atom(key[j]));
        parts.push_back(&run.v_n.atom(key.back()));
        labels[g].push_back(parts.size() == 1 ? *parts[0] : tuple_label(parts));
      }
      classes[g][a] = it->second;
    }
  }
  return Diagram::from_variables(cat, base, classes, labels);
}

std::string_view tail_kind_name(TailKind kind) {
  switch (kind) {
    case TailKind::kBinomialTwoSided: return "binomial_two_sided";
    case TailKind::kBinomialEntropy: return "binomial_entropy";
    case TailKind::kTotalVar: return "totalvar";
    case TailKind::kIkd: return "ikd";
    case TailKind::kHeight: return "height";
  }
  return "unknown";
}

TailBound tail_bound(TailKind kind, std::uint64_t n, const Rational& rho, double t, const TailExtra& extra) {
  const bool wide = kind == TailKind::kBinomialEntropy || kind == TailKind::kHeight;
  const double hi = wide ? 2.0 : 1.0;
  if (!(t >= 0.0 && t <= hi))
    throw Error(ErrorCode::kRangeError, "t = " + std::to_string(t) + " outside [0, " + (wide ? "2" : "1") + "]");
  if (sgn(rho) <= 0 || rho > 1) throw Error(ErrorCode::kRangeError, "rho must lie in (0, 1]");
  const long double nr = static_cast<long double>(n) * static_cast<long double>(to_double(rho));
  const long double card = static_cast<long double>(extra.card_x0);
  const long double lcard = std::log(card);
  const long double tt = static_cast<long double>(t) * t;
  TailBound b;
  long double v = 0;
  switch (kind) {
    case TailKind::kBinomialTwoSided: v = 2.0L * std::exp(-nr * tt / 3.0L); break;
    case TailKind::kBinomialEntropy: v = std::exp(-nr * tt / 12.0L); break;
    case TailKind::kTotalVar: v = 2.0L * card * std::exp(-nr * tt / 3.0L); break;
    case TailKind::kIkd:
      if (extra.card_x0 < 2 || t < 10.0L / lcard - 1e-12L)
        throw Error(ErrorCode::kRangeError, "ikd tail needs 10 / ln|X0| <= t");
      v = 2.0L * card * std::exp(-nr * tt / 3.0L);
      b.threshold = static_cast<double>(t * 2.0L * extra.size_g * lcard);
      break;
    case TailKind::kHeight:
      v = card * std::exp(-nr * tt / 12.0L);
      b.threshold = static_cast<double>(std::log(nr) + t);
      break;
  }
  b.bound = static_cast<double>(v);
  b.reported = std::min(1.0, b.bound);
  return b;
}

namespace {

MonteCarloResult finish(TailKind kind, std::uint64_t n, const Rational& rho, double t, std::size_t trials,
                        std::size_t hits, double bound) {
  MonteCarloResult r;
  r.kind = kind;
  r.n = n;
  r.rho = rho;
  r.t = t;
  r.trials = trials;
  r.hits = hits;
  r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  r.bound = bound;
  r.slack = 3.0 * std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(trials));
  r.pass = r.empirical <= r.bound + r.slack;
  return r;
}

}  // namespace

std::vector<MonteCarloResult> monte_carlo_binomial(std::uint64_t n, const Rational& rho,
                                                   const std::vector<double>& ts_two_sided,
                                                   const std::vector<double>& ts_entropy, std::size_t trials,
                                                   std::uint64_t seed, std::size_t threads) {
  if (trials == 0) throw Error(ErrorCode::kBadParam, "trials must be positive");
  std::vector<std::uint32_t> successes(trials);
  const BernoulliSampler coin(rho);
  parallel_for(trials, threads, [&](std::size_t k) {
    Rng rng(subseed(seed, k));
    std::uint32_t c = 0;
    for (std::uint64_t j = 0; j < n; ++j) c += coin(rng) ? 1 : 0;
    successes[k] = c;
  });
  const double nr = static_cast<double>(n) * to_double(rho);
  std::vector<MonteCarloResult> out;
  for (double t : ts_two_sided) {
    const double bound = tail_bound(TailKind::kBinomialTwoSided, n, rho, t).reported;
    std::size_t hits = 0;
    for (auto c : successes) hits += std::abs(static_cast<double>(c) - nr) > nr * t;
    out.push_back(finish(TailKind::kBinomialTwoSided, n, rho, t, trials, hits, bound));
  }
  for (double t : ts_entropy) {
    const double bound = tail_bound(TailKind::kBinomialEntropy, n, rho, t).reported;
    std::size_t hits = 0;
    for (auto c : successes) {
      const double r = static_cast<double>(c) / nr;
      hits += r > 0 && r * std::log(r) > t;
    }
    out.push_back(finish(TailKind::kBinomialEntropy, n, rho, t, trials, hits, bound));
  }
  return out;
}

std::vector<MonteCarloResult> monte_carlo_contraction(const ExtendedFan& ext, std::uint64_t n, double t,
                                                      std::size_t trials, std::uint64_t seed, std::size_t threads) {
  if (trials == 0) throw Error(ErrorCode::kBadParam, "trials must be positive");
  const std::size_t card = ext.card_x0();
  const TailExtra extra{card, ext.size_h()};
  const double tv_bound = tail_bound(TailKind::kTotalVar, n, ext.rho, t, extra).reported;
  const TailBound height = tail_bound(TailKind::kHeight, n, ext.rho, t, extra);
  std::optional<TailBound> ikd;
  try {
    ikd = tail_bound(TailKind::kIkd, n, ext.rho, t, extra);
  } catch (const Error&) {
    // Outside the regime where the ikd tail is claimed.
  }
  const double lcard = std::log(static_cast<double>(card));
  std::vector<char> tv_hit(trials), height_hit(trials), ikd_hit(trials);
  const DiscreteSampler sampler(ext.u_space.weights());
  parallel_for(trials, threads, [&](std::size_t k) {
    Rng rng(subseed(seed, k));
    const Sample s = draw(ext, sampler, n, rng, false);
    const double ta = to_double(two_alpha(s, card));
    tv_hit[k] = ta > t;
    height_hit[k] = height_of(s) > *height.threshold;
    if (ikd) {
      const double a = ta / 2;
      const double bound = 2.0 * ext.size_h() * (a * lcard + lambda_entropy(a));
      ikd_hit[k] = bound > *ikd->threshold;
    }
  });
  auto count = [](const std::vector<char>& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1)); };
  std::vector<MonteCarloResult> out;
  out.push_back(finish(TailKind::kTotalVar, n, ext.rho, t, trials, count(tv_hit), tv_bound));
  if (ikd) out.push_back(finish(TailKind::kIkd, n, ext.rho, t, trials, count(ikd_hit), ikd->reported));
  out.push_back(finish(TailKind::kHeight, n, ext.rho, t, trials, count(height_hit), height.reported));
  return out;
}

}  // namespace arrowc

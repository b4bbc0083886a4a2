#include "arrowc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "arrowc/contraction.hpp"
#include "arrowc/distances.hpp"
#include "arrowc/error.hpp"
#include "arrowc/expansion.hpp"
#include "arrowc/fixtures.hpp"
#include "arrowc/results.hpp"
#include "arrowc/serialization.hpp"
#include "arrowc/tropical_bounds.hpp"

namespace arrowc {

namespace {

struct Loaded {
  Diagram diagram;
  std::optional<FanIndices> fan;
  std::string name;
};

const IndexingCategory& point() {
  static const IndexingCategory cat = IndexingCategory::build({"0"}, {});
  return cat;
}

// "uniform:4", "lambda:1/4", "dirac" or a JSON path.
Diagram load_spec(const std::string& spec) {
  if (spec.rfind("uniform:", 0) == 0) {
    const auto n = std::stoul(spec.substr(8));
    return Diagram::make(point(), {uniform_space(n)}, {});
  }
  if (spec.rfind("lambda:", 0) == 0) return Diagram::make(point(), {lambda_space(parse_rational(spec.substr(7)))}, {});
  if (spec == "dirac") return Diagram::make(point(), {dirac_space()}, {});
  return load_diagram(spec);
}

Loaded resolve(const ExperimentConfig& c, std::string_view default_fixture = "") {
  Loaded r;
  if (c.fixture == "broken_diamond") {
    r.diagram = diagram_from_json(Json::parse(broken_diamond_json()));
    r.name = c.fixture;
    return r;
  }
  if (!c.fixture.empty() || (c.input.empty() && !default_fixture.empty())) {
    const std::string name = c.fixture.empty() ? std::string(default_fixture) : c.fixture;
    const auto xs = c.x_coords.empty() ? std::vector<int>{} : parse_index_list(c.x_coords);
    const auto us = c.u_coords.empty() ? std::vector<int>{} : parse_index_list(c.u_coords);
    Fixture f = named_fixture(name, c.l, xs, us);
    r.diagram = f.diagram;
    r.fan = f.fan;
    r.name = f.name;
    return r;
  }
  if (c.input.empty()) throw Error(ErrorCode::kConfig, "give --input or --fixture");
  r.diagram = load_spec(c.input);
  r.name = c.input;
  if (!c.x_obj.empty() || !c.z_obj.empty() || !c.u_obj.empty()) {
    const auto& cat = r.diagram.category();
    r.fan = FanIndices::from_ids(cat, c.x_obj, c.z_obj.empty() ? cat.id(cat.initial()) : c.z_obj, c.u_obj);
  }
  return r;
}

FanIndices need_fan(const Loaded& l) {
  if (!l.fan) throw Error(ErrorCode::kConfig, "this command needs a fan: use a fixture or --x/--u");
  return *l.fan;
}

void kv(ResultTable& t, const std::string& key, Cell value) { t.add({Cell(key), std::move(value)}); }

ResultTable key_value() {
  ResultTable t;
  t.columns = {"key", "value"};
  return t;
}

int finish(const ExperimentConfig& c, const ResultTable& table, std::optional<std::uint64_t> seed, std::ostream& out,
           int code) {
  const std::string text = format_results(table, c.format, EmitMeta{c.command, seed});
  if (c.output.empty() || c.output == "-") out << text;
  else write_text_file(c.output, text);
  return code;
}

int cmd_validate(const ExperimentConfig& c, std::ostream& out) {
  const Loaded l = resolve(c, "two_fan");
  const auto& d = l.diagram;
  const auto& cat = d.category();
  ResultTable t = key_value();
  kv(t, "objects", static_cast<std::uint64_t>(cat.size()));
  kv(t, "prime_morphisms", static_cast<std::uint64_t>(cat.prime_morphisms().size()));
  kv(t, "initial", cat.id(cat.initial()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    kv(t, "atoms:" + cat.id(i), static_cast<std::uint64_t>(d.space(i).size()));
    kv(t, "entropy:" + cat.id(i), d.space(i).entropy());
  }
  const Analysis a = analyze(d);
  kv(t, "minimal", a.minimal);
  kv(t, "homogeneous", a.homogeneous);
  kv(t, "homogeneity_certified", a.certified);
  kv(t, "aut_order", a.aut_order ? a.aut_order->get_str() : std::string("not computed"));
  if (l.fan) {
    const FanClassification f = classify_fan(d, *l.fan);
    kv(t, "fan_admissible", f.admissible);
    kv(t, "fan_reduced", f.reduced);
  }
  return finish(c, t, std::nullopt, out, kExitOk);
}

int cmd_entropy(const ExperimentConfig& c, std::ostream& out) {
  const Loaded l = resolve(c, "two_fan");
  ResultTable t;
  t.columns = {"object", "atoms", "entropy"};
  for (std::size_t i = 0; i < l.diagram.size(); ++i)
    t.add({Cell(l.diagram.category().id(i)), Cell(static_cast<std::uint64_t>(l.diagram.space(i).size())),
           Cell(l.diagram.space(i).entropy())});
  return finish(c, t, std::nullopt, out, kExitOk);
}

int cmd_distance(const ExperimentConfig& c, std::ostream& out) {
  if (c.input.empty() || c.input2.empty()) throw Error(ErrorCode::kConfig, "distance needs --input and --input2");
  const Diagram x = load_spec(c.input);
  const Diagram y = load_spec(c.input2);
  const IkdBounds b = ikd_bounds(x, y);
  ResultTable t;
  t.columns = {"lower", "upper", "exact", "witness_kd", "witness_top_atoms"};
  t.add({Cell(b.lower), Cell(b.upper), Cell(b.exact), Cell(b.witness.kd),
         Cell(static_cast<std::uint64_t>(b.witness.fan.top.initial_space().size()))});
  return finish(c, t, std::nullopt, out, kExitOk);
}

ContractionParams contraction_params(const ExperimentConfig& c, const ExtendedFan& ext, std::ostream& err) {
  ContractionParams p = default_parameters(ext, c.seed);
  if (c.n) p.n = *c.n;
  if (c.t) p.t = *c.t;
  p.regime_warning = p.t > 1.0;
  if (p.regime_warning) err << "warning: t = " << p.t << " exceeds 1 (|X0| below e^10)\n";
  return p;
}

int cmd_contract(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const Loaded l = resolve(c, "two_fan");
  const ExtendedFan ext = extend_admissible_fan(l.diagram, need_fan(l));
  const ContractionParams p = contraction_params(c, ext, err);
  ContractOptions opts;
  opts.y_prime_cap = 0;
  const auto runs = contract_many(ext, p, c.seeds, c.threads, opts);
  ResultTable t;
  t.columns = {"run",          "seed",         "subseed",       "N",
               "t",            "rho",          "card_x0",       "alpha",
               "two_alpha",    "height",       "height_threshold", "height_loglog_threshold",
               "coverage",     "ikd_upper",    "witness_kd",    "ikd_threshold",
               "size_G",       "size_H",       "sum_nu_ok",     "sum_p_ok",
               "fiber_iso_ok", "height_ok",    "ikd_ok",        "pass"};
  bool invariants = true;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k];
    const bool nu_ok = r.sum_nu_ok(ext);
    const bool p_ok = r.sum_p_ok();
    invariants = invariants && nu_ok && p_ok && r.fiber_iso_ok;
    if (!r.fiber_iso_ok) err << "run " << k << ": " << r.fiber_failure << "\n";
    const bool pass = nu_ok && p_ok && r.fiber_iso_ok && r.height_ok() && r.ikd_ok() && r.coverage;
    t.add({Cell(static_cast<std::uint64_t>(k)), Cell(c.seed), Cell(r.seed), Cell(p.n), Cell(p.t), Cell(ext.rho),
           Cell(static_cast<std::uint64_t>(ext.card_x0())), Cell(r.alpha), Cell(r.alpha * 2), Cell(r.height),
           Cell(r.height_threshold), Cell(r.height_loglog), Cell(r.coverage), Cell(r.ikd_upper), Cell(r.witness_kd),
           Cell(r.ikd_threshold), Cell(static_cast<std::uint64_t>(ext.size_g())),
           Cell(static_cast<std::uint64_t>(ext.size_h())), Cell(nu_ok), Cell(p_ok), Cell(r.fiber_iso_ok),
           Cell(r.height_ok()), Cell(r.ikd_ok()), Cell(pass)});
  }
  return finish(c, t, c.seed, out, invariants ? kExitOk : kExitVerification);
}

int cmd_expand(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const Loaded l = resolve(c, "reduced_two_fan");
  const ExpansionSpec spec{l.diagram, need_fan(l), c.m};
  const Diagram e = expand_diagram(spec);
  const auto& cat = l.diagram.category();
  std::vector<char> upper(cat.size(), 0);
  for (std::size_t g : cat.ancestors(spec.fan.u)) upper[g] = 1;
  ResultTable t;
  t.columns = {"object", "upper_cone", "entropy_before", "entropy_after", "shift"};
  for (std::size_t i = 0; i < cat.size(); ++i)
    t.add({Cell(cat.id(i)), Cell(upper[i] != 0), Cell(l.diagram.space(i).entropy()), Cell(e.space(i).entropy()),
           Cell(e.space(i).entropy() - l.diagram.space(i).entropy())});
  int code = kExitOk;
  try {
    verify_expansion(l.diagram, e, spec);
  } catch (const Error& ex) {
    if (ex.code() != ErrorCode::kVerificationFailed) throw;
    err << "error: " << ex.what() << "\n";
    code = kExitVerification;
  }
  return finish(c, t, std::nullopt, out, code);
}

ResultTable tail_table() {
  ResultTable t;
  t.columns = {"kind", "N", "rho", "t", "trials", "hits", "empirical", "bound", "slack", "pass"};
  return t;
}

void add_tail_rows(ResultTable& t, const std::vector<MonteCarloResult>& rs, bool& all_pass) {
  for (const auto& r : rs) {
    all_pass = all_pass && r.pass;
    t.add({Cell(std::string(tail_kind_name(r.kind))), Cell(r.n), Cell(r.rho), Cell(r.t),
           Cell(static_cast<std::uint64_t>(r.trials)), Cell(static_cast<std::uint64_t>(r.hits)), Cell(r.empirical),
           Cell(r.bound), Cell(r.slack), Cell(r.pass)});
  }
}

int cmd_tails(const ExperimentConfig& c, std::ostream& out) {
  ResultTable t = tail_table();
  bool all_pass = true;
  if (c.grid == "default") {
    const std::vector<std::uint64_t> ns = c.n ? std::vector<std::uint64_t>{*c.n} : std::vector<std::uint64_t>{50, 200, 1000};
    const std::vector<Rational> rhos = {Rational(1, 2), Rational(1, 4), Rational(1, 8)};
    std::uint64_t cell = 0;
    for (auto n : ns)
      for (const auto& rho : rhos) {
        const auto rs = monte_carlo_binomial(n, rho, {0.3, 0.5, 0.8}, {0.5, 1.0, 1.5}, c.trials,
                                             subseed(c.seed, cell++), c.threads);
        add_tail_rows(t, rs, all_pass);
      }
  } else if (c.grid == "fixture") {
    ExperimentConfig fc = c;
    if (fc.fixture.empty() && fc.input.empty()) {
      fc.fixture = "coord";
      fc.l = 7;
      fc.x_coords = "1..6";
      fc.u_coords = "6..7";
    }
    const Loaded l = resolve(fc);
    const ExtendedFan ext = extend_admissible_fan(l.diagram, need_fan(l));
    const auto rs = monte_carlo_contraction(ext, c.n.value_or(200), c.t.value_or(0.5), c.trials, c.seed, c.threads);
    add_tail_rows(t, rs, all_pass);
  } else {
    throw Error(ErrorCode::kConfig, "unknown grid '" + c.grid + "' (default | fixture)");
  }
  return finish(c, t, c.seed, out, all_pass ? kExitOk : kExitVerification);
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (int v : parse_index_list(s)) {
    if (v <= 0) throw Error(ErrorCode::kConfig, "N values must be positive");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

int cmd_sweep(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  ResultTable t;
  if (c.kind == "schedule") {
    const TropicalBoundParams p{c.c, c.d_phi, c.size_g, c.log_card};
    const std::uint64_t best = minimal_n_for(p, c.target);
    const std::uint64_t threshold = epsilon_monotone_threshold(p);
    std::set<std::uint64_t> ns;
    for (int k = 1; k <= 40; ++k) ns.insert(std::uint64_t{1} << k);
    ns.insert(threshold);
    ns.insert(best);
    if (best > 2) ns.insert(best - 1);
    t.columns = {"n", "marker", "eps_conditional", "eps_x", "eps_height", "eps_max", "aep_rate", "phi_over_n",
                 "phi_comparison"};
    for (auto n : ns) {
      const double nd = static_cast<double>(n);
      const Epsilons e = contraction_epsilons(p, nd);
      std::string marker = n == best ? "minimal_n" : n == threshold ? "monotone_from" : "";
      t.add({Cell(n), Cell(marker), Cell(e.conditional), Cell(e.x), Cell(e.height), Cell(e.max()),
             Cell(aep_rate(p, nd)), Cell(phi_defect(p, nd) / nd), Cell(phi_comparison_holds(nd))});
    }
    return finish(c, t, std::nullopt, out, kExitOk);
  }
  if (c.kind != "contraction") throw Error(ErrorCode::kConfig, "unknown sweep kind '" + c.kind + "'");
  const Loaded l = resolve(c, "two_fan");
  const ExtendedFan ext = extend_admissible_fan(l.diagram, need_fan(l));
  t.columns = {"N", "t", "runs", "mean_two_alpha", "max_two_alpha", "max_height", "coverage_runs", "height_ok_runs",
               "ikd_ok_runs", "fiber_iso_runs"};
  ContractOptions opts;
  opts.y_prime_cap = 0;
  bool invariants = true;
  for (auto n : parse_u64_list(c.n_list)) {
    ExperimentConfig nc = c;
    nc.n = n;
    const ContractionParams p = contraction_params(nc, ext, err);
    const auto runs = contract_many(ext, p, c.seeds, c.threads, opts);
    double sum = 0, mx = 0, mh = -1e300;
    std::uint64_t cov = 0, hok = 0, iok = 0, fok = 0;
    for (const auto& r : runs) {
      const double ta = to_double(r.alpha * 2);
      sum += ta;
      mx = std::max(mx, ta);
      mh = std::max(mh, r.height);
      cov += r.coverage;
      hok += r.height_ok();
      iok += r.ikd_ok();
      fok += r.fiber_iso_ok;
      invariants = invariants && r.sum_nu_ok(ext) && r.sum_p_ok() && r.fiber_iso_ok;
    }
    t.add({Cell(n), Cell(p.t), Cell(static_cast<std::uint64_t>(runs.size())),
           Cell(sum / static_cast<double>(runs.size())), Cell(mx), Cell(mh), Cell(cov), Cell(hok), Cell(iok),
           Cell(fok)});
  }
  return finish(c, t, c.seed, out, invariants ? kExitOk : kExitVerification);
}

double conditional_entropy(const Diagram& d, std::size_t a, std::size_t b) {
  return joint_space(d, a, b).space.entropy() - d.space(b).entropy();
}

int cmd_demo(const ExperimentConfig& c, std::ostream& out) {
  ResultTable t = key_value();
  bool ok = true;

  // Lambda_3: contract the arrow from the initial object to X.
  {
    const Fixture f = lambda3_fixture();
    const auto& cat = f.diagram.category();
    const FanClassification cls = classify_fan(f.diagram, f.fan);
    kv(t, "lambda3.fan_admissible", cls.admissible);
    const ExtendedFan ext = extend_admissible_fan(f.diagram, f.fan);
    kv(t, "lambda3.size_H", static_cast<std::uint64_t>(ext.size_h()));
    kv(t, "lambda3.rho", ext.rho);
    ContractionParams p = default_parameters(ext, c.seed);
    kv(t, "lambda3.N", p.n);
    kv(t, "lambda3.t", p.t);
    const ContractionRun run = contract_once(ext, p);
    kv(t, "lambda3.two_alpha", run.alpha * 2);
    kv(t, "lambda3.coverage", run.coverage);
    kv(t, "lambda3.height", run.height);
    kv(t, "lambda3.fiber_iso_ok", run.fiber_iso_ok);
    ok = ok && run.fiber_iso_ok;
    const Diagram z = recover_collapsed_diagram(ext, run);
    kv(t, "lambda3.recovered_objects", static_cast<std::uint64_t>(z.size()));
    const std::size_t x = f.fan.x;
    const std::size_t u = f.fan.u;
    kv(t, "lambda3.[X|U]", conditional_entropy(f.diagram, x, u));
    kv(t, "lambda3.[X'|V]", conditional_entropy(z, x, u));
    kv(t, "lambda3.[Z'|X']", z.initial_space().entropy() - z.space(x).entropy());
    for (std::size_t i = 0; i < cat.size(); ++i)
      kv(t, "lambda3.entropy:" + cat.id(i), z.space(i).entropy());
  }

  // Two-fan: the contracted fan with the original Z and U kept alongside.
  {
    const Fixture f = named_fixture("two_fan");
    const ExtendedFan ext = extend_admissible_fan(f.diagram, f.fan);
    const ContractionRun run = contract_once(ext, default_parameters(ext, c.seed));
    const Diagram z = recover_collapsed_diagram(ext, run);
    const Diagram& d = f.diagram;
    const double mutual = d.space(f.fan.x).entropy() + d.space(f.fan.u).entropy() - d.initial_space().entropy();
    kv(t, "two_fan.[X:U]", mutual);
    kv(t, "two_fan.[X|U]", conditional_entropy(d, f.fan.x, f.fan.u));
    kv(t, "two_fan.[X'|V]", conditional_entropy(z, f.fan.x, f.fan.u));
    kv(t, "two_fan.[V]", z.space(f.fan.u).entropy());
    kv(t, "two_fan.[Z'|X']", z.initial_space().entropy() - z.space(f.fan.x).entropy());
    ok = ok && run.fiber_iso_ok;
  }

  // Expansion of a reduced Lambda_3 fan.
  {
    const Fixture f = lambda3_reduced_fixture();
    const ExpansionSpec spec{f.diagram, f.fan, c.m};
    const Diagram e = expand_diagram(spec);
    const ExpansionReport r = verify_expansion(f.diagram, e, spec);
    kv(t, "expansion.m", static_cast<std::uint64_t>(c.m));
    kv(t, "expansion.[Z|X]", r.z_given_x);
    kv(t, "expansion.recovered", r.recovered);
  }
  return finish(c, t, c.seed, out, ok ? kExitOk : kExitVerification);
}

template <class T>
void take(const Json& j, T& field) {
  field = j.get<T>();
}

}  // namespace

void apply_config_file(ExperimentConfig& c, const std::string& path) {
  const Json j = read_json_file(path);
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") take(v, c.command);
      else if (key == "input") take(v, c.input);
      else if (key == "input2") take(v, c.input2);
      else if (key == "fixture") take(v, c.fixture);
      else if (key == "output") take(v, c.output);
      else if (key == "format") take(v, c.format);
      else if (key == "l") take(v, c.l);
      else if (key == "I") take(v, c.x_coords);
      else if (key == "J") take(v, c.u_coords);
      else if (key == "x") take(v, c.x_obj);
      else if (key == "z") take(v, c.z_obj);
      else if (key == "u") take(v, c.u_obj);
      else if (key == "seed") take(v, c.seed);
      else if (key == "seeds") take(v, c.seeds);
      else if (key == "N") c.n = v.get<std::uint64_t>();
      else if (key == "t") c.t = v.get<double>();
      else if (key == "Ns") take(v, c.n_list);
      else if (key == "m") take(v, c.m);
      else if (key == "trials") take(v, c.trials);
      else if (key == "threads") take(v, c.threads);
      else if (key == "grid") take(v, c.grid);
      else if (key == "kind") take(v, c.kind);
      else if (key == "C") take(v, c.c);
      else if (key == "D_phi") take(v, c.d_phi);
      else if (key == "size_G") take(v, c.size_g);
      else if (key == "log_card") take(v, c.log_card);
      else if (key == "target") take(v, c.target);
      else throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, path + ": " + e.what());
  }
}

int run_config(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.format != "csv" && c.format != "json") throw Error(ErrorCode::kConfig, "format must be csv or json");
    if (c.command == "validate") return cmd_validate(c, out);
    if (c.command == "entropy") return cmd_entropy(c, out);
    if (c.command == "distance") return cmd_distance(c, out);
    if (c.command == "contract") return cmd_contract(c, out, err);
    if (c.command == "expand") return cmd_expand(c, out, err);
    if (c.command == "tails") return cmd_tails(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out, err);
    if (c.command == "demo") return cmd_demo(c, out);
    throw Error(ErrorCode::kConfig, "unknown command '" + c.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kVerificationFailed ? kExitVerification : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  std::string config_path;
  for (int k = 1; k + 1 < argc; ++k)
    if (std::string_view(argv[k]) == "--config") config_path = argv[k + 1];
  if (!config_path.empty()) {
    try {
      apply_config_file(c, config_path);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kExitInput;
    }
  }

  CLI::App app{"Diagrams of finite probability spaces: entropy distances, arrow contraction and expansion."};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string ignored_config;
  std::uint64_t n_value = 0;
  double t_value = 0;
  app.add_option("--config", ignored_config, "JSON file with option values; flags override it");
  app.add_option("--input", c.input, "diagram JSON, or uniform:<n>, lambda:<a>, dirac");
  app.add_option("--input2", c.input2, "second diagram for distance");
  app.add_option("--fixture", c.fixture,
                 "two_fan, reduced_two_fan, coord, lambda3, lambda3_reduced, not_fan_generated, broken_diamond");
  app.add_option("--l", c.l, "coordinate count for the coord fixture");
  app.add_option("--I", c.x_coords, "coordinates of x, e.g. 1..15");
  app.add_option("--J", c.u_coords, "coordinates of u, e.g. 14..17");
  app.add_option("--x", c.x_obj, "fan foot x of an input diagram");
  app.add_option("--z", c.z_obj, "fan top of an input diagram (default: initial object)");
  app.add_option("--u", c.u_obj, "fan foot u of an input diagram");
  app.add_option("--seed", c.seed, "experiment seed");
  app.add_option("--seeds", c.seeds, "number of runs");
  auto* n_opt = app.add_option("--N", n_value, "sample count (default ceil(ln^3|X0| / rho))");
  auto* t_opt = app.add_option("--t", t_value, "deviation parameter (default 10 / ln|X0|)");
  app.add_option("--Ns", c.n_list, "sample counts for sweep, e.g. 100,200,400");
  app.add_option("--m", c.m, "size of the uniform space used by expand");
  app.add_option("--trials", c.trials, "Monte Carlo trials");
  app.add_option("--threads", c.threads, "worker threads (results do not depend on it)");
  app.add_option("--grid", c.grid, "tails grid: default | fixture");
  app.add_option("--kind", c.kind, "sweep kind: contraction | schedule");
  app.add_option("--C", c.c, "rate constant for the schedule");
  app.add_option("--D_phi", c.d_phi, "defect constant for the schedule");
  app.add_option("--size_G", c.size_g, "object count for the schedule");
  app.add_option("--log_card", c.log_card, "ln|X0(n)| / n for the schedule");
  app.add_option("--target", c.target, "epsilon target for the schedule");
  app.add_option("--format", c.format, "csv | json");
  app.add_option("--output", c.output, "output file (default: standard output)");

  const char* commands[][2] = {{"validate", "check a diagram and report its structure"},
                               {"entropy", "entropy of every space"},
                               {"distance", "bounds on the intrinsic entropy distance"},
                               {"contract", "sampled arrow contraction runs"},
                               {"expand", "arrow expansion with verification"},
                               {"tails", "Monte Carlo check of the tail bounds"},
                               {"sweep", "contraction over several N, or the epsilon schedule"},
                               {"demo", "Lambda_3 and two-fan walkthrough"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) subs.push_back(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  for (auto* s : subs)
    if (s->parsed()) c.command = s->get_name();
  if (n_opt->count()) c.n = n_value;
  if (t_opt->count()) c.t = t_value;
  if (c.command.empty()) {
    err << app.help();
    return kExitInput;
  }
  return run_config(c, out, err);
}

}  // namespace arrowc

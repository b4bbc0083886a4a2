#include "arrowc/expansion.hpp"

#include <cmath>
#include <unordered_map>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

std::vector<char> upper_cone(const ExpansionSpec& spec) {
  const auto& cat = spec.base.category();
  std::vector<char> in(cat.size(), 0);
  for (std::size_t g : cat.ancestors(spec.fan.u)) {
    if (cat.reaches(spec.fan.x, g))
      throw Error(ErrorCode::kBadParam, "object '" + cat.id(g) + "' lies in both cones");
    in[g] = 1;
  }
  return in;
}

// "(v,w)" -> "v"; w labels never contain commas.
std::string strip_w(const Atom& label) {
  const auto comma = label.rfind(',');
  if (label.size() < 3 || label.front() != '(' || label.back() != ')' || comma == Atom::npos)
    throw Error(ErrorCode::kParse, "atom '" + label + "' is not an expanded pair");
  return label.substr(1, comma - 1);
}

[[noreturn]] void fail(const std::string& clause) { throw Error(ErrorCode::kVerificationFailed, clause); }

}  // namespace

Diagram expand_diagram(const ExpansionSpec& spec) {
  if (spec.m == 0) throw Error(ErrorCode::kBadParam, "m must be at least 1");
  if (!classify_fan(spec.base, spec.fan).reduced) throw Error(ErrorCode::kNotReduced, "fan is not reduced admissible");
  const auto in = upper_cone(spec);
  const Diagram& d = spec.base;
  const ProbSpace w = uniform_space(spec.m);
  const ProbSpace base = tensor_spaces(d.initial_space(), w);
  std::vector<std::vector<std::size_t>> classes(d.size(), std::vector<std::size_t>(base.size()));
  std::vector<std::vector<Atom>> labels(d.size());
  for (std::size_t g = 0; g < d.size(); ++g) {
    const ProbSpace& v = d.space(g);
    if (in[g]) {
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = 0; b < spec.m; ++b) labels[g].push_back(pair_label(v.atom(a), w.atom(b)));
    } else {
      labels[g] = v.atoms();
    }
    for (std::size_t p = 0; p < base.size(); ++p) {
      const std::size_t z = d.from_initial(g)[p / spec.m];
      classes[g][p] = in[g] ? z * spec.m + p % spec.m : z;
    }
  }
  return Diagram::from_variables(d.category(), base, classes, labels)
      .with_homogeneity_certificate(d.homogeneity_certified());
}

Diagram marginalize_expansion(const Diagram& expanded, const ExpansionSpec& spec) {
  const auto in = upper_cone(spec);
  const ProbSpace& z0 = expanded.initial_space();
  std::vector<std::vector<std::size_t>> classes(expanded.size(), std::vector<std::size_t>(z0.size()));
  std::vector<std::vector<Atom>> labels(expanded.size());
  for (std::size_t g = 0; g < expanded.size(); ++g) {
    const ProbSpace& v = expanded.space(g);
    std::vector<std::size_t> cls(v.size());
    if (in[g]) {
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t a = 0; a < v.size(); ++a) {
        auto [it, inserted] = index.emplace(strip_w(v.atom(a)), labels[g].size());
        if (inserted) labels[g].push_back(it->first);
        cls[a] = it->second;
      }
    } else {
      labels[g] = v.atoms();
      for (std::size_t a = 0; a < v.size(); ++a) cls[a] = a;
    }
    for (std::size_t p = 0; p < z0.size(); ++p) classes[g][p] = cls[expanded.from_initial(g)[p]];
  }
  return Diagram::from_variables(expanded.category(), z0, classes, labels)
      .with_homogeneity_certificate(expanded.homogeneity_certified());
}

ExpansionReport verify_expansion(const Diagram& original, const Diagram& expanded, const ExpansionSpec& spec) {
  ExpansionReport r;
  if (!(original.category() == expanded.category())) fail("shape: expanded diagram has a different shape");
  const auto in = upper_cone(spec);
  const double ln_m = std::log(static_cast<double>(spec.m));
  const std::size_t x = spec.fan.x;
  const std::size_t z = spec.fan.z;
  const std::size_t u = spec.fan.u;

  r.z_given_x = expanded.space(z).entropy() - expanded.space(x).entropy();
  r.expected = ln_m + original.space(z).entropy() - original.space(x).entropy();
  if (std::abs(r.z_given_x - r.expected) > 1e-9)
    fail("[Z|X]: got " + std::to_string(r.z_given_x) + ", expected " + std::to_string(r.expected));
  r.clauses.push_back("z_given_x");

  for (std::size_t g = 0; g < original.size(); ++g) {
    const double shift = expanded.space(g).entropy() - original.space(g).entropy();
    const double err = std::abs(shift - (in[g] ? ln_m : 0.0));
    r.max_shift_error = std::max(r.max_shift_error, err);
    if (err > 1e-12) fail("entropy shift at '" + original.category().id(g) + "'");
  }
  r.clauses.push_back("entropy_shift");

  const auto lower = restrict_category(original.category(), original.category().descendants(x));
  const ProbSpace& uo = original.space(u);
  const ProbSpace& ue = expanded.space(u);
  // Every atom when small, otherwise the first 16 expanded atoms.
  const std::size_t limit = ue.size() <= 64 ? ue.size() : 16;
  for (std::size_t k = 0; k < limit; ++k) {
    const Atom& label = ue.atom(k);
    const std::string base_label = strip_w(label);
    const Diagram left = sub_diagram(condition_diagram(original, u, uo.index_of(base_label)), lower);
    const Diagram right = sub_diagram(condition_diagram(expanded, u, k), lower);
    if (!diagram_isomorphic(left, right)) fail("conditioned X side differs at '" + label + "'");
    ++r.conditioned_checked;
  }
  r.clauses.push_back("conditioned_iso");

  const FanClassification cls = classify_fan(expanded, spec.fan);
  r.admissible = cls.admissible;
  r.reduced = cls.reduced;
  if (!cls.admissible) fail("expanded fan is not admissible");
  if (spec.m >= 2 && cls.reduced) fail("expanded fan is still reduced");
  if (spec.m == 1 && !cls.reduced) fail("expansion by a point changed reducedness");
  r.clauses.push_back("admissible");

  r.recovered = same_labeled(marginalize_expansion(expanded, spec), original);
  if (!r.recovered) fail("marginalizing W does not recover the original");
  r.clauses.push_back("recovered");
  return r;
}

}  // namespace arrowc

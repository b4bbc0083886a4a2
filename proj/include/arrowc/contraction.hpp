#pragma once

// Randomized arrow contraction of an admissible fan in a homogeneous diagram.
//
// Only the slices over the sampled tuple u_bar are ever built; the product
// spaces over U^N stay virtual.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "arrowc/diagrams.hpp"
#include "arrowc/rng.hpp"

namespace arrowc {

struct ExtendedFan {
  Diagram source;
  FanIndices fan;
  SubCategory h;     // descendants of the fan's x object
  Diagram xdiag;     // source restricted to h
  Diagram ydiag;     // Y_k = joint(X_k, U) over h
  ProbSpace u_space;
  std::vector<std::vector<std::size_t>> y_to_x;  // per h object
  std::vector<std::vector<std::size_t>> y_to_u;
  /// Initial atoms of Y as (X0 atom, U atom).
  std::vector<std::pair<std::size_t, std::size_t>> y0_pairs;
  /// X0 atoms compatible with each atom of U.
  std::vector<std::vector<std::size_t>> fiber_of_u;
  Rational rho;      // |X0|u| / |X0|, the same for every u

  std::size_t card_x0() const { return xdiag.initial_space().size(); }
  std::size_t size_g() const { return source.size(); }
  std::size_t size_h() const { return xdiag.size(); }

  /// X|u over h, computed once per atom.
  Diagram conditioned_x(std::size_t u_atom) const;

  struct Cache {
    std::mutex mutex;
    std::map<std::size_t, Diagram> by_u;
  };
  std::shared_ptr<Cache> cache = std::make_shared<Cache>();
};

/// Throws kNotAdmissible, kNotHomogeneous (also when the fibers over U are
/// not uniform of a common size) and kTooLarge from the analyzer.
ExtendedFan extend_admissible_fan(const Diagram& d, const FanIndices& fi);

struct ContractionParams {
  std::uint64_t n = 0;
  double t = 0.0;
  Rational rho;
  std::uint64_t seed = 0;
  bool regime_warning = false;  // t > 1
};

/// N = ceil(ln^3|X0| / rho), t = 10 / ln|X0|. Throws kBadParam for |X0| < 2.
ContractionParams default_parameters(const ExtendedFan& ext, std::uint64_t seed);

struct ContractOptions {
  bool check_fibers = true;
  /// Build X' (always cheap) and Y' when its initial space has at most this
  /// many atoms.
  std::size_t y_prime_cap = 200'000;
};

struct ContractionRun {
  std::uint64_t seed = 0;             // seed of this run's generator
  std::vector<std::size_t> u_bar;     // U atom per sample index
  std::vector<std::uint64_t> counts;  // N(x) per X0 atom
  std::uint64_t total = 0;            // sum of N(x)
  Rational sum_nu;                    // sum of N(x) / N
  Rational sum_p;
  Rational alpha;
  double height = 0.0;
  double height_alt = 0.0;            // ln(total) - H(X'0)
  double height_threshold = 0.0;      // ln(N rho) + t
  double height_loglog = 0.0;         // 4 ln ln|X0|
  bool coverage = false;
  double ikd_upper = 0.0;
  double witness_kd = 0.0;
  double ikd_threshold = 0.0;         // 20 |H|
  bool fiber_iso_ok = true;
  std::string fiber_failure;
  std::optional<Diagram> x_prime;     // over h
  std::optional<Diagram> y_prime;     // over h, atoms (x, n)
  ProbSpace v_n;                      // uniform on 1..N

  bool sum_nu_ok(const ExtendedFan& ext) const { return sum_nu == ext.rho * static_cast<unsigned long>(ext.card_x0()); }
  bool sum_p_ok() const { return sum_p == 1; }
  bool height_ok() const { return height <= height_threshold && height <= height_loglog; }
  bool ikd_ok() const { return ikd_upper <= ikd_threshold; }
};

ContractionRun contract_once(const ExtendedFan& ext, const ContractionParams& params,
                             const ContractOptions& options = {});

/// Runs k uses seed subseed(params.seed, k); results are in run order.
std::vector<ContractionRun> contract_many(const ExtendedFan& ext, const ContractionParams& params, std::size_t runs,
                                          std::size_t threads, const ContractOptions& options = {});

/// Diagram of the original shape: descendants of x carry X', each ancestor g
/// of u carries the joint of X' over descendants of g in h with V_N.
/// Requires run.y_prime. Throws kNotFanGenerated.
Diagram recover_collapsed_diagram(const ExtendedFan& ext, const ContractionRun& run);

enum class TailKind { kBinomialTwoSided, kBinomialEntropy, kTotalVar, kIkd, kHeight };

std::string_view tail_kind_name(TailKind kind);

struct TailExtra {
  std::size_t card_x0 = 1;
  std::size_t size_g = 1;
};

struct TailBound {
  double bound = 0.0;
  double reported = 0.0;                 // clipped to 1
  std::optional<double> threshold;       // event threshold where applicable
};

/// Analytic right-hand sides. Throws kRangeError outside t in [0, 1]
/// (two-sided, total variation, ikd) or [0, 2] (entropy, height).
TailBound tail_bound(TailKind kind, std::uint64_t n, const Rational& rho, double t, const TailExtra& extra = {});

struct MonteCarloResult {
  TailKind kind;
  std::uint64_t n = 0;
  Rational rho;
  double t = 0.0;
  std::size_t trials = 0;
  std::size_t hits = 0;
  double empirical = 0.0;
  double bound = 0.0;    // clipped
  double slack = 0.0;    // 3 sqrt(e (1 - e) / trials)
  bool pass = false;
};

/// One binomial sample per trial, shared by every t of that (N, rho) cell.
std::vector<MonteCarloResult> monte_carlo_binomial(std::uint64_t n, const Rational& rho,
                                                   const std::vector<double>& ts_two_sided,
                                                   const std::vector<double>& ts_entropy, std::size_t trials,
                                                   std::uint64_t seed, std::size_t threads);

/// Total variation, ikd and height tails of contraction runs.
std::vector<MonteCarloResult> monte_carlo_contraction(const ExtendedFan& ext, std::uint64_t n, double t,
                                                      std::size_t trials, std::uint64_t seed, std::size_t threads);

}  // namespace arrowc

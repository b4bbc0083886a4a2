#pragma once

// Experiment runner behind the arrowc executable.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace arrowc {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitVerification = 2;

struct ExperimentConfig {
  std::string command;
  std::string input;
  std::string input2;
  std::string fixture;
  std::string output;  // empty: standard output
  std::string format = "csv";
  int l = 0;
  std::string x_coords;  // --I
  std::string u_coords;  // --J
  std::string x_obj, z_obj, u_obj;  // fan of an input diagram
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  std::optional<std::uint64_t> n;
  std::optional<double> t;
  std::string n_list = "100,200,400,800";
  unsigned m = 2;
  std::size_t trials = 10000;
  std::size_t threads = 1;
  std::string grid = "default";
  std::string kind = "contraction";
  double c = 1.0;
  double d_phi = 1.0;
  std::size_t size_g = 3;
  double log_card = 1.0;
  double target = 0.1;
};

/// Applies the keys of a JSON config file; unknown keys throw kConfig.
void apply_config_file(ExperimentConfig& config, const std::string& path);

/// Runs one subcommand, writing results to config.output or `out`.
int run_config(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses flags (and --config) and dispatches.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace arrowc

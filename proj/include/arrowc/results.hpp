#pragma once

// Tabular experiment output as CSV or JSON with a stable column order.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arrowc/rational.hpp"

namespace arrowc {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Rationals print as decimals in CSV and as "num/den" in JSON.
using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool, Rational>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws kBadParam when the width does not match.
  void add(std::vector<Cell> row);
};

struct EmitMeta {
  std::string command;
  std::optional<std::uint64_t> seed;
};

/// Shortest round-trip decimal.
std::string format_double(double v);

/// First line "# arrowc <version> command=<c> seed=<s> rng=<protocol>".
std::string format_csv(const ResultTable& table, const EmitMeta& meta);
std::string format_json(const ResultTable& table, const EmitMeta& meta);

/// format is "csv" or "json"; throws kConfig otherwise.
std::string format_results(const ResultTable& table, std::string_view format, const EmitMeta& meta);

}  // namespace arrowc

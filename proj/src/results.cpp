#include "arrowc/results.hpp"

#include <charconv>
#include <cmath>

#include "arrowc/error.hpp"
#include "arrowc/rng.hpp"
#include "arrowc/serialization.hpp"

namespace arrowc {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return csv_escape(s); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const Rational& q) const { return format_double(to_double(q)); }
  };
  return std::visit(Visitor{}, c);
}

Json json_cell(const Cell& c) {
  struct Visitor {
    Json operator()(const std::string& s) const { return s; }
    Json operator()(double v) const { return std::isfinite(v) ? Json(v) : Json(format_double(v)); }
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(std::uint64_t v) const { return v; }
    Json operator()(bool v) const { return v; }
    Json operator()(const Rational& q) const { return format_rational(q); }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

void ResultTable::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw Error(ErrorCode::kBadParam, "row has " + std::to_string(row.size()) + " cells, expected " +
                                          std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string format_csv(const ResultTable& table, const EmitMeta& meta) {
  std::string out = "# arrowc " + std::string(kToolVersion) + " command=" + meta.command;
  out += " seed=" + (meta.seed ? std::to_string(*meta.seed) : std::string("none"));
  out += " rng=" + std::string(kRngProtocol) + "\n";
  for (std::size_t k = 0; k < table.columns.size(); ++k) out += (k ? "," : "") + csv_escape(table.columns[k]);
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_cell(row[k]);
    out += "\n";
  }
  return out;
}

std::string format_json(const ResultTable& table, const EmitMeta& meta) {
  Json j;
  j["tool"] = "arrowc";
  j["version"] = kToolVersion;
  j["command"] = meta.command;
  j["seed"] = meta.seed ? Json(*meta.seed) : Json(nullptr);
  j["rng"] = kRngProtocol;
  j["columns"] = table.columns;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::object();
    for (std::size_t k = 0; k < row.size(); ++k) r[table.columns[k]] = json_cell(row[k]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string format_results(const ResultTable& table, std::string_view format, const EmitMeta& meta) {
  if (format == "csv") return format_csv(table, meta);
  if (format == "json") return format_json(table, meta);
  throw Error(ErrorCode::kConfig, "unknown format '" + std::string(format) + "'");
}

}  // namespace arrowc

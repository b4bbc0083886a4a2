#pragma once

// JSON interchange for categories, spaces and diagrams.
//
//   {"objects": [...], "covers": [["i","j"], ...],
//    "spaces": {"i": {"atoms": [...], "weights": ["1/4", ...]}, ...},
//    "maps": {"i->j": {"atom": "atom", ...}, ...}}

#include <string>

#include "json.hpp"

#include "arrowc/diagrams.hpp"

namespace arrowc {

using Json = nlohmann::ordered_json;

Json category_to_json(const IndexingCategory& cat);
IndexingCategory category_from_json(const Json& j);

Json space_to_json(const ProbSpace& x);
ProbSpace space_from_json(const Json& j);

/// Writes the prime maps only.
Json diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const Json& j);

/// Parse errors surface as kParse, filesystem errors as kIo.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Diagram load_diagram(const std::string& path);

}  // namespace arrowc

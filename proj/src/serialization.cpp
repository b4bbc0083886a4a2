#include "arrowc/serialization.hpp"

#include <fstream>
#include <sstream>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kParse, std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<std::string> strings(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw Error(ErrorCode::kParse, std::string(what) + " entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Json category_to_json(const IndexingCategory& cat) {
  Json j;
  j["objects"] = cat.objects();
  Json covers = Json::array();
  for (const auto& [a, b] : cat.prime_morphisms()) covers.push_back({cat.id(a), cat.id(b)});
  j["covers"] = std::move(covers);
  return j;
}

IndexingCategory category_from_json(const Json& j) {
  auto objects = strings(member(j, "objects"), "objects");
  std::vector<std::pair<ObjectId, ObjectId>> covers;
  const Json& cs = j.contains("covers") ? j.at("covers") : Json::array();
  if (!cs.is_array()) throw Error(ErrorCode::kParse, "covers must be an array");
  for (const auto& c : cs) {
    auto pair = strings(c, "cover");
    if (pair.size() != 2) throw Error(ErrorCode::kParse, "a cover is a pair of object ids");
    covers.emplace_back(pair[0], pair[1]);
  }
  return IndexingCategory::build(std::move(objects), covers);
}

Json space_to_json(const ProbSpace& x) {
  Json j;
  j["atoms"] = x.atoms();
  Json w = Json::array();
  for (const auto& q : x.weights()) w.push_back(format_rational(q));
  j["weights"] = std::move(w);
  return j;
}

ProbSpace space_from_json(const Json& j) {
  auto atoms = strings(member(j, "atoms"), "atoms");
  const Json& wj = member(j, "weights");
  if (!wj.is_array()) throw Error(ErrorCode::kParse, "weights must be an array");
  std::vector<Rational> weights;
  for (const auto& w : wj) {
    if (w.is_string()) weights.push_back(parse_rational(w.get<std::string>()));
    else if (w.is_number_integer()) weights.emplace_back(w.get<long>());
    else throw Error(ErrorCode::kParse, "weights must be rational strings");
  }
  return ProbSpace::make(std::move(atoms), std::move(weights));
}

Json diagram_to_json(const Diagram& d) {
  const auto& cat = d.category();
  Json j = category_to_json(cat);
  Json spaces = Json::object();
  for (std::size_t i = 0; i < d.size(); ++i) spaces[cat.id(i)] = space_to_json(d.space(i));
  j["spaces"] = std::move(spaces);
  Json maps = Json::object();
  for (const auto& [a, b] : cat.prime_morphisms()) {
    Json m = Json::object();
    const auto& table = d.prime_map(a, b);
    for (std::size_t k = 0; k < table.size(); ++k) m[d.space(a).atom(k)] = d.space(b).atom(table[k]);
    maps[cat.id(a) + "->" + cat.id(b)] = std::move(m);
  }
  j["maps"] = std::move(maps);
  return j;
}

Diagram diagram_from_json(const Json& j) {
  IndexingCategory cat = category_from_json(j);
  std::map<ObjectId, ProbSpace> spaces;
  const Json& sj = member(j, "spaces");
  if (!sj.is_object()) throw Error(ErrorCode::kParse, "spaces must be an object");
  for (const auto& [id, s] : sj.items()) spaces.emplace(id, space_from_json(s));
  std::map<std::pair<ObjectId, ObjectId>, LabeledMap> maps;
  const Json& mj = j.contains("maps") ? j.at("maps") : Json::object();
  if (!mj.is_object()) throw Error(ErrorCode::kParse, "maps must be an object");
  for (const auto& [key, m] : mj.items()) {
    const auto arrow = key.find("->");
    if (arrow == std::string::npos) throw Error(ErrorCode::kParse, "map key '" + key + "' is not of the form i->j");
    if (!m.is_object()) throw Error(ErrorCode::kParse, "map '" + key + "' must be an object");
    LabeledMap lm;
    for (const auto& [a, b] : m.items()) {
      if (!b.is_string()) throw Error(ErrorCode::kParse, "map '" + key + "' values must be atom labels");
      lm.emplace(a, b.get<std::string>());
    }
    maps.emplace(std::make_pair(key.substr(0, arrow), key.substr(arrow + 2)), std::move(lm));
  }
  return Diagram::make_labeled(std::move(cat), spaces, maps);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

Diagram load_diagram(const std::string& path) {
  try {
    return diagram_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

}  // namespace arrowc

#include "arrowc/fixtures.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "arrowc/error.hpp"

namespace arrowc {

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::kParse, "bad index '" + std::string(s) + "'");
  return v;
}

std::vector<int> range(int a, int b) {
  std::vector<int> v(static_cast<std::size_t>(b - a + 1));
  std::iota(v.begin(), v.end(), a);
  return v;
}

std::vector<int> unite(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Fixture lambda3_with(int l, const std::vector<int>& s1, const std::vector<int>& s2, const std::vector<int>& s3,
                     std::string name) {
  const IndexingCategory cat = standard_category(StandardKind::kFullLambda, 3);
  const std::vector<int>* singles[] = {&s1, &s2, &s3};
  std::map<ObjectId, std::vector<int>> coords;
  for (const auto& id : cat.objects()) {
    std::vector<int> set;
    for (std::size_t pos = 0; pos < id.size(); pos += 2) set = unite(set, *singles[id[pos] - '1']);
    coords.emplace(id, std::move(set));
  }
  Fixture f{std::move(name), coordinate_diagram(cat, coords, l), {}};
  f.fan = FanIndices::from_ids(cat, "1,2", "1,2,3", "3");
  return f;
}

}  // namespace

std::vector<int> parse_index_list(std::string_view text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string_view part = text.substr(start, end - start);
    if (part.empty()) throw Error(ErrorCode::kParse, "empty entry in index list '" + std::string(text) + "'");
    const std::size_t dots = part.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_int(part));
    } else {
      const int a = parse_int(part.substr(0, dots));
      const int b = parse_int(part.substr(dots + 2));
      if (b < a) throw Error(ErrorCode::kParse, "empty range '" + std::string(part) + "'");
      for (int k = a; k <= b; ++k) out.push_back(k);
    }
    start = end + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Fixture coordinate_two_fan(int l, const std::vector<int>& x_coords, const std::vector<int>& u_coords) {
  const IndexingCategory cat = standard_category(StandardKind::kTwoFan);
  Fixture f{"coord", coordinate_diagram(cat, {{"x", x_coords}, {"u", u_coords}}, l), {}};
  f.fan = FanIndices::from_ids(cat, "x", "z", "u");
  return f;
}

Fixture lambda3_fixture() { return lambda3_with(6, {1, 2}, {2, 3, 4}, {4, 5, 6}, "lambda3"); }

Fixture lambda3_reduced_fixture() { return lambda3_with(3, {1, 2}, {2, 3}, {1, 3}, "lambda3_reduced"); }

Fixture not_fan_generated_fixture() {
  const IndexingCategory cat =
      IndexingCategory::build({"z", "x", "w", "u"}, {{"z", "x"}, {"z", "w"}, {"w", "u"}});
  Fixture f{"not_fan_generated",
            coordinate_diagram(cat, {{"x", {1, 2, 3, 4, 7}}, {"w", range(3, 7)}, {"u", range(3, 6)}}, 7),
            {}};
  f.fan = FanIndices::from_ids(cat, "x", "z", "u");
  return f;
}

std::string broken_diamond_json() {
  return R"({
  "objects": ["z", "x", "y", "v"],
  "covers": [["z", "x"], ["z", "y"], ["x", "v"], ["y", "v"]],
  "spaces": {
    "z": {"atoms": ["00", "01", "10", "11"], "weights": ["1/4", "1/4", "1/4", "1/4"]},
    "x": {"atoms": ["0", "1"], "weights": ["1/2", "1/2"]},
    "y": {"atoms": ["0", "1"], "weights": ["1/2", "1/2"]},
    "v": {"atoms": ["0", "1"], "weights": ["1/2", "1/2"]}
  },
  "maps": {
    "z->x": {"00": "0", "01": "0", "10": "1", "11": "1"},
    "z->y": {"00": "0", "01": "1", "10": "0", "11": "1"},
    "x->v": {"0": "0", "1": "1"},
    "y->v": {"0": "0", "1": "1"}
  }
}
)";
}

Fixture named_fixture(std::string_view name, int l, const std::vector<int>& x_coords,
                      const std::vector<int>& u_coords) {
  if (name == "two_fan") return coordinate_two_fan(6, range(1, 4), range(3, 6));
  if (name == "reduced_two_fan") return coordinate_two_fan(4, range(1, 4), range(3, 4));
  if (name == "coord") {
    if (l <= 0 || x_coords.empty()) throw Error(ErrorCode::kConfig, "fixture 'coord' needs --l, --I and --J");
    return coordinate_two_fan(l, x_coords, u_coords);
  }
  if (name == "lambda3") return lambda3_fixture();
  if (name == "lambda3_reduced") return lambda3_reduced_fixture();
  if (name == "not_fan_generated") return not_fan_generated_fixture();
  throw Error(ErrorCode::kConfig, "unknown fixture '" + std::string(name) + "'");
}

}  // namespace arrowc

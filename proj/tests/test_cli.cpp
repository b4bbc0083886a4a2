#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "arrowc/cli.hpp"
#include "arrowc/error.hpp"
#include "arrowc/fixtures.hpp"
#include "arrowc/results.hpp"
#include "arrowc/serialization.hpp"

using namespace arrowc;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "arrowc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("arrowc_test_" + name);
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("result tables") {
  ResultTable t;
  t.columns = {"a", "b"};
  const std::string empty = format_results(t, "csv", {"x", 7});
  CHECK(lines(empty).size() == 2);
  CHECK(lines(empty)[0] == "# arrowc 0.1.0 command=x seed=7 rng=sm64-xoshiro256ss/v1");
  CHECK(lines(empty)[1] == "a,b");
  t.add({Cell(Rational(3, 4)), Cell(std::string("p,q"))});
  t.add({Cell(true), Cell(0.1)});
  const auto csv = lines(format_results(t, "csv", {"x", std::nullopt}));
  CHECK(csv[2] == "0.75,\"p,q\"");
  CHECK(csv[3] == "true,0.1");
  const Json j = Json::parse(format_results(t, "json", {"x", 7}));
  CHECK(j["rows"][0]["a"] == "3/4");
  CHECK(j["rows"][1]["b"] == 0.1);
  CHECK(j["seed"] == 7);
  CHECK_THROWS_AS(t.add({Cell(1.0)}), Error);
  CHECK_THROWS_AS(format_results(t, "xml", {"x", 7}), Error);
  CHECK(format_double(1.0 / 3) == "0.3333333333333333");
}

TEST_CASE("diagram JSON round trip") {
  for (const char* name : {"two_fan", "lambda3", "not_fan_generated"}) {
    const Diagram d = named_fixture(name).diagram;
    const Json j = diagram_to_json(d);
    const Diagram back = diagram_from_json(Json::parse(j.dump()));
    CHECK(same_labeled(back, d));
    CHECK(diagram_to_json(back) == j);
  }
  const auto x = lambda_space(Rational(1, 3));
  CHECK(space_from_json(space_to_json(x)).same_distribution(x));
  CHECK_THROWS_AS(read_json_file("/nonexistent/arrowc.json"), Error);
  const auto bad = temp_file("bad.json", "{ not json");
  try {
    read_json_file(bad.string());
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("validate and entropy") {
  const auto v = run({"validate", "--fixture", "two_fan"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("fan_admissible,true") != std::string::npos);
  const auto broken = run({"validate", "--fixture", "broken_diamond"});
  CHECK(broken.code == kExitInput);
  CHECK(broken.err.find("CommutativityError") != std::string::npos);

  const auto path = temp_file("fan.json", diagram_to_json(named_fixture("reduced_two_fan").diagram).dump());
  const auto e = run({"entropy", "--input", path.string()});
  CHECK(e.code == kExitOk);
  CHECK(lines(e.out).size() == 5);
  const auto missing = run({"entropy", "--input", "/nonexistent.json"});
  CHECK(missing.code == kExitInput);
  CHECK(run({}).code == kExitInput);
  CHECK(run({"bogus"}).code == kExitInput);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("distance") {
  const auto d = run({"distance", "--input", "uniform:2", "--input2", "uniform:4"});
  CHECK(d.code == kExitOk);
  CHECK(lines(d.out)[2].rfind("0.6931471805599453,0.6931471805599453,true", 0) == 0);
  CHECK(run({"distance", "--input", "uniform:2"}).code == kExitInput);
}

TEST_CASE("contract output is reproducible") {
  const std::vector<std::string> base = {"contract", "--fixture", "coord", "--l", "8", "--I", "1..6", "--J", "5..8",
                                         "--seeds", "12", "--seed", "99", "--N", "120", "--t", "0.5"};
  const auto a = run(base);
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "4"});
  const auto b = run(threaded);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == run(base).out);
  const auto rows = lines(a.out);
  CHECK(rows.size() == 14);
  CHECK(rows[0] == "# arrowc 0.1.0 command=contract seed=99 rng=sm64-xoshiro256ss/v1");
  CHECK(rows[1].rfind("run,seed,subseed,N,t,rho", 0) == 0);
  CHECK(run({"contract", "--fixture", "coord", "--l", "8", "--I", "1..6", "--J", "5..8", "--seed", "100"}).out !=
        run({"contract", "--fixture", "coord", "--l", "8", "--I", "1..6", "--J", "5..8", "--seed", "101"}).out);
  const auto bad = run({"contract", "--fixture", "coord", "--l", "3", "--I", "1", "--J", "1..2"});
  CHECK(bad.code == kExitInput);  // misses coordinate 3, so x and u do not cover z
}

TEST_CASE("config files") {
  const auto cfg = temp_file("cfg.json", R"({"command": "contract", "fixture": "two_fan", "seeds": 3, "seed": 5})");
  const auto a = run({"contract", "--config", cfg.string()});
  CHECK(a.code == kExitOk);
  CHECK(lines(a.out).size() == 5);
  const auto b = run({"contract", "--config", cfg.string(), "--seeds", "2"});
  CHECK(lines(b.out).size() == 4);
  CHECK(lines(b.out)[2] == lines(a.out)[2]);

  const auto unknown = temp_file("cfg_bad.json", R"({"sedes": 3})");
  const auto u = run({"contract", "--config", unknown.string()});
  CHECK(u.code == kExitInput);
  CHECK(u.err.find("sedes") != std::string::npos);

  ExperimentConfig c;
  apply_config_file(c, cfg.string());
  CHECK(c.seeds == 3);
  CHECK(c.fixture == "two_fan");
  std::ostringstream out, err;
  CHECK(run_config(c, out, err) == kExitOk);
  CHECK(out.str() == a.out);
}

TEST_CASE("expand, tails, sweep and demo") {
  const auto e = run({"expand", "--fixture", "lambda3_reduced", "--m", "4"});
  CHECK(e.code == kExitOk);
  const auto not_reduced = run({"expand", "--fixture", "two_fan"});
  CHECK(not_reduced.code == kExitInput);
  CHECK(not_reduced.err.find("NotReduced") != std::string::npos);

  const auto t = run({"tails", "--trials", "2000", "--N", "200"});
  CHECK(t.code == kExitOk);
  CHECK(lines(t.out).size() == 2 + 3 * 6);
  const auto f = run({"tails", "--grid", "fixture", "--trials", "200"});
  CHECK(f.code == kExitOk);
  CHECK(f.out.find("totalvar,200,0.5,0.5,200") != std::string::npos);
  CHECK(run({"tails", "--grid", "nope"}).code == kExitInput);

  const auto s = run({"sweep", "--kind", "schedule"});
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("2562361,minimal_n") != std::string::npos);
  const auto sc = run({"sweep", "--fixture", "two_fan", "--Ns", "50,100", "--seeds", "3"});
  CHECK(sc.code == kExitOk);
  CHECK(lines(sc.out).size() == 4);

  const auto d = run({"demo", "--format", "json"});
  CHECK(d.code == kExitOk);
  const Json j = Json::parse(d.out);
  CHECK(j["command"] == "demo");
  CHECK_FALSE(j["rows"].empty());

  const auto out_path = std::filesystem::temp_directory_path() / "arrowc_test_out.csv";
  const auto w = run({"entropy", "--fixture", "two_fan", "--output", out_path.string()});
  CHECK(w.code == kExitOk);
  CHECK(w.out.empty());
  std::ifstream in(out_path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(lines(buf.str()).size() == 5);
}

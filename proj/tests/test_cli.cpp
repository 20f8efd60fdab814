#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "hyperdeg/cli.hpp"
#include "hyperdeg/report.hpp"
#include "hyperdeg/systems.hpp"

using namespace hyperdeg;
using nlohmann::ordered_json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Object keys and value kinds with array contents collapsed to their first
// element; numbers compare as one kind.
ordered_json skeleton(const ordered_json& j) {
  if (j.is_object()) {
    ordered_json o = ordered_json::object();
    for (const auto& [k, v] : j.items()) o[k] = skeleton(v);
    return o;
  }
  if (j.is_array()) {
    ordered_json a = ordered_json::array();
    if (!j.empty()) a.push_back(skeleton(j.front()));
    return a;
  }
  if (j.is_null()) return "null";
  if (j.is_number()) return "number";
  if (j.is_boolean()) return "boolean";
  return "string";
}

ordered_json read_golden(const std::string& name) {
  std::ifstream in(std::string(HYPERDEG_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  return ordered_json::parse(in);
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hyperdeg_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const std::vector<std::string> kLight{"--random-states", "8", "--direction-grid", "4", "--random-directions", "1"};

std::vector<std::string> with_light(std::vector<std::string> args) {
  args.insert(args.end(), kLight.begin(), kLight.end());
  return args;
}

}  // namespace

TEST_CASE("list-systems") {
  const Outcome all = run({"list-systems", "--json"});
  REQUIRE(all.code == cli::kExitOk);
  const auto doc = ordered_json::parse(all.out);
  CHECK(doc["command"] == "list-systems");
  CHECK(doc["body"]["systems"].size() == catalog().size());

  const auto cons = ordered_json::parse(run({"list-systems", "--json", "--filter", "conservative"}).out);
  for (const auto& s : cons["body"]["systems"]) CHECK(s["conservative"] == true);
  const auto noncons = ordered_json::parse(run({"list-systems", "--json", "--filter", "nonconservative"}).out);
  std::vector<std::string> names;
  for (const auto& s : noncons["body"]["systems"]) names.push_back(s["name"].get<std::string>());
  CHECK(names == std::vector<std::string>{"gas2d", "torus"});

  CHECK(run({"list-systems", "--filter", "odd"}).code == cli::kExitUsage);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"analyze"}).code == cli::kExitUsage);
  CHECK(run({"analyze", "--system", "nosuch"}).code == cli::kExitConstruction);
  CHECK(run({"analyze", "--system", "gas2d", "--gamma", "0.5"}).code == cli::kExitConstruction);
  CHECK(run({"analyze", "--system", "torus", "--torus-dim", "1"}).code == cli::kExitConstruction);
  CHECK(run({"analyze", "--system", "gas2d", "--eps-zero", "1", "--eps-nonzero", "0.1"}).code == cli::kExitUsage);
  CHECK(run(with_light({"analyze", "--system", "gas2d"})).code == cli::kExitOk);
  CHECK(run(with_light({"analyze", "--system", "lax"})).code == cli::kExitUndecided);
  CHECK(run(with_light({"verify-theorem", "--system", "gas2d"})).code == cli::kExitUsage);
  CHECK(run(with_light({"verify-theorem", "--system", "lax"})).code == cli::kExitOk);
  CHECK(run({"simulate", "--system", "rotational", "--f1", "r", "--split", "--base", "0", "0"}).code ==
        cli::kExitRuntime);
  CHECK(run({"simulate", "--system", "gas2d", "--split"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("the installed binary reports the same exit codes") {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(HYPERDEG_TOOL) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("list-systems") == 0);
  CHECK(status("analyze --system nosuch") == 65);
  CHECK(status("analyze --system gas2d --no-such-flag") == 64);
}

TEST_CASE("analyze output is deterministic apart from the timestamp") {
  const auto args = with_light({"analyze", "--system", "gas2d", "--json", "--seed", "9"});
  auto a = ordered_json::parse(run(args).out);
  auto b = ordered_json::parse(run(args).out);
  CHECK(a.contains("generated_at"));
  a = strip_timestamp(a);
  b = strip_timestamp(b);
  CHECK(a == b);
  CHECK(a["schema_version"] == kSchemaVersion);

  auto c = ordered_json::parse(run(with_light({"analyze", "--system", "gas2d", "--json", "--seed", "9", "--threads",
                                               "1"}))
                                   .out);
  CHECK(a == strip_timestamp(c));
}

TEST_CASE("analyze and verify-theorem documents match the golden skeleton") {
  const auto analyze = ordered_json::parse(run(with_light({"analyze", "--system", "gas2d", "--json"})).out);
  CHECK(skeleton(analyze) == read_golden("analyze_skeleton.json"));
  const auto verify = ordered_json::parse(run(with_light({"verify-theorem", "--system", "lax", "--json"})).out);
  CHECK(skeleton(verify) == read_golden("verify_skeleton.json"));
}

TEST_CASE("config documents") {
  SUBCASE("strict keys") {
    CHECK_THROWS_AS(cli::parse_config(R"({"command": "analyze", "system": {"name": "gas2d", "colour": 1}})"),
                    ParseError);
    CHECK_THROWS_AS(cli::parse_config(R"({"command": "analyze", "extra": true})"), ParseError);
    CHECK_THROWS_AS(cli::parse_config(R"({"format_version": 2})"), ParseError);
    CHECK_THROWS_AS(cli::parse_config(R"({"system": {"gamma": "hot"}})"), ParseError);
    CHECK_THROWS_AS(cli::parse_config("[1, 2"), ParseError);
  }
  SUBCASE("values") {
    const cli::RunConfig c = cli::parse_config(R"({
      "command": "analyze",
      "system": {"name": "gas2d", "gamma": 1.67},
      "sampling": {"seed": 4, "random_states": 3, "box": {"lower": [1, 0, 0, 1], "upper": [2, 1, 1, 2]}}
    })");
    CHECK(c.system.name == "gas2d");
    CHECK(*c.system.gamma == doctest::Approx(1.67));
    CHECK(*c.sampling.seed == 4);
    const SamplingPlan p = cli::build_plan(c.sampling);
    CHECK(p.random_states == 3);
    REQUIRE(p.state_box.has_value());
    CHECK(p.state_box->upper(0) == 2.0);
    CHECK(cli::build_system(c.system).name() == "gas2d");
  }
  SUBCASE("flags override the file") {
    const auto dir = scratch("config");
    const auto path = dir / "run.json";
    std::ofstream(path) << R"({"command": "analyze", "system": {"name": "linear", "matrices": ["1 0; 0 2"]},
                              "sampling": {"random_states": 4, "direction_grid": 2, "random_directions": 1}})";
    const Outcome a = run({"analyze", "--config", path.string(), "--json"});
    REQUIRE(a.code == cli::kExitOk);
    CHECK(ordered_json::parse(a.out)["body"]["system"]["name"] == "linear");
    const Outcome b = run({"analyze", "--config", path.string(), "--json", "--random-states", "5"});
    REQUIRE(b.code == cli::kExitOk);
    CHECK(ordered_json::parse(b.out)["body"]["plan"]["random_states"] == 5);
    // Parameters of another family are rejected, not ignored.
    CHECK(run({"analyze", "--config", path.string(), "--system", "lax"}).code == cli::kExitConstruction);
    CHECK(run({"analyze", "--config", (dir / "missing.json").string()}).code == cli::kExitUsage);
  }
}

TEST_CASE("random theorem sweeps") {
  const Outcome r = run({"verify-theorem", "--random-quadratic", "--count", "6", "--seed", "3", "--json"});
  CHECK(r.code == cli::kExitOk);
  const auto body = ordered_json::parse(r.out)["body"];
  CHECK(body["instances"].size() == 6);
  CHECK(run({"verify-theorem", "--random-linear", "--count", "4"}).code == cli::kExitOk);
  CHECK(run({"verify-theorem", "--random-linear", "--count", "0"}).code == cli::kExitUsage);
}

TEST_CASE("simulate writes its series") {
  const auto dir = scratch("simulate");
  const Outcome r = run({"simulate", "--system", "scalar-burgers", "--amplitude", "0.5", "--cells", "64", "--t-end",
                         "0.5", "--times", "0", "0.5", "--output-dir", dir.string(), "--json"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(std::filesystem::exists(dir / "snapshot_0.dat"));
  CHECK(std::filesystem::exists(dir / "snapshot_1.dat"));
  CHECK(std::filesystem::exists(dir / "gradient.dat"));
  CHECK(std::filesystem::exists(dir / "conservation.dat"));
  const auto body = ordered_json::parse(r.out)["body"];
  CHECK(body["result"]["status"] == "CompletedSmooth");

  const Outcome blow = run({"simulate", "--system", "scalar-burgers", "--cells", "128", "--t-end", "2", "--json"});
  CHECK(blow.code == cli::kExitOk);
  CHECK(ordered_json::parse(blow.out)["body"]["result"]["status"] == "BlowupDetected");
}

TEST_CASE("report writer") {
  ordered_json j;
  j["a"] = 1.0;
  j["b"] = std::nan("");
  j["c"] = ordered_json::array({1, 2, 3});
  j["d"] = 0.1;
  const std::string s = dump(j);
  CHECK(s.find("\"a\": 1.0") != std::string::npos);
  CHECK(s.find("\"b\": null") != std::string::npos);
  CHECK(s.find("[1, 2, 3]") != std::string::npos);
  CHECK(ordered_json::parse(s)["d"].get<double>() == 0.1);
}

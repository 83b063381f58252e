#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "argus/error.hpp"
#include "argus/serialization.hpp"

using namespace argus;
using namespace argus::io;

namespace {

const std::filesystem::path kScenarios = ARGUS_SCENARIO_DIR;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename F>
std::string schema_error_of(F&& fn) {
  try {
    fn();
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scenarios and traces round-trip byte for byte") {
  for (const char* name : {"example.json", "venue.json", "probe.json"}) {
    const auto s = load_scenario(kScenarios / name);
    const std::string once = dump_canonical(to_json(s));
    const std::string twice = dump_canonical(to_json(scenario_from_json(json::parse(once))));
    CHECK(once == twice);
  }
  const auto t = load_trace(kScenarios / "example_trace.json");
  REQUIRE(t.moves.size() == 2);
  CHECK(t.moves[0].annotation().value == 0.6);
  const std::string once = dump_canonical(to_json(t));
  CHECK(dump_canonical(to_json(trace_from_json(json::parse(once)))) == once);
}

TEST_CASE("moves keep their annotation kind") {
  const logic::Vocabulary v({"a"});
  const auto a = logic::parse_formula("a", v);
  const arg::Move m(arg::Argument({a}, a), arg::Source::kHuman, 4, arg::Annotation::certainty(0.3));
  const json j = to_json(m);
  CHECK(j.at("certainty") == 0.3);
  CHECK_FALSE(j.contains("trust"));
  CHECK(move_from_json(j, v) == m);
}

TEST_CASE("distributions") {
  const logic::Vocabulary v({"a", "b"});
  const belief::ModelDistribution d(v, {0.1, 0.2, 0.3, 0.4});
  CHECK(distribution_from_json(to_json(d)) == d);
  CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"vocab":["a"],"probs":[0.5,0.6]})")),
                  SchemaError);
}

TEST_CASE("schema errors name the offending path") {
  json s = read_json_file(kScenarios / "example.json");
  s["agent_kb"][1] = "a ->";
  CHECK(schema_error_of([&] { scenario_from_json(s); }).find("scenario.agent_kb[1]") !=
        std::string::npos);

  s = read_json_file(kScenarios / "example.json");
  s["schema"] = 2;
  CHECK_THROWS_AS(scenario_from_json(s), SchemaError);

  s = read_json_file(kScenarios / "example.json");
  s["human_pool"][0]["certainty"] = 0.8;
  CHECK_THROWS_AS(scenario_from_json(s), SchemaError);

  s = read_json_file(kScenarios / "example.json");
  s["rule"] = "baseline9";
  CHECK(schema_error_of([&] { scenario_from_json(s); }).find("scenario.rule") != std::string::npos);

  json t = read_json_file(kScenarios / "example_trace.json");
  t["moves"][0]["source"] = "robot";
  CHECK(schema_error_of([&] { trace_from_json(t); }).find("trace.moves[0].source") !=
        std::string::npos);

  t = read_json_file(kScenarios / "example_trace.json");
  t["moves"][1].erase("certainty");
  CHECK(schema_error_of([&] { trace_from_json(t); }).find("certainty") != std::string::npos);
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(read_json_file(kScenarios / "missing.json"), IoError);
  const auto dir = std::filesystem::temp_directory_path() / "argus_serialization_test";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(read_json_file(dir / "bad.json"), SchemaError);
  write_file_atomic(dir / "ok.json", "{}\n");
  CHECK(slurp(dir / "ok.json") == "{}\n");
  CHECK_FALSE(std::filesystem::exists(dir / "ok.json.tmp"));
  std::filesystem::remove_all(dir);
}

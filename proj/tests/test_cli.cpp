#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "argus/cli.hpp"

using namespace argus;

namespace {

const std::filesystem::path kScenarios = ARGUS_SCENARIO_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "argus");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const char* name) { return (kScenarios / name).string(); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool json_ok(const std::string& text) {
  return !nlohmann::json::parse(text, nullptr, false).is_discarded();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("replay prints the worked distribution") {
  const auto r = run({"replay", "--trace", scenario("example_trace.json"), "--scenario",
                      scenario("example.json")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("0.450000 0.016410 0.450000 0.083590") != std::string::npos);
  CHECK(r.out.find("round 1 rho 1.0000") != std::string::npos);
}

TEST_CASE("replay under another rule") {
  const auto r = run({"replay", "--trace", scenario("example_trace.json"), "--rule", "baseline2",
                      "--gamma", "1"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("t=1 agent p=0.600000") != std::string::npos);
}

TEST_CASE("usage and file errors exit with 1") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"replay"}).code == cli::kExitUsage);
  CHECK(run({"replay", "--trace", "/nonexistent.json"}).code == cli::kExitUsage);
  CHECK(run({"replay", "--trace", scenario("example.json")}).code == cli::kExitUsage);
  CHECK(run({"replay", "--trace", scenario("example_trace.json"), "--rule", "baseline7"}).code ==
        cli::kExitUsage);
  CHECK(run({"bogus"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("a degenerate replay exits with 2 and names the timestep") {
  const auto r = run({"replay", "--trace", scenario("degenerate_trace.json"), "--gamma", "0.7"});
  CHECK(r.code == cli::kExitDegenerate);
  CHECK(r.err.find("timestep 2") != std::string::npos);
}

TEST_CASE("simulate is reproducible per seed") {
  const auto a = run({"simulate", "--scenario", scenario("venue.json"), "--seed", "7"});
  const auto b = run({"simulate", "--scenario", scenario("venue.json"), "--seed", "7"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(json_ok(a.out));
}

TEST_CASE("simulate, fit and evaluate over a cohort") {
  TempDir dir("argus_cli_test");
  const auto out = dir.path.string();
  REQUIRE(run({"simulate", "--scenario", scenario("probe.json"), "--participants", "3", "--gammas",
               "0.7", "--rounds", "20", "--seed", "5", "--out", out})
              .code == cli::kExitOk);
  CHECK(std::filesystem::exists(dir.path / "records.csv"));
  CHECK(std::filesystem::exists(dir.path / "participants.csv"));
  CHECK(std::filesystem::is_directory(dir.path / "traces"));

  const auto fit = run({"fit", "--scenario", scenario("probe.json"), "--traces",
                        (dir.path / "traces").string(), "--records", (dir.path / "records.csv").string(),
                        "--out", (dir.path / "fits.csv").string()});
  REQUIRE(fit.code == cli::kExitOk);
  std::istringstream rows(slurp(dir.path / "fits.csv"));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "participant_id,gamma,fit_rounds,eval_rounds,fit_rho,eval_rho");
  int n = 0;
  while (std::getline(rows, line)) {
    ++n;
    CHECK(line.find(",0.7,") != std::string::npos);
  }
  CHECK(n == 3);

  const auto eval = run({"evaluate", "--scenario", scenario("probe.json"), "--traces",
                         (dir.path / "traces").string(), "--records", (dir.path / "records.csv").string(),
                         "--gamma", "0.7", "--out", (dir.path / "eval.json").string()});
  REQUIRE(eval.code == cli::kExitOk);
  for (const char* m : {"baseline1,", "baseline2,", "baseline3,", "proposed,"}) {
    CHECK(eval.out.find(m) != std::string::npos);
  }
  CHECK(std::filesystem::exists(dir.path / "eval.json"));

  CHECK(run({"fit", "--scenario", scenario("probe.json"), "--traces", (dir.path / "traces").string(),
             "--records", (dir.path / "records.csv").string(), "--variant", "nope"})
            .code == cli::kExitUsage);
}

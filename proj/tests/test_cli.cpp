#include "doctest.h"

#include "corrlab/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace corrlab;
namespace fs = std::filesystem;

namespace {

fs::path binary_path() {
  // Tests run from the build tree; the CLI sits next to the test binary.
  return fs::path(CORRLAB_BINARY);
}

fs::path scenario_dir() { return fs::path(CORRLAB_SCENARIOS); }

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string cmd = binary_path().string() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) text.append(buf, got);
  const int status = pclose(pipe);
  if (output) *output = text;
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("corrlab_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("run exits zero on a passing scenario") {
  std::string out;
  const int code = run_cli("run " + (scenario_dir() / "commutant-corner.json").string(), &out);
  CHECK(code == 0);
  CHECK(out.find("pass") != std::string::npos);
}

TEST_CASE("json reports are byte-identical across runs") {
  std::string a, b;
  const std::string args =
      "run " + (scenario_dir() / "flip-random-seed42.json").string() + " --report json";
  CHECK(run_cli(args, &a) == 0);
  CHECK(run_cli(args, &b) == 0);
  CHECK(a == b);
  CHECK(a.find("duration") == std::string::npos);  // timing only with --timings
}

TEST_CASE("parse and schema errors exit with status two") {
  TempDir tmp;
  SUBCASE("unreadable file") {
    CHECK(run_cli("run " + (tmp.path / "missing.json").string()) == 2);
  }
  SUBCASE("broken json") {
    std::ofstream(tmp.path / "broken.json") << "{not json";
    CHECK(run_cli("run " + (tmp.path / "broken.json").string()) == 2);
  }
  SUBCASE("wrong kind") {
    std::ofstream(tmp.path / "kind.json")
        << R"({"name":"x","kind":"nonsense","inputs":{}})";
    CHECK(run_cli("run " + (tmp.path / "kind.json").string()) == 2);
  }
  SUBCASE("malformed matrix payload") {
    std::ofstream(tmp.path / "mat.json") << R"({
      "name": "x", "kind": "commutant",
      "inputs": {"algebra": {"blocks": "oops"}}})";
    CHECK(run_cli("run " + (tmp.path / "mat.json").string()) == 2);
  }
}

TEST_CASE("failed expectations exit with status one") {
  TempDir tmp;
  std::ofstream(tmp.path / "wrong.json") << R"({
    "name": "wrong-expectation", "kind": "commutant",
    "inputs": {"algebra": {"blocks": [{"size": 2, "multiplicity": 1}]}},
    "expect": {"commutant_dim": 5}})";
  std::string out;
  CHECK(run_cli("run " + (tmp.path / "wrong.json").string(), &out) == 1);
  CHECK(out.find("fail") != std::string::npos);
}

TEST_CASE("refusals exit with status three") {
  TempDir tmp;
  // A non-full module sent through the commutant construction.
  std::ofstream(tmp.path / "refused.json") << R"({
    "name": "refused-non-full", "kind": "endo-commutant",
    "inputs": {
      "module": {
        "algebra": {"blocks": [{"size": 1, "multiplicity": 1}, {"size": 1, "multiplicity": 1}]},
        "target_dim": 1,
        "generators": [[[[1, 0], [0, 0]]]]
      },
      "endomorphism": {"kind": "identity"}
    }})";
  std::string out;
  CHECK(run_cli("run " + (tmp.path / "refused.json").string(), &out) == 3);
  CHECK(out.find("refused") != std::string::npos);
}

TEST_CASE("suite aggregates and tolerates corrupted members") {
  TempDir tmp;
  fs::copy_file(scenario_dir() / "commutant-corner.json", tmp.path / "a.json");
  fs::copy_file(scenario_dir() / "endo-unit-swap.json", tmp.path / "b.json");
  SUBCASE("all pass") {
    std::string out;
    CHECK(run_cli("suite " + tmp.path.string(), &out) == 0);
    CHECK(out.find("2/2") != std::string::npos);
  }
  SUBCASE("one corrupted file fails the aggregate, others unaffected") {
    std::ofstream(tmp.path / "c.json") << "{broken";
    std::string out;
    CHECK(run_cli("suite " + tmp.path.string(), &out) == 2);
    CHECK(out.find("2/3") != std::string::npos);
  }
}

TEST_CASE("empty suite directory passes with a warning") {
  TempDir tmp;
  std::string out;
  CHECK(run_cli("suite " + tmp.path.string(), &out) == 0);
  CHECK(out.find("0/0") != std::string::npos);
}

TEST_CASE("schema prints a skeleton for every kind") {
  for (const auto& kind : scenario_kinds()) {
    std::string out;
    CHECK(run_cli("schema " + kind, &out) == 0);
    CHECK(out.find(kind) != std::string::npos);
  }
  CHECK(run_cli("schema bogus") == 2);
}

TEST_CASE("tolerance and seed overrides are honored") {
  std::string out;
  const int code = run_cli("run " + (scenario_dir() / "lemma-corner-seed7.json").string() +
                               " --seed 11 --report json",
                           &out);
  CHECK(code == 0);
  CHECK(out.find("\"seed\": 11") != std::string::npos);
}

TEST_CASE("full corpus passes through the suite runner API") {
  const auto result = run_suite(scenario_dir().string(), 4);
  CHECK(result.exit_code == 0);
  CHECK(result.pass_count == result.scenario_count);
  CHECK(result.scenario_count >= 14);
}

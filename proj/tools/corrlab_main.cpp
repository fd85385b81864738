#include "corrlab/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw corrlab::ScenarioError("cannot write: " + out_path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrlab: finite-dimensional correspondence and product-system checks"};
  app.require_subcommand(1);

  std::string file, dir, kind, report_format = "text", out_path;
  double tol_abs = -1.0, tol_rel = -1.0;
  std::int64_t seed = -1;
  int jobs = 1;
  bool timings = false;

  auto* run = app.add_subcommand("run", "run one scenario file");
  run->add_option("file", file, "scenario JSON file")->required();
  run->add_option("--tol", tol_abs, "absolute tolerance override");
  run->add_option("--rel", tol_rel, "relative tolerance override");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--report", report_format, "report format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  run->add_option("--out", out_path, "write the report to a file");
  run->add_flag("--timings", timings, "include wall-clock durations in reports");

  bool show_progress = false;
  auto* suite = app.add_subcommand("suite", "run every scenario in a directory");
  suite->add_option("dir", dir, "directory of scenario JSON files")->required();
  suite->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);
  suite->add_option("--report", report_format, "report format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  suite->add_option("--out", out_path, "write the report to a file");
  suite->add_flag("--timings", timings, "include wall-clock durations in reports");
  suite->add_flag("--progress", show_progress, "print completion progress to stderr");

  auto* schema = app.add_subcommand("schema", "print the JSON schema of a scenario kind");
  schema->add_option("kind", kind, "scenario kind")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      corrlab::Scenario s = corrlab::load_scenario(file);
      if (tol_abs >= 0) s.tol.abs_eps = tol_abs;
      if (tol_rel >= 0) s.tol.rel_eps = tol_rel;
      if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
      const corrlab::Report rep = corrlab::run_scenario(s);
      if (report_format == "json")
        emit(rep.to_json(timings).dump(2) + "\n", out_path);
      else
        emit(rep.to_text(timings), out_path);
      return rep.exit_code();
    }
    if (suite->parsed()) {
      const corrlab::SuiteResult result = corrlab::run_suite(dir, jobs);
      if (result.scenario_count == 0)
        std::cerr << "warning: no scenario files in " << dir << "\n";
      if (report_format == "json") {
        corrlab::Json j{{"scenarios", result.scenario_count},
                        {"passed", result.pass_count},
                        {"reports", corrlab::Json::array()}};
        for (const auto& r : result.reports) j["reports"].push_back(r.to_json(timings));
        if (timings) j["duration_ms"] = result.duration_ms;
        emit(j.dump(2) + "\n", out_path);
      } else {
        std::string text;
        for (const auto& r : result.reports) text += r.to_text(timings);
        text += std::to_string(result.pass_count) + "/" +
                std::to_string(result.scenario_count) + " scenarios passed";
        if (timings) text += " in " + std::to_string(result.duration_ms) + " ms";
        text += "\n";
        emit(text, out_path);
      }
      return result.exit_code;
    }
    if (schema->parsed()) {
      std::cout << corrlab::schema_for(kind).dump(2) << "\n";
      return 0;
    }
  } catch (const corrlab::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "hmlab/domain/quadrature.hpp"
#include "hmlab/lab/runner.hpp"
#include "hmlab/lab/scenario.hpp"

namespace {

constexpr int kConfigError = 4;

int threads_from_env() {
  if (const char* env = std::getenv("LAB_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring LAB_THREADS='" << env << "'\n";
  }
  return 1;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void report_config_error(const hmlab::ConfigError& e) {
  if (auto* invalid = dynamic_cast<const hmlab::lab::ScenarioInvalid*>(&e)) {
    for (const auto& issue : invalid->issues()) std::cerr << "error: " << issue.field << ": " << issue.message << "\n";
  } else {
    std::cerr << "error: " << e.field() << ": " << e.what() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic map order and Bochner checks"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, checks;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Solve a scenario and run its checks");
  run->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--checks", checks, "Comma-separated checks, overriding the scenario");
  run->add_option("--threads", threads, "Worker threads (default: LAB_THREADS or 1)")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("scenario", validate_path, "Scenario file (JSON)")->required();

  std::uint64_t selftest_seed = 1;
  int selftest_count = 100;
  auto* selftest = app.add_subcommand("quadrature-selftest", "Compare quadrature against closed forms");
  selftest->add_option("--seed", selftest_seed, "Random seed");
  selftest->add_option("--count", selftest_count, "Random matrices per form")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  try {
    if (*validate) {
      hmlab::lab::Scenario s = hmlab::lab::parse_scenario(validate_path);
      std::cout << "ok: " << s.name << "\n";
      return 0;
    }
    if (*selftest) {
      auto rows = hmlab::domain::quadrature_selftest(selftest_count, selftest_seed);
      hmlab::domain::write_quadrature_csv(std::cout, rows);
      int failed = 0;
      for (const auto& r : rows) failed += !(r.rel_err <= 1e-6);
      std::cerr << (rows.size() - failed) << "/" << rows.size() << " within 1e-6\n";
      return failed == 0 ? 0 : 2;
    }

    hmlab::lab::Scenario s = hmlab::lab::parse_scenario(scenario_path);
    hmlab::lab::RunOptions options;
    options.threads = threads > 0 ? threads : threads_from_env();
    if (!out_dir.empty()) options.output = out_dir;
    if (!checks.empty()) {
      options.checks = split_list(checks);
      const auto& known = hmlab::lab::known_checks();
      for (const auto& c : *options.checks)
        if (std::find(known.begin(), known.end(), c) == known.end())
          throw hmlab::ConfigError("--checks", "unknown check '" + c + "'");
    }
    hmlab::lab::RunResult result = hmlab::lab::run_scenario(s, options);
    std::cout << "scenario " << result.name << ": "
              << (result.solved ? (result.converged ? "converged" : "not converged") : "not solved") << ", energy "
              << result.energy << ", " << result.wall_seconds << " s\n";
    for (const auto& c : result.checks) {
      std::cout << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << " " << c.passed << "/" << c.total;
      if (!c.note.empty()) std::cout << " (" << c.note << ")";
      std::cout << "\n";
    }
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& path : result.manifest) std::cout << "  wrote " << path.string() << "\n";
    return result.exit_code();
  } catch (const hmlab::ConfigError& e) {
    report_config_error(e);
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#include <algorithm>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "heis/cli.hpp"

using namespace heis;

namespace {

int finish(const cli::Outcome& out, bool print_report) {
  if (!out.csv.empty()) std::cout << out.csv;
  if (print_report && out.report) std::cout << out.report->to_json();
  if (!out.message.empty()) std::cerr << out.message << (out.message.back() == '\n' ? "" : "\n");
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intersection curves of H-regular surfaces in the Heisenberg group"};
  app.require_subcommand(1);

  std::string config_path, out_path, report_path, suite = "all";
  std::uint64_t seed = 1;

  auto add_config_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--out", out_path, "curve CSV (default: stdout)");
    sub->add_option("--report", report_path, "report JSON");
    return sub;
  };
  CLI::App* intersect = add_config_command("intersect", "trace the intersection curve");
  CLI::App* characteristics = add_config_command("characteristics", "characteristics of the second surface");
  CLI::App* trace = add_config_command("trace", "intersection with trace diagnostics");
  CLI::App* verify = app.add_subcommand("verify", "run verification suites on built-in fixtures");
  verify->add_option("--suite", suite, "suite name or 'all'");
  verify->add_option("--report", report_path, "report JSON (default: stdout)");
  verify->add_option("--seed", seed, "seed for sampled checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cli::RunConfig config;
    if (verify->parsed()) {
      config.command = cli::Command::Verify;
      config.suite = suite;
      config.seed = seed;
      config.report = report_path;
      const auto& names = cli::suite_names();
      if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
        fail(ErrorKind::Config, "--suite: unknown suite '" + suite + "'");
      }
    } else {
      cli::Command cmd = cli::Command::Intersect;
      if (characteristics->parsed()) cmd = cli::Command::Characteristics;
      if (trace->parsed()) cmd = cli::Command::Trace;
      (void)intersect;
      config = cli::load_config(config_path, cmd);
      if (!out_path.empty()) config.output = out_path;
      if (!report_path.empty()) config.report = report_path;
    }
    const cli::Outcome out = cli::run(config);
    return finish(out, verify->parsed() && report_path.empty());
  } catch (const Error& e) {
    std::cerr << cli::explain(e) << "\n";
    return cli::exit_code_for(e.kind());
  }
}

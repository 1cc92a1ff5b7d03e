#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "flatscan/cli/cli.hpp"

namespace {

int emit(const flatscan::cli::Outcome& outcome, const std::string& json_path) {
  const auto& report = outcome.report;
  if (json_path == "-") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << flatscan::cli::render_text(report);
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) {
        std::cerr << "cannot write " << json_path << "\n";
        return flatscan::cli::kInputError;
      }
      out << report.dump(2) << "\n";
    }
  }
  if (report.contains("error")) std::cerr << "error: " << report["error"]["message"].get<std::string>() << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat-output search for two-input control-affine systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", flatscan::cli::kVersion);

  std::string model, json_path;
  bool timing = false;
  flatscan::cli::AnalyzeOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "Run the distribution algorithms and verify candidates");
  analyze->add_option("model", model, "Model JSON file")->required();
  analyze->add_option("--algorithm", analyze_opts.algorithm, "1 or 2")->check(CLI::IsMember({1, 2}));
  analyze->add_option("--max-prolong", analyze_opts.max_prolong, "Largest equal prolongation order tried");
  analyze->add_option("--seed", analyze_opts.seed, "Sample-point seed");
  analyze->add_option("--json", json_path, "Write the JSON report here ('-' prints it instead of text)");
  analyze->add_flag("--timing", analyze_opts.timing, "Include wall-clock timing in the report");

  std::vector<std::string> output;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "Check a candidate flat output");
  verify->add_option("model", model, "Model JSON file")->required();
  verify->add_option("--output", output, "Two expressions")->required()->expected(2);
  verify->add_option("--seed", seed, "Sample-point seed");
  verify->add_option("--json", json_path, "Write the JSON report here ('-' prints it instead of text)");
  verify->add_flag("--timing", timing, "Include wall-clock timing in the report");

  std::vector<unsigned> orders;
  std::string out_path;
  auto* prolong = app.add_subcommand("prolong", "Add integrators in front of the inputs");
  prolong->add_option("model", model, "Model JSON file")->required();
  prolong->add_option("--orders", orders, "Orders p1 p2")->required()->expected(2);
  prolong->add_option("--out", out_path, "Output model file")->required();
  prolong->add_option("--json", json_path, "Write the JSON report here ('-' prints it instead of text)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : flatscan::cli::kInputError;
  }

  if (*analyze) return emit(flatscan::cli::cmd_analyze(model, analyze_opts), json_path);
  if (*verify) return emit(flatscan::cli::cmd_verify(model, output[0], output[1], seed, timing), json_path);
  return emit(flatscan::cli::cmd_prolong(model, orders[0], orders[1], out_path), json_path);
}

// torrent_check: decide a reachability bound on a Markov chain or MDP and,
// when it fails, print the most indicative torrent counterexample.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "torrent/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Checks P<=p [F target] on an explicit-state model and reports torrent counterexamples"};
  app.set_version_flag("--version", "torrent_check 0.1.0");

  std::string model_path;
  std::string property;
  std::string format = "text";
  torrent::CheckOptions options;

  app.add_option("model", model_path, "Model file (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--prop", property, "Property, e.g. \"P<=0.5 [ F psi ]\"")->required();
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_flag("--dump-scc", options.dump_scc, "Include the nontrivial component table");
  app.add_flag("--verify", options.verify,
               "Cross-check the result against brute-force and sampling baselines");
  app.add_option("--seed", options.seed, "Seed for sampling during --verify")->capture_default_str();
  app.add_option("--max-witnesses", options.max_witnesses,
                 "Abort when a counterexample needs more witnesses than this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tolerance", options.row_tolerance,
                 "Allowed deviation of a distribution's sum from 1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--samples", options.verify_samples, "Sampled runs during --verify")
      ->capture_default_str();
  app.add_flag("--timings", options.timings, "Record per-stage wall-clock times in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : torrent::kExitInputError;
  }

  const auto result = torrent::run_check(model_path, property, options);
  if (!result.report) {
    std::cerr << "torrent_check: error in " << result.stage << " stage: " << result.error << "\n";
    return result.exit_code;
  }
  std::cout << torrent::render_report(
      *result.report, format == "json" ? torrent::ReportFormat::json : torrent::ReportFormat::text);
  return result.exit_code;
}

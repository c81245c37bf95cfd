// verify: build a metric family from a config file, run the identity suites
// and write the report.  Exit status 0 = all checks pass, 1 = some check
// failed, 2 = bad config or the family could not be constructed.
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "twistorlab/verify/config.hpp"
#include "twistorlab/verify/report.hpp"
#include "twistorlab/verify/runner.hpp"
#include "twistorlab/version.hpp"

namespace tv = twistorlab::verify;

int main(int argc, char** argv) {
  CLI::App app{"Verify twistor and Killing field identities on a metric family"};
  app.set_version_flag("--version", twistorlab::kVersionString);
  std::string config_path, out_dir, format;
  long long seed = -1, samples = -1;
  app.add_option("config", config_path, "Config file")->required();
  app.add_option("--out", out_dir, "Output directory (default: output.dir or .)");
  app.add_option("--format", format, "json | csv-summary | csv-profiles")
      ->check(CLI::IsMember({"json", "csv-summary", "csv-profiles"}));
  app.add_option("--seed", seed, "Override run.seed")->check(CLI::NonNegativeNumber);
  app.add_option("--samples", samples, "Override run.samples");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  tv::RunConfig config;
  try {
    config = tv::load_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!format.empty()) config.format = format;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    if (samples != -1) config.samples = static_cast<int>(samples);
    if (const char* scale = std::getenv("TWISTORLAB_TOL_SCALE")) {
      char* end = nullptr;
      config.tolerance_scale = std::strtod(scale, &end);
      if (end == scale || *end != '\0') throw twistorlab::ConfigError("TWISTORLAB_TOL_SCALE: expected a number");
    }
    tv::validate(config);
  } catch (const twistorlab::Error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }

  const tv::VerificationReport report = tv::run(config);
  try {
    const std::string path = tv::emit_report(report, config.format, config.output_dir);
    std::cout << path << "\n";
  } catch (const twistorlab::Error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }
  if (!report.constructed) {
    std::cerr << "verify: construction failed: " << report.cause << "\n";
  } else {
    std::cout << report.instance_label << ": " << report.passed() << " passed, " << report.failed() << " failed, "
              << report.skipped() << " skipped";
    if (report.classification) std::cout << ", classification " << report.classification->tag;
    std::cout << "\n";
  }
  return report.exit_code();
}

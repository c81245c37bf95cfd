#include <gtest/gtest.h>
#include <sys/wait.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "twistorlab/verify/config.hpp"
#include "twistorlab/verify/report.hpp"
#include "twistorlab/verify/runner.hpp"

using namespace twistorlab;
using namespace twistorlab::verify;
namespace fs = std::filesystem;

namespace {

RunConfig config_from(const std::string& text) {
  RunConfig c = parse_config(text);
  validate(c);
  apply_suite_rules(c);
  return c;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("twistorlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& config_text, const fs::path& dir, const std::string& extra = "") {
  const fs::path conf = dir / "run.conf";
  std::ofstream(conf) << config_text;
  const std::string cmd = std::string("\"") + TWISTORLAB_VERIFY_EXE + "\" \"" + conf.string() + "\" --out \"" +
                          dir.string() + "\" " + extra + " > \"" + (dir / "stdout.txt").string() + "\" 2> \"" +
                          (dir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream l(line);
    while (std::getline(l, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

double parse_double(const std::string& s) {
  if (s == "nan") return NAN;
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

const char* kSasakian = "family.kind = sasakian_sphere\nrun.samples = 20\n";

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.samples, 200);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.suites, all_suites());
  EXPECT_EQ(c.format, "json");
  EXPECT_EQ(c.omegas, 10);
  EXPECT_DOUBLE_EQ(c.tolerances.order1, 1e-9);
  EXPECT_DOUBLE_EQ(c.tolerances.order2, 1e-7);
  EXPECT_DOUBLE_EQ(c.tolerances.order3, 1e-6);
}

TEST(Config, SectionsCommentsAndExpressions) {
  const RunConfig c = parse_config(
      "# join with a bumped profile\n"
      "[family]\n"
      "kind = riemannian_join   ; trailing comment\n"
      "n = 5\n"
      "l = pi/2\n"
      "gamma.kind = perturbed_sin\n"
      "gamma.epsilon = 0.25\n"
      "[run]\n"
      "samples = 12\n"
      "suites = [killing, section4]\n"
      "tol.order2 = 2e-7\n");
  EXPECT_EQ(c.family.kind, FamilyKind::RiemannianJoin);
  EXPECT_EQ(c.family.n, 5);
  EXPECT_DOUBLE_EQ(*c.family.l, std::numbers::pi / 2);
  EXPECT_EQ(c.family.gamma.kind, "perturbed_sin");
  EXPECT_DOUBLE_EQ(c.family.gamma.epsilon, 0.25);
  EXPECT_EQ(c.samples, 12);
  // Joins always get the boundary suite.
  EXPECT_EQ(c.suites, (std::vector<std::string>{"killing", "section4", "boundary"}));
  EXPECT_DOUBLE_EQ(c.tolerances.order2, 2e-7);
}

TEST(Config, ErrorsNameTheLineOrKey) {
  try {
    parse_config("run.samples = 3\nfamily.colour = red\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("run.samples = 3\nrun.samples = 4\n"), ConfigError);
  EXPECT_THROW(parse_config("just words\n"), ConfigError);
  EXPECT_THROW(parse_config("run.suites = killing, nonsense\n"), ConfigError);
  try {
    validate(parse_config("run.samples = 0\n"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("run.samples"), std::string::npos) << e.what();
  }
  EXPECT_THROW(validate(parse_config("family.n = 9\n")), ConfigError);
}

TEST(Config, BoundarySuiteIsAddedForProfiles) {
  RunConfig join = config_from("family.kind = riemannian_join\nfamily.n = 4\nrun.suites = killing\n");
  EXPECT_NE(std::find(join.suites.begin(), join.suites.end(), "boundary"), join.suites.end());
  RunConfig sphere = config_from("family.kind = round_sphere\nrun.suites = killing\n");
  EXPECT_EQ(sphere.suites, std::vector<std::string>{"killing"});
  RunConfig none = config_from("family.kind = riemannian_join\nfamily.n = 4\nrun.suites = []\n");
  EXPECT_TRUE(none.suites.empty());
}

TEST(Runner, EmptySuiteListProducesNoRecords) {
  const VerificationReport r = run(config_from("family.kind = round_sphere\nrun.suites = []\n"));
  EXPECT_TRUE(r.constructed);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(Runner, OutputDoesNotDependOnThreads) {
  RunConfig c = config_from("family.kind = riemannian_join\nfamily.n = 4\nfamily.gamma.kind = perturbed_sin\n"
                            "run.samples = 16\n");
  c.threads = 1;
  const std::string one = to_json(run(c));
  c.threads = 4;
  EXPECT_EQ(to_json(run(c)), one);
  EXPECT_EQ(to_json(run(c)), one);
}

TEST(Runner, LowDimensionCurvatureIdentitiesAreNotApplicable) {
  const VerificationReport r = run(config_from("family.kind = round_sphere\nfamily.n = 3\nrun.samples = 5\n"
                                               "run.suites = section3\n"));
  ASSERT_FALSE(r.records.empty());
  for (const IdentityRecord& rec : r.records) {
    EXPECT_EQ(rec.status, RecordStatus::NotApplicable) << rec.identity;
    EXPECT_FALSE(rec.note.empty());
  }
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(Runner, ConstructionFailureIsReported) {
  const VerificationReport r =
      run(config_from("family.kind = riemannian_join\nfamily.n = 4\nfamily.gamma.kind = polynomial\n"
                      "family.gamma.coeffs = [0, 1, 1]\n"));
  EXPECT_FALSE(r.constructed);
  EXPECT_EQ(r.exit_code(), 2);
  EXPECT_NE(r.cause.find("origin"), std::string::npos) << r.cause;
}

TEST(Report, JsonRoundTripsResiduals) {
  const VerificationReport r = run(config_from(kSasakian));
  const nlohmann::json j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["status"]["exit_code"], 0);
  EXPECT_EQ(j["summary"]["classification"]["tag"], "f-constant");
  std::size_t seen = 0;
  std::map<std::string, std::size_t> next;
  for (const IdentityRecord& rec : r.records) {
    const nlohmann::json& jr = j["suites"][rec.suite][next[rec.suite]++];
    EXPECT_EQ(jr["identity"], rec.identity);
    if (std::isfinite(rec.residual)) EXPECT_EQ(jr["residual"].get<double>(), rec.residual);
    ++seen;
  }
  EXPECT_EQ(seen, j["summary"]["records"].get<std::size_t>());
}

TEST(Report, CsvSummaryAgreesWithJsonRecords) {
  const VerificationReport r = run(config_from("family.kind = warped_mapping_torus\nfamily.n = 4\nrun.samples = 15\n"));
  const nlohmann::json j = nlohmann::json::parse(to_json(r));
  struct Tally {
    int count = 0, passed = 0, failed = 0, skipped = 0;
    double max = 0.0;
  };
  std::map<std::pair<std::string, std::string>, Tally> tallies;
  for (const auto& [suite, records] : j["suites"].items()) {
    for (const auto& rec : records) {
      Tally& t = tallies[{suite, rec["identity"].get<std::string>()}];
      ++t.count;
      const std::string status = rec["status"];
      if (status == "pass" || status == "fail") {
        (status == "pass" ? t.passed : t.failed)++;
        t.max = std::max(t.max, rec["residual"].get<double>());
      } else {
        ++t.skipped;
      }
    }
  }
  const auto rows = csv_rows(to_csv_summary(r));
  ASSERT_EQ(rows.front(), (std::vector<std::string>{"suite", "identity", "count", "passed", "failed", "skipped",
                                                     "max_residual", "mean_residual"}));
  ASSERT_EQ(rows.size() - 1, tallies.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Tally& t = tallies.at({rows[i][0], rows[i][1]});
    EXPECT_EQ(std::stoi(rows[i][2]), t.count);
    EXPECT_EQ(std::stoi(rows[i][3]), t.passed);
    EXPECT_EQ(std::stoi(rows[i][4]), t.failed);
    EXPECT_EQ(std::stoi(rows[i][5]), t.skipped);
    EXPECT_EQ(parse_double(rows[i][6]), t.max) << rows[i][1];
  }
}

TEST(Report, ProfilesFollowTheJoinProfile) {
  const VerificationReport r = run(config_from("family.kind = riemannian_join\nfamily.n = 4\nrun.samples = 25\n"
                                               "run.suites = killing\n"));
  const auto rows = csv_rows(to_csv_profiles(r));
  ASSERT_EQ(rows.front(), (std::vector<std::string>{"s", "gamma", "lambda", "xi_norm", "f", "K_sample"}));
  ASSERT_EQ(rows.size(), 26u);
  double last = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s = parse_double(rows[i][0]);
    EXPECT_GE(s, last);
    last = s;
    EXPECT_NEAR(parse_double(rows[i][1]), std::sin(s), 1e-14);
    EXPECT_NEAR(parse_double(rows[i][2]), std::cos(s), 1e-10);
    EXPECT_NEAR(parse_double(rows[i][3]), std::cos(s), 1e-10);
    EXPECT_NEAR(parse_double(rows[i][5]), 1.0, 1e-8);
  }
}

TEST(Report, ProfilesLeaveInapplicableColumnsEmpty) {
  const VerificationReport r = run(config_from("family.kind = round_sphere\nrun.samples = 3\nrun.suites = killing\n"));
  for (const auto& row : csv_rows(to_csv_profiles(r))) {
    ASSERT_EQ(row.size(), 6u);
    if (row[0] == "s") continue;
    EXPECT_TRUE(row[1].empty());
    EXPECT_TRUE(row[2].empty());
  }
}

TEST(Cli, ExitCodes) {
  const fs::path ok = scratch_dir("ok");
  EXPECT_EQ(run_cli(kSasakian, ok), 0) << slurp(ok / "stderr.txt");
  EXPECT_TRUE(fs::exists(ok / "report.json"));

  const fs::path bad = scratch_dir("fail");
  EXPECT_EQ(run_cli("family.kind = round_sphere\nfamily.perturbation = 0.1\nrun.samples = 10\n", bad), 1);

  const fs::path broken = scratch_dir("construct");
  EXPECT_EQ(run_cli("family.kind = riemannian_join\nfamily.n = 4\nfamily.gamma.kind = polynomial\n"
                    "family.gamma.coeffs = [0, 1, 1]\n",
                    broken),
            2);
  EXPECT_NE(slurp(broken / "stderr.txt").find("origin"), std::string::npos);

  const fs::path invalid = scratch_dir("invalid");
  EXPECT_EQ(run_cli("run.samples = 0\n", invalid), 2);
  EXPECT_NE(slurp(invalid / "stderr.txt").find("run.samples"), std::string::npos);
}

TEST(Cli, FormatsAndOverrides) {
  const fs::path dir = scratch_dir("formats");
  ASSERT_EQ(run_cli(kSasakian, dir, "--format csv-summary --samples 7 --seed 3"), 0);
  const auto rows = csv_rows(slurp(dir / "summary.csv"));
  ASSERT_GT(rows.size(), 1u);
  ASSERT_EQ(run_cli(kSasakian, dir, "--format json --samples 7 --seed 3"), 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(j["config"]["run"]["samples"], 7);
  EXPECT_EQ(j["seed"], 3);
  EXPECT_NE(run_cli(kSasakian, dir, "--format yaml"), 0);
}

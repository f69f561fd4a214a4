#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "linksim/cli.hpp"
#include "linksim/config.hpp"
#include "test_helpers.hpp"

using namespace linksim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("linksim_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("parse_config") {
  std::istringstream in(
      "# experiment\n"
      "name = quarter\n"
      "boosted_rbs = 1:12\n"
      "boost_db = 3\n"
      "snr_points_db = -4:2:4   # range form\n"
      "aggregation_levels = 1, 2\n"
      "lambda = 1.5\n"
      "lambda_per_al = 2:0.8\n"
      "estimation_mode = estimated\n"
      "snr_window = pdcch\n"
      "master_seed = 18446744073709551615\n");
  const auto cfg = parse_config(in, "test");
  CHECK(cfg.name == "quarter");
  CHECK(cfg.boosted_rbs.size() == 12);
  CHECK(cfg.boosted_rbs.back() == 12);
  CHECK(cfg.snr_points_db == std::vector<double>{-4, -2, 0, 2, 4});
  CHECK(cfg.aggregation_levels == std::vector<int>{1, 2});
  CHECK(cfg.lambda.for_al(1) == 1.5);
  CHECK(cfg.lambda.for_al(2) == 0.8);
  CHECK(cfg.estimation == EstimationMode::kEstimated);
  CHECK(cfg.snr_window == SnrWindow::kPdcch);
  CHECK(cfg.master_seed == 18446744073709551615ULL);
  CHECK(cfg.regb_sizes == std::vector<int>{2, 3, 6});
}

TEST_CASE("parse_config reports every problem") {
  std::istringstream in("regb_sizes = 4\nbogus = 1\nn_trials = many\nnot a setting\n");
  try {
    parse_config(in, "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto& p = e.problems();
    REQUIRE(p.size() == 4);
    CHECK(p[0].find("unknown key 'bogus'; valid keys: name, n_rb") == 0);
    CHECK(p[1] == "n_trials: expected an integer");
    CHECK(p[2] == "bad.cfg:4: expected key=value");
    CHECK(p[3] == "regb_sizes: 4 not in allowed set {2,3,6}");
  }
}

TEST_CASE("apply_overrides") {
  ScenarioConfig cfg;
  apply_overrides(cfg, {"regb_sizes=2,3,6", "n_trials=7"});
  CHECK(cfg.n_trials == 7);
  CHECK_THROWS_AS(apply_overrides(cfg, {"regb_sizes=2,4"}), ConfigError);
  CHECK_THROWS_AS(apply_overrides(cfg, {"n_trials"}), ConfigError);
}

TEST_CASE("reproduction presets") {
  const auto scenarios = paper_repro_scenarios();
  REQUIRE(scenarios.size() == 3);
  CHECK(scenarios[0].boosted_rbs.empty());
  CHECK(scenarios[1].boosted_rbs.size() == 12);
  CHECK(scenarios[2].boosted_rbs.size() == 24);
  CHECK(scenarios[2].aggregation_levels == std::vector<int>{1, 2});
  for (const auto& s : scenarios) {
    CHECK(validation_errors(s).empty());
    CHECK(s.n_tx == 2);
    CHECK(s.n_rx == 1);
    CHECK(s.n_rb == 48);
    CHECK(s.master_seed == kPaperReproSeed);
  }
}

TEST_CASE("cli run and validate-config") {
  TempDir dir;
  const auto cfg = dir.write("flat.cfg",
                             "name = flat\naggregation_levels = 1\nsnr_points_db = 0,10\n"
                             "n_trials = 20\n");

  SUBCASE("seed flag and overrides") {
    const auto out = dir.path / "out.csv";
    const auto r = cli({"run", "--config", cfg.string(), "--out", out.string(), "--seed", "42",
                        "--set", "regb_sizes=2,6"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(r.out == "wrote 4 rows to " + out.string() + "\n");
    const std::string csv = read_file(out);
    CHECK(csv.find(",42\n") != std::string::npos);
    CHECK(csv.find("flat,1,3,") == std::string::npos);
  }
  SUBCASE("validate-config") {
    const auto r = cli({"validate-config", "--config", cfg.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("config ok: flat, 6 points") == 0);
  }
  SUBCASE("domain violation exits 2 citing the allowed set") {
    const auto bad = dir.write("bad.cfg", "regb_sizes = 4\n");
    const auto r = cli({"validate-config", "--config", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("regb_sizes: 4 not in allowed set {2,3,6}") != std::string::npos);
  }
  SUBCASE("missing config file exits 2") {
    const auto r = cli({"run", "--config", (dir.path / "nope.cfg").string(), "--out", "x.csv"});
    CHECK(r.code == 2);
    CHECK(r.err.find("cannot open") != std::string::npos);
  }
  SUBCASE("missing profile exits 2 with a hint") {
    const auto c = dir.write("p.cfg", "pdp_file = missing_profile.pdp\n");
    const auto r = cli({"validate-config", "--config", c.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("LINKSIM_DATA_DIR") != std::string::npos);
  }
  SUBCASE("usage errors exit 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"run", "--config", cfg.string()}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
  }
  SUBCASE("unwritable output is a runtime error") {
    const auto blocker = dir.write("file", "x");
    const auto r = cli({"run", "--config", cfg.string(), "--out", (blocker / "o.csv").string()});
    CHECK(r.code == 1);
  }
}

TEST_CASE("cli paper-repro writes three deterministic CSVs") {
  TempDir dir;
  const std::vector<std::string> common{"--set", "n_trials=3", "--set", "snr_points_db=0,10"};
  auto args = std::vector<std::string>{"paper-repro", "--out", (dir.path / "a").string(),
                                       "--workers", "1"};
  args.insert(args.end(), common.begin(), common.end());
  REQUIRE(cli(args).code == 0);
  args = {"paper-repro", "--out", (dir.path / "b").string(), "--workers", "4"};
  args.insert(args.end(), common.begin(), common.end());
  REQUIRE(cli(args).code == 0);

  const std::vector<std::pair<std::string, int>> expected{
      {"flat.csv", 4}, {"boost_1_12.csv", 4}, {"boost_1_24.csv", 2}};
  for (const auto& [file, als] : expected) {
    const std::string a = read_file(dir.path / "a" / file);
    CHECK(a == read_file(dir.path / "b" / file));
    const auto lines = std::count(a.begin(), a.end(), '\n');
    CHECK(lines == 1 + 3 * 2 * als);
  }
  const std::string flat = read_file(dir.path / "a" / "flat.csv");
  for (int al : {1, 2, 4, 8}) {
    for (int regb : {2, 3, 6}) {
      for (const char* snr : {"0", "10"}) {
        const std::string key = "flat," + std::to_string(al) + "," + std::to_string(regb) + "," + snr + ",";
        CHECK(flat.find(key) != std::string::npos);
      }
    }
  }
}

TEST_CASE("LINKSIM_DATA_DIR locates profiles") {
  TempDir dir;
  std::ofstream(dir.path / "one.pdp") << "# name one\n0 0\n";
  ::setenv("LINKSIM_DATA_DIR", dir.path.c_str(), 1);
  CHECK(resolve_data_path("one.pdp") == dir.path / "one.pdp");
  const auto c = dir.write("c.cfg", "pdp_file = one.pdp\n");
  const auto r = cli({"validate-config", "--config", c.string()});
  ::unsetenv("LINKSIM_DATA_DIR");
  CHECK(r.code == 0);
  CHECK(r.out.find("1-tap profile one") != std::string::npos);
}

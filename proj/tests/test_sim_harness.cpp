#include <doctest.h>

#include <sstream>

#include "linksim/sim_harness.hpp"
#include "test_helpers.hpp"

using namespace linksim;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig cfg;
  cfg.name = "unit";
  cfg.aggregation_levels = {1, 2};
  cfg.regb_sizes = {2, 3, 6};
  cfg.snr_points_db = {0, 5, 10, 15, 20};
  cfg.n_trials = 40;
  cfg.master_seed = 99;
  return cfg;
}

std::string csv_of(const std::vector<SweepResultRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

}  // namespace

TEST_CASE("stream keys separate every coordinate") {
  const auto a = stream_key(1, StreamTag::kChannel, {1, 2, 3});
  CHECK(a == stream_key(1, StreamTag::kChannel, {1, 2, 3}));
  CHECK(a != stream_key(2, StreamTag::kChannel, {1, 2, 3}));
  CHECK(a != stream_key(1, StreamTag::kNoise, {1, 2, 3}));
  CHECK(a != stream_key(1, StreamTag::kChannel, {2, 1, 3}));
  CHECK(a != stream_key(1, StreamTag::kChannel, {1, 2, 3, 0}));
  RngStream s(a);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("config validation names each bad field") {
  ScenarioConfig cfg = small_config();
  CHECK(validation_errors(cfg).empty());
  cfg.regb_sizes = {4};
  cfg.aggregation_levels = {3};
  cfg.n_trials = 0;
  cfg.lambda.global = -1;
  const auto problems = validation_errors(cfg);
  REQUIRE(problems.size() == 4);
  CHECK(problems[0].find("aggregation_levels") == 0);
  CHECK(problems[1] == "regb_sizes: 4 not in allowed set {2,3,6}");
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("run_trial") {
  const auto pdp = testing_support::tdl_a();
  const Simulator sim(small_config(), pdp);

  SUBCASE("deterministic") {
    const auto a = sim.run_trial(2, 3, 7.0, 12);
    const auto b = sim.run_trial(2, 3, 7.0, 12);
    CHECK(a.gamma_eff == b.gamma_eff);
    CHECK(a.meta.trial == 12);
    CHECK(a.meta.regb_size == 3);
    CHECK(a.meta.scenario == "unit");
    CHECK(a.meta.seed == 99);
    CHECK(a.gamma_eff != sim.run_trial(2, 3, 7.0, 13).gamma_eff);
  }
  SUBCASE("near-noiseless at 60 dB") {
    for (int regb : {2, 3, 6}) {
      for (std::uint64_t t = 0; t < 5; ++t) CHECK(sim.run_trial(1, regb, 60.0, t).gamma_eff >= 1e4);
    }
  }
  SUBCASE("zero boost equals an empty boosted set") {
    ScenarioConfig zero = small_config();
    zero.boosted_rbs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    zero.boost_db = 0.0;
    const Simulator other(zero, pdp);
    for (std::uint64_t t = 0; t < 10; ++t) {
      CHECK(other.run_trial(1, 2, 3.0, t).gamma_eff == sim.run_trial(1, 2, 3.0, t).gamma_eff);
    }
  }
  SUBCASE("grid size is 18 per CCE") {
    for (int regb : {2, 3, 6}) {
      CHECK(sim.trial_grid(2, regb, 5.0, 0).n_rs() == 36);
    }
  }
  SUBCASE("regb sizes outside the scenario are rejected") {
    ScenarioConfig only6 = small_config();
    only6.regb_sizes = {6};
    CHECK_THROWS_AS(Simulator(only6, pdp).run_trial(1, 2, 0.0, 0), std::invalid_argument);
  }
}

TEST_CASE("estimated-statistics mode and PDCCH-wide SNR window run") {
  const auto pdp = testing_support::tdl_a();
  ScenarioConfig cfg = small_config();
  cfg.estimation = EstimationMode::kEstimated;
  const Simulator est(cfg, pdp);
  cfg.estimation = EstimationMode::kGenie;
  cfg.snr_window = SnrWindow::kPdcch;
  const Simulator wide(cfg, pdp);
  const Simulator genie(small_config(), pdp);
  for (int regb : {2, 3, 6}) {
    const double g = genie.run_trial(2, regb, 10.0, 1).gamma_eff;
    const double e = est.run_trial(2, regb, 10.0, 1).gamma_eff;
    const double w = wide.run_trial(2, regb, 10.0, 1).gamma_eff;
    CHECK(e > 0.0);
    CHECK(w > 0.0);
    CHECK(std::abs(10 * std::log10(e / g)) < 10.0);
  }
  CHECK(est.run_trial(1, 6, 60.0, 0).gamma_eff >= 1e4);
}

TEST_CASE("run_sweep") {
  const auto pdp = testing_support::tdl_a();
  const Simulator sim(small_config(), pdp);
  const auto rows = sim.run_sweep(1);
  CHECK(rows.size() == 30);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    CHECK(std::tie(a.al, a.regb_size, a.snr_db) < std::tie(b.al, b.regb_size, b.snr_db));
  }
  for (const auto& r : rows) {
    CHECK(r.stderr_db >= 0.0);
    CHECK(r.n_trials == 40);
  }

  SUBCASE("worker count does not change results") {
    CHECK(csv_of(sim.run_sweep(3)) == csv_of(rows));
  }
  SUBCASE("same seed gives byte-identical CSV") {
    CHECK(csv_of(Simulator(small_config(), pdp).run_sweep(1)) == csv_of(rows));
  }
  SUBCASE("run_point agrees with the sweep") {
    const auto gamma = sim.run_point(2, 6, 10.0, 2);
    const auto row = summarize(sim.config(), 2, 6, 10.0, gamma);
    const auto it = std::find_if(rows.begin(), rows.end(), [](const SweepResultRow& r) {
      return r.al == 2 && r.regb_size == 6 && r.snr_db == 10.0;
    });
    REQUIRE(it != rows.end());
    CHECK(row.mean_eesm_db == it->mean_eesm_db);
  }
  SUBCASE("mean EESM is non-decreasing in SNR") {
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& a = rows[i - 1];
      const auto& b = rows[i];
      if (a.al != b.al || a.regb_size != b.regb_size) continue;
      CHECK(b.mean_eesm_db >= a.mean_eesm_db - 2 * std::hypot(a.stderr_db, b.stderr_db));
    }
  }
}

TEST_CASE("standard error at 2000 trials, flat AL1, 10 dB") {
  ScenarioConfig cfg = small_config();
  cfg.n_trials = 2000;
  cfg.master_seed = 2017;
  const Simulator sim(cfg, testing_support::tdl_a());
  for (int regb : {2, 3, 6}) {
    const auto row = summarize(cfg, 1, regb, 10.0, sim.run_point(1, regb, 10.0));
    CAPTURE(regb);
    CHECK(row.stderr_db < 0.2);
  }
}

TEST_CASE("summarize and CSV format") {
  ScenarioConfig cfg = small_config();
  const std::vector<double> gamma{1.0, 10.0, 100.0};
  const auto row = summarize(cfg, 4, 3, -2.0, gamma);
  CHECK(row.mean_eesm_db == doctest::Approx(10.0));
  CHECK(row.linear_mean_eesm_db == doctest::Approx(10 * std::log10(37.0)));
  CHECK(row.stderr_db == doctest::Approx(10.0 / std::sqrt(3.0)));
  CHECK(summarize(cfg, 1, 2, 0.0, std::vector<double>{5.0}).stderr_db == 0.0);
  CHECK(to_db(0.0) == -300.0);

  const std::vector<SweepResultRow> rows{row};
  CHECK(csv_of(rows) ==
        "scenario,al,regb_size,snr_db,mean_eesm_db,linear_mean_eesm_db,stderr_db,n_trials,master_seed\n"
        "unit,4,3,-2,10,15.682,5.7735,3,99\n");
}

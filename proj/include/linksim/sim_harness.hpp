#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "linksim/channel_estimation.hpp"
#include "linksim/channel_model.hpp"
#include "linksim/link_abstraction.hpp"

namespace linksim {

enum class EstimationMode { kGenie, kEstimated };

/// Averaging window of the residual power in the SNR estimate.
enum class SnrWindow { kBundle, kPdcch };

struct LambdaSetting {
  double global = 1.0;
  std::map<int, double> per_al;

  double for_al(int aggregation_level) const;
};

/// -10, -8, ..., 20 dB.
std::vector<double> default_snr_points_db();

struct ScenarioConfig {
  std::string name = "flat";
  int n_rb = 48;
  int n_symbols = 1;
  std::string pdp_file = "tdl_a.pdp";
  int n_tx = 2;
  int n_rx = 1;
  std::vector<int> boosted_rbs;  // 1-based
  double boost_db = 0.0;
  std::vector<double> snr_points_db = default_snr_points_db();
  std::vector<int> aggregation_levels{1, 2, 4, 8};
  std::vector<int> regb_sizes{2, 3, 6};
  LambdaSetting lambda;
  int n_trials = 5000;
  std::uint64_t master_seed = 1;
  EstimationMode estimation = EstimationMode::kGenie;
  SnrWindow snr_window = SnrWindow::kBundle;
};

/// Validation failure carrying one message per offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Empty when the configuration is usable; otherwise "field: reason" entries.
std::vector<std::string> validation_errors(const ScenarioConfig& config);
void validate(const ScenarioConfig& config);

struct SweepResultRow {
  std::string scenario;
  int al = 0;
  int regb_size = 0;
  double snr_db = 0.0;
  double mean_eesm_db = 0.0;
  double linear_mean_eesm_db = 0.0;
  double stderr_db = 0.0;
  int n_trials = 0;
  std::uint64_t master_seed = 0;
};

/// Aggregates per-trial linear γ_eff into one row.
SweepResultRow summarize(const ScenarioConfig& config, int al, int regb_size, double snr_db,
                         std::span<const double> gamma_eff);

/// 10 log10(γ), floored at -300 dB for a zero γ.
double to_db(double linear);

inline constexpr const char* kCsvHeader =
    "scenario,al,regb_size,snr_db,mean_eesm_db,linear_mean_eesm_db,stderr_db,n_trials,master_seed";

void write_csv(std::ostream& out, std::span<const SweepResultRow> rows);

/// Runs trials of one scenario. Every trial is a pure function of
/// (master_seed, al, regb_size, snr_db, trial index): channel and noise
/// streams omit regb_size so all bundle sizes see the same fading and noise
/// draws; precoder and pilot streams include it.
class Simulator {
 public:
  Simulator(ScenarioConfig config, PowerDelayProfile pdp, OfdmNumerology numerology = {});

  const ScenarioConfig& config() const { return config_; }
  const PowerDelayProfile& pdp() const { return pdp_; }
  const RegbCorrelation& correlation(int regb_size) const;

  SnrGrid trial_grid(int al, int regb_size, double snr_db, std::uint64_t trial) const;
  EesmRecord run_trial(int al, int regb_size, double snr_db, std::uint64_t trial) const;

  /// Linear γ_eff of trials 0..n_trials-1, in trial order.
  std::vector<double> run_point(int al, int regb_size, double snr_db, int workers = 0) const;

  /// One row per (al, regb_size, snr) sorted ascending; identical for any
  /// worker count.
  std::vector<SweepResultRow> run_sweep(int workers = 0) const;

 private:
  ScenarioConfig config_;
  PowerDelayProfile pdp_;
  OfdmNumerology numerology_;
  std::map<int, RegbCorrelation> correlations_;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). Each index is processed exactly once.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn);

}  // namespace linksim

#include "linksim/detail/parallel_for.hpp"

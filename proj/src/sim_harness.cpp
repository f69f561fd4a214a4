#include "linksim/sim_harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "linksim/resource_map.hpp"
#include "linksim/rng.hpp"
#include "linksim/signal_synthesis.hpp"

namespace linksim {
namespace {

constexpr std::size_t kTrialBlock = 250;
constexpr double kDbFloor = -300.0;

std::string join_problems(const std::vector<std::string>& problems) {
  std::string text = "invalid configuration:";
  for (const auto& p : problems) text += "\n  " + p;
  return text;
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::string format_g6(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

}  // namespace

double LambdaSetting::for_al(int aggregation_level) const {
  const auto it = per_al.find(aggregation_level);
  return it == per_al.end() ? global : it->second;
}

std::vector<double> default_snr_points_db() {
  std::vector<double> points;
  for (int snr = -10; snr <= 20; snr += 2) points.push_back(snr);
  return points;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validation_errors(const ScenarioConfig& config) {
  std::vector<std::string> problems;
  const auto problem = [&](const std::string& field, const std::string& why) {
    problems.push_back(field + ": " + why);
  };

  if (config.name.empty() || config.name.find_first_of(",\n\r\"") != std::string::npos) {
    problem("name", "must be non-empty and free of commas, quotes and newlines");
  }
  if (config.n_symbols != 1) problem("n_symbols", "only single-symbol CORESETs are supported");
  if (config.n_rb <= 0 || config.n_rb % kRegsPerCce != 0) {
    problem("n_rb", "must be a positive multiple of 6");
  } else if (config.n_rb < kRegsPerCce * kMaxAggregationLevel) {
    problem("n_rb", "must be at least 48 to hold one PDCCH at aggregation level 8");
  }
  if (config.pdp_file.empty()) problem("pdp_file", "must name a power delay profile file");
  if (config.n_tx < 1) problem("n_tx", "must be >= 1");
  if (config.n_rx < 1) problem("n_rx", "must be >= 1");
  for (int rb : config.boosted_rbs) {
    if (rb < 1 || rb > config.n_rb) {
      problem("boosted_rbs", "RB " + std::to_string(rb) + " outside [1, n_rb]");
      break;
    }
  }
  if (!std::isfinite(config.boost_db)) problem("boost_db", "must be finite");
  if (config.snr_points_db.empty()) problem("snr_points_db", "must list at least one point");
  for (double snr : config.snr_points_db) {
    if (!std::isfinite(snr)) {
      problem("snr_points_db", "values must be finite");
      break;
    }
  }
  if (config.aggregation_levels.empty()) {
    problem("aggregation_levels", "must list at least one level");
  }
  for (int al : config.aggregation_levels) {
    if (!is_valid_aggregation_level(al)) {
      problem("aggregation_levels", std::to_string(al) + " not in allowed set {1,2,4,8}");
    }
  }
  if (config.regb_sizes.empty()) problem("regb_sizes", "must list at least one size");
  for (int regb : config.regb_sizes) {
    if (!is_valid_regb_size(regb)) {
      problem("regb_sizes", std::to_string(regb) + " not in allowed set {2,3,6}");
    }
  }
  if (!(config.lambda.global > 0.0) || !std::isfinite(config.lambda.global)) {
    problem("lambda", "must be positive");
  }
  for (const auto& [al, value] : config.lambda.per_al) {
    if (!is_valid_aggregation_level(al)) {
      problem("lambda_per_al", "aggregation level " + std::to_string(al) + " not in {1,2,4,8}");
    }
    if (!(value > 0.0) || !std::isfinite(value)) problem("lambda_per_al", "values must be positive");
  }
  if (config.n_trials < 1) problem("n_trials", "must be >= 1");
  return problems;
}

void validate(const ScenarioConfig& config) {
  auto problems = validation_errors(config);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

double to_db(double linear) {
  if (!(linear > 0.0)) return kDbFloor;
  return std::max(10.0 * std::log10(linear), kDbFloor);
}

SweepResultRow summarize(const ScenarioConfig& config, int al, int regb_size, double snr_db,
                         std::span<const double> gamma_eff) {
  SweepResultRow row;
  row.scenario = config.name;
  row.al = al;
  row.regb_size = regb_size;
  row.snr_db = snr_db;
  row.n_trials = static_cast<int>(gamma_eff.size());
  row.master_seed = config.master_seed;
  if (gamma_eff.empty()) return row;

  const double n = static_cast<double>(gamma_eff.size());
  double sum_db = 0.0;
  double sum_linear = 0.0;
  for (double g : gamma_eff) {
    sum_db += to_db(g);
    sum_linear += g;
  }
  row.mean_eesm_db = sum_db / n;
  row.linear_mean_eesm_db = to_db(sum_linear / n);
  if (gamma_eff.size() > 1) {
    double ss = 0.0;
    for (double g : gamma_eff) {
      const double d = to_db(g) - row.mean_eesm_db;
      ss += d * d;
    }
    row.stderr_db = std::sqrt(ss / (n - 1.0) / n);
  }
  return row;
}

void write_csv(std::ostream& out, std::span<const SweepResultRow> rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.al << ',' << r.regb_size << ',' << format_g6(r.snr_db) << ','
        << format_g6(r.mean_eesm_db) << ',' << format_g6(r.linear_mean_eesm_db) << ','
        << format_g6(r.stderr_db) << ',' << r.n_trials << ',' << r.master_seed << '\n';
  }
}

Simulator::Simulator(ScenarioConfig config, PowerDelayProfile pdp, OfdmNumerology numerology)
    : config_(std::move(config)), pdp_(std::move(pdp)), numerology_(numerology) {
  validate(config_);
  linksim::validate(numerology_);
  const int grid_subcarriers = config_.n_rb * kSubcarriersPerRb;
  if (grid_subcarriers > numerology_.fft_size) {
    throw std::invalid_argument("CORESET wider than the FFT size");
  }
  for (int regb : sorted_unique(config_.regb_sizes)) {
    const auto pattern = dmrs_pattern(regb);
    correlations_.emplace(regb, build_regb_correlation(pdp_, numerology_, pattern));
  }
}

const RegbCorrelation& Simulator::correlation(int regb_size) const {
  const auto it = correlations_.find(regb_size);
  if (it == correlations_.end()) {
    throw std::invalid_argument("regb_size " + std::to_string(regb_size) +
                                " not part of this scenario");
  }
  return it->second;
}

SnrGrid Simulator::trial_grid(int al, int regb_size, double snr_db, std::uint64_t trial) const {
  const CoresetConfig coreset{config_.n_rb, config_.n_symbols, kSubcarriersPerRb, regb_size};
  const PdcchAllocation alloc = allocate_pdcch(coreset, al, 0);
  const RegbCorrelation& corr = correlation(regb_size);
  const std::uint64_t seed = config_.master_seed;
  const auto al_key = static_cast<std::uint64_t>(al);
  const auto regb_key = static_cast<std::uint64_t>(regb_size);
  const auto snr_key = std::bit_cast<std::uint64_t>(snr_db);

  RngStream channel_rng(stream_key(seed, StreamTag::kChannel, {al_key, snr_key, trial}));
  RngStream precoder_rng(
      stream_key(seed, StreamTag::kPrecoder, {al_key, regb_key, snr_key, trial}));
  RngStream pilot_rng(stream_key(seed, StreamTag::kPilot, {al_key, regb_key, snr_key, trial}));

  const ChannelRealization channel =
      draw_realization(pdp_, numerology_, config_.n_tx, config_.n_rx, channel_rng);
  const std::size_t n_bundles = alloc.bundle_count();
  const PrecoderSchedule schedule =
      draw_precoders(static_cast<int>(n_bundles), config_.n_tx, precoder_rng);
  const InterferenceProfile interference = build_interference_profile(
      config_.n_rb, std::pow(10.0, -snr_db / 10.0), config_.boosted_rbs, config_.boost_db);

  const int d = alloc.dmrs_per_bundle();
  // terms[rx][m]
  std::vector<std::vector<SnrTerms>> terms(static_cast<std::size_t>(config_.n_rx),
                                           std::vector<SnrTerms>(n_bundles));
  std::vector<cplx> noise(static_cast<std::size_t>(d));

  for (std::size_t m = 0; m < n_bundles; ++m) {
    const CVector pilots = generate_dmrs(alloc, m, pilot_rng);
    const RVector re_variance = dmrs_noise_variance(interference, alloc, m);
    for (int rx = 0; rx < config_.n_rx; ++rx) {
      // Noise is drawn per (rx, RB) so every bundle size sees the same
      // sample at a given CORESET RE.
      int current_rb = -1;
      RngStream noise_rng(0);
      for (int j = 0; j < d; ++j) {
        const int rb = alloc.grid_rb(m, static_cast<std::size_t>(j));
        if (rb != current_rb) {
          current_rb = rb;
          noise_rng = RngStream(stream_key(seed, StreamTag::kNoise,
                                           {al_key, snr_key, trial,
                                            static_cast<std::uint64_t>(rx),
                                            static_cast<std::uint64_t>(rb)}));
        }
        noise[static_cast<std::size_t>(j)] = noise_rng.complex_normal(1.0);
      }

      const CVector effective = effective_channel(channel, alloc, schedule, m, rx);
      const DmrsObservation obs = synthesize_observation(effective, pilots, re_variance, noise);

      EstimationResult est;
      if (config_.estimation == EstimationMode::kGenie) {
        est = mmse_estimate(obs, corr);
      } else {
        const EstimationResult ls = ls_estimate(obs);
        double sigma2 = obs.noise_variance;
        try {
          sigma2 = estimate_noise_variance(ls, obs, corr);
        } catch (const std::domain_error&) {
          // no noise subspace: keep the true variance
        }
        est = mmse_estimate(obs, corr, sigma2);
      }
      terms[static_cast<std::size_t>(rx)][m] = snr_terms(obs, est.estimate);
    }
  }

  SnrGrid grid(d);
  std::vector<double> pdcch_residual(static_cast<std::size_t>(config_.n_rx), 0.0);
  if (config_.snr_window == SnrWindow::kPdcch) {
    for (int rx = 0; rx < config_.n_rx; ++rx) {
      double sum = 0.0;
      for (const auto& t : terms[static_cast<std::size_t>(rx)]) sum += t.residual.sum();
      pdcch_residual[static_cast<std::size_t>(rx)] =
          std::max(sum / static_cast<double>(n_bundles * d), kResidualFloor);
    }
  }
  std::vector<std::vector<double>> per_antenna(static_cast<std::size_t>(config_.n_rx));
  for (std::size_t m = 0; m < n_bundles; ++m) {
    for (int rx = 0; rx < config_.n_rx; ++rx) {
      const SnrTerms& t = terms[static_cast<std::size_t>(rx)][m];
      const double denominator = config_.snr_window == SnrWindow::kPdcch
                                     ? pdcch_residual[static_cast<std::size_t>(rx)]
                                     : std::max(t.residual.mean(), kResidualFloor);
      auto& snr = per_antenna[static_cast<std::size_t>(rx)];
      snr.resize(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) snr[static_cast<std::size_t>(j)] = t.signal[j] / denominator;
    }
    grid.add_bundle(combine_mrc(per_antenna));
  }
  return grid;
}

EesmRecord Simulator::run_trial(int al, int regb_size, double snr_db, std::uint64_t trial) const {
  EesmRecord record = eesm(trial_grid(al, regb_size, snr_db, trial), config_.lambda.for_al(al));
  record.meta = {config_.name, al, regb_size, snr_db, trial, config_.master_seed};
  return record;
}

std::vector<double> Simulator::run_point(int al, int regb_size, double snr_db,
                                         int workers) const {
  const auto n = static_cast<std::size_t>(config_.n_trials);
  std::vector<double> gamma(n);
  const std::size_t blocks = (n + kTrialBlock - 1) / kTrialBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    for (std::size_t t = b * kTrialBlock; t < std::min(n, (b + 1) * kTrialBlock); ++t) {
      gamma[t] = run_trial(al, regb_size, snr_db, t).gamma_eff;
    }
  });
  return gamma;
}

std::vector<SweepResultRow> Simulator::run_sweep(int workers) const {
  struct Point {
    int al;
    int regb;
    double snr_db;
  };
  std::vector<Point> points;
  for (int al : sorted_unique(config_.aggregation_levels)) {
    for (int regb : sorted_unique(config_.regb_sizes)) {
      for (double snr : sorted_unique(config_.snr_points_db)) points.push_back({al, regb, snr});
    }
  }

  const auto n = static_cast<std::size_t>(config_.n_trials);
  const std::size_t blocks_per_point = (n + kTrialBlock - 1) / kTrialBlock;
  std::vector<std::vector<double>> gamma(points.size(), std::vector<double>(n));
  parallel_for(points.size() * blocks_per_point, workers, [&](std::size_t item) {
    const std::size_t p = item / blocks_per_point;
    const std::size_t b = item % blocks_per_point;
    const Point& pt = points[p];
    for (std::size_t t = b * kTrialBlock; t < std::min(n, (b + 1) * kTrialBlock); ++t) {
      gamma[p][t] = run_trial(pt.al, pt.regb, pt.snr_db, t).gamma_eff;
    }
  });

  std::vector<SweepResultRow> rows;
  rows.reserve(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    rows.push_back(summarize(config_, points[p].al, points[p].regb, points[p].snr_db, gamma[p]));
  }
  return rows;
}

}  // namespace linksim

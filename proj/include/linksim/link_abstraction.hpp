#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace linksim {

/// Combined per-DMRS SNRs of one PDCCH, bundle-major.
class SnrGrid {
 public:
  explicit SnrGrid(int dmrs_per_bundle);

  /// Appends one bundle's D combined SNRs.
  void add_bundle(std::span<const double> snrs);

  const std::vector<double>& values() const { return values_; }
  int dmrs_per_bundle() const { return dmrs_per_bundle_; }
  std::size_t bundle_count() const { return values_.size() / dmrs_per_bundle_; }
  std::size_t n_rs() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

 private:
  int dmrs_per_bundle_;
  std::vector<double> values_;
};

/// Maximum-ratio combining of per-antenna SNRs: elementwise sum over antennas.
std::vector<double> combine_mrc(std::span<const std::vector<double>> per_antenna);

struct TrialMetadata {
  std::string scenario;
  int aggregation_level = 0;
  int regb_size = 0;
  double snr_db = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
};

struct EesmRecord {
  double gamma_eff = 0.0;  // linear
  double lambda = 1.0;
  TrialMetadata meta;
};

/// γ_eff = -λ ln( (1/N) Σ exp(-γ_i / λ) ), evaluated relative to min γ so
/// that neither tiny nor huge λ under- or overflows.
double eesm_value(std::span<const double> snrs, double lambda);

EesmRecord eesm(const SnrGrid& grid, double lambda);

}  // namespace linksim

#include "linksim/link_abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linksim {

SnrGrid::SnrGrid(int dmrs_per_bundle) : dmrs_per_bundle_(dmrs_per_bundle) {
  if (dmrs_per_bundle < 1) throw std::invalid_argument("dmrs_per_bundle must be >= 1");
}

void SnrGrid::add_bundle(std::span<const double> snrs) {
  if (static_cast<int>(snrs.size()) != dmrs_per_bundle_) {
    throw std::invalid_argument("bundle SNR count does not match dmrs_per_bundle");
  }
  for (double s : snrs) {
    if (!(s >= 0.0)) throw std::invalid_argument("SNR values must be non-negative");
  }
  values_.insert(values_.end(), snrs.begin(), snrs.end());
}

std::vector<double> combine_mrc(std::span<const std::vector<double>> per_antenna) {
  if (per_antenna.empty()) throw std::invalid_argument("no antennas to combine");
  std::vector<double> combined(per_antenna.front().size(), 0.0);
  for (const auto& antenna : per_antenna) {
    if (antenna.size() != combined.size()) {
      throw std::invalid_argument("per-antenna SNR vectors differ in length");
    }
    for (std::size_t j = 0; j < antenna.size(); ++j) {
      if (!(antenna[j] >= 0.0)) throw std::invalid_argument("SNR values must be non-negative");
      combined[j] += antenna[j];
    }
  }
  return combined;
}

double eesm_value(std::span<const double> snrs, double lambda) {
  if (snrs.empty()) throw std::invalid_argument("EESM of an empty SNR grid");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("EESM lambda must be positive");
  }
  const auto [lo, hi] = std::minmax_element(snrs.begin(), snrs.end());
  const double min_snr = *lo;
  // mean(exp(-(γ - min)/λ)) - 1, accumulated through expm1 to keep precision
  // when λ is large.
  double excess = 0.0;
  for (double s : snrs) excess += std::expm1(-(s - min_snr) / lambda);
  excess /= static_cast<double>(snrs.size());
  const double value = min_snr - lambda * std::log1p(excess);
  return std::clamp(value, min_snr, *hi);
}

EesmRecord eesm(const SnrGrid& grid, double lambda) {
  EesmRecord record;
  record.gamma_eff = eesm_value(grid.values(), lambda);
  record.lambda = lambda;
  return record;
}

}  // namespace linksim

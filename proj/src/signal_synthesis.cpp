#include "linksim/signal_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace linksim {

PrecoderSchedule draw_precoders(int n_bundles, int n_tx, RngStream& rng) {
  if (n_tx < 1) throw std::invalid_argument("n_tx must be >= 1");
  if (n_bundles < 0) throw std::invalid_argument("n_bundles must be >= 0");
  PrecoderSchedule schedule;
  schedule.precoders.reserve(static_cast<std::size_t>(n_bundles));
  for (int m = 0; m < n_bundles; ++m) {
    CVector g(n_tx);
    double norm = 0.0;
    // A zero draw has probability zero; redraw rather than divide by it.
    while (norm == 0.0) {
      for (int n = 0; n < n_tx; ++n) g[n] = rng.complex_normal(1.0);
      norm = g.norm();
    }
    schedule.precoders.push_back(g / norm);
  }
  return schedule;
}

InterferenceProfile build_interference_profile(int n_rb, double base_variance,
                                               std::vector<int> boosted_rbs, double boost_db) {
  if (n_rb <= 0) throw std::invalid_argument("n_rb must be positive");
  if (!(base_variance >= 0.0)) throw std::invalid_argument("base variance must be >= 0");
  std::sort(boosted_rbs.begin(), boosted_rbs.end());
  boosted_rbs.erase(std::unique(boosted_rbs.begin(), boosted_rbs.end()), boosted_rbs.end());
  for (int rb : boosted_rbs) {
    if (rb < 1 || rb > n_rb) {
      throw std::invalid_argument("boosted RB " + std::to_string(rb) + " outside [1, " +
                                  std::to_string(n_rb) + "]");
    }
  }

  InterferenceProfile profile;
  profile.base_variance = base_variance;
  profile.boost_db = boost_db;
  profile.variance.assign(static_cast<std::size_t>(n_rb), base_variance);
  const double boosted = base_variance * std::pow(10.0, boost_db / 10.0);
  for (int rb : boosted_rbs) profile.variance[static_cast<std::size_t>(rb - 1)] = boosted;
  profile.boosted_rbs = std::move(boosted_rbs);
  return profile;
}

RVector dmrs_noise_variance(const InterferenceProfile& profile, const PdcchAllocation& alloc,
                            std::size_t m) {
  const auto& pattern = alloc.dmrs_subcarriers.at(m);
  RVector var(static_cast<Eigen::Index>(pattern.size()));
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    var[static_cast<Eigen::Index>(j)] = profile.rb_variance(alloc.grid_rb(m, j));
  }
  return var;
}

bool DmrsObservation::homogeneous_noise() const {
  return re_noise_variance.size() == 0 ||
         (re_noise_variance.array() == re_noise_variance[0]).all();
}

CVector effective_channel(const ChannelRealization& channel, const PdcchAllocation& alloc,
                          const PrecoderSchedule& schedule, std::size_t regb, int rx) {
  const CVector& g = schedule.precoders.at(regb);
  if (g.size() != channel.n_tx()) {
    throw std::invalid_argument("precoder length does not match n_tx");
  }
  const auto& pattern = alloc.dmrs_subcarriers.at(regb);
  CVector h = CVector::Zero(static_cast<Eigen::Index>(pattern.size()));
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const int sc = alloc.grid_subcarrier(regb, k);
    for (int n = 0; n < channel.n_tx(); ++n) {
      h[static_cast<Eigen::Index>(k)] += channel.freq_response(n, rx, sc) * g[n];
    }
  }
  return h;
}

CVector generate_dmrs(const PdcchAllocation& alloc, std::size_t regb, RngStream& rng) {
  const auto d = static_cast<Eigen::Index>(alloc.dmrs_subcarriers.at(regb).size());
  const double a = std::numbers::sqrt2 / 2.0;
  CVector x(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto bits = rng();
    x[k] = cplx((bits & 1U) ? -a : a, (bits & 2U) ? -a : a);
  }
  return x;
}

namespace {

void check_dimensions(const CVector& effective, const CVector& pilots) {
  if (effective.size() != pilots.size()) {
    throw std::invalid_argument("pilot and channel lengths differ");
  }
}

}  // namespace

DmrsObservation synthesize_observation(const CVector& effective, const CVector& pilots,
                                       double noise_variance, RngStream& rng) {
  check_dimensions(effective, pilots);
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
  std::vector<cplx> unit(static_cast<std::size_t>(effective.size()));
  for (cplx& z : unit) z = rng.complex_normal(1.0);
  return synthesize_observation(effective, pilots,
                                RVector::Constant(effective.size(), noise_variance), unit);
}

DmrsObservation synthesize_observation(const CVector& effective, const CVector& pilots,
                                       const RVector& re_noise_variance,
                                       std::span<const cplx> unit_noise) {
  check_dimensions(effective, pilots);
  const Eigen::Index d = effective.size();
  if (re_noise_variance.size() != d || static_cast<Eigen::Index>(unit_noise.size()) != d) {
    throw std::invalid_argument("noise dimensions do not match the DMRS count");
  }
  if ((re_noise_variance.array() < 0.0).any()) {
    throw std::invalid_argument("noise variance must be >= 0");
  }
  DmrsObservation obs;
  obs.pilots = pilots;
  obs.true_channel = effective;
  obs.re_noise_variance = re_noise_variance;
  obs.noise_variance = d > 0 ? re_noise_variance.mean() : 0.0;
  obs.received.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    obs.received[k] = pilots[k] * effective[k] +
                      std::sqrt(re_noise_variance[k]) * unit_noise[static_cast<std::size_t>(k)];
  }
  return obs;
}

}  // namespace linksim

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "linksim/channel_model.hpp"
#include "linksim/resource_map.hpp"
#include "linksim/rng.hpp"

namespace linksim {

using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// One unit-norm precoder per bundle of the allocation.
struct PrecoderSchedule {
  std::vector<CVector> precoders;
};

/// Isotropic draws on the complex unit sphere (CN(0, I) then normalize).
PrecoderSchedule draw_precoders(int n_bundles, int n_tx, RngStream& rng);

/// Per-RB noise-plus-interference variance across the CORESET.
struct InterferenceProfile {
  std::vector<double> variance;   // indexed by 0-based RB
  double base_variance = 1.0;
  std::vector<int> boosted_rbs;   // 1-based
  double boost_db = 0.0;

  double rb_variance(int rb) const { return variance.at(static_cast<std::size_t>(rb)); }
};

/// boosted_rbs holds 1-based RB numbers; duplicates are ignored.
InterferenceProfile build_interference_profile(int n_rb, double base_variance,
                                               std::vector<int> boosted_rbs, double boost_db);

/// Noise variance of each DMRS RE of bundle m.
RVector dmrs_noise_variance(const InterferenceProfile& profile, const PdcchAllocation& alloc,
                            std::size_t m);

struct DmrsObservation {
  int regb_position = 0;
  int rx_antenna = 0;
  CVector received;           // y
  CVector pilots;             // diagonal of X, unit modulus
  RVector re_noise_variance;  // per-RE variance of z
  double noise_variance = 0;  // scalar sigma^2; equals every entry when homogeneous
  CVector true_channel;       // h-bar, genie diagnostics only

  Eigen::Index size() const { return received.size(); }
  bool homogeneous_noise() const;
};

/// h-bar[k] = sum_n h(subcarrier r_k, tx n, rx) * g_m[n].
CVector effective_channel(const ChannelRealization& channel, const PdcchAllocation& alloc,
                          const PrecoderSchedule& schedule, std::size_t regb, int rx);

/// i.i.d. uniform QPSK pilots, (+-1 +-j)/sqrt(2).
CVector generate_dmrs(const PdcchAllocation& alloc, std::size_t regb, RngStream& rng);

/// y = X h-bar + z with z ~ CN(0, noise_variance I).
DmrsObservation synthesize_observation(const CVector& effective, const CVector& pilots,
                                       double noise_variance, RngStream& rng);

/// Same model with per-RE variances and caller-supplied unit-variance noise
/// samples (z_k = sqrt(var_k) * unit_noise_k).
DmrsObservation synthesize_observation(const CVector& effective, const CVector& pilots,
                                       const RVector& re_noise_variance,
                                       std::span<const cplx> unit_noise);

}  // namespace linksim

#pragma once

#include <Eigen/Dense>
#include <span>

#include "linksim/channel_model.hpp"
#include "linksim/signal_synthesis.hpp"

namespace linksim {

using CMatrix = Eigen::MatrixXcd;

/// D x D matrix with entry (u, v) = R_h(r_u - r_v). Depends only on the PDP,
/// numerology and the in-bundle DMRS pattern, so one instance serves every
/// bundle of a given size.
struct RegbCorrelation {
  CMatrix matrix;
};

RegbCorrelation build_regb_correlation(const PowerDelayProfile& pdp,
                                       const OfdmNumerology& numerology,
                                       std::span<const int> dmrs_subcarriers);

enum class EstimationMethod { kLs, kMmse };

struct EstimationResult {
  CVector estimate;
  EstimationMethod method = EstimationMethod::kLs;
  RVector snr;  // per-RE SNR estimate over the bundle window
};

/// Zero-forcing pilot inversion; X^H y for unit-modulus pilots.
EstimationResult ls_estimate(const DmrsObservation& obs);

/// Wiener filter R X^H (X R X^H + N)^-1 y, N = diag of the observation's
/// per-RE noise variances.
EstimationResult mmse_estimate(const DmrsObservation& obs, const RegbCorrelation& corr);

/// Same filter with a scalar noise variance supplied by the caller (e.g. an
/// estimate) instead of the observation's true one.
EstimationResult mmse_estimate(const DmrsObservation& obs, const RegbCorrelation& corr,
                               double noise_variance);

/// Solves (X R X^H + N) w = y. ĥ = R X^H w.
CVector mmse_weights(const DmrsObservation& obs, const RegbCorrelation& corr,
                     const RVector& noise_variance);

/// Noise-subspace residual of the LS estimate. Throws std::domain_error when
/// R has no noise-only dimension.
double estimate_noise_variance(const EstimationResult& ls, const DmrsObservation& obs,
                               const RegbCorrelation& corr);

/// Numerators |ĥ_j|^2 and residual powers |y_j - x_j ĥ_j|^2 entering the
/// SNR estimate; kept separate so callers can widen the averaging window.
struct SnrTerms {
  RVector signal;
  RVector residual;
};
SnrTerms snr_terms(const DmrsObservation& obs, const CVector& estimate);

inline constexpr double kResidualFloor = 1e-12;

/// γ̂_j = |ĥ_j|^2 / max(mean_j |y_j - x_j ĥ_j|^2, 1e-12).
RVector estimate_snr(const DmrsObservation& obs, const CVector& estimate);

}  // namespace linksim

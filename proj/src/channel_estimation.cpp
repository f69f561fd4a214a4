#include "linksim/channel_estimation.hpp"

#include <algorithm>
#include <stdexcept>

namespace linksim {
namespace {

constexpr double kRidge = 1e-12;
constexpr double kSubspaceThreshold = 1e-3;
constexpr double kMinRcond = 1e-14;

void check_observation(const DmrsObservation& obs) {
  const Eigen::Index d = obs.received.size();
  if (obs.pilots.size() != d) throw std::invalid_argument("pilot and observation lengths differ");
}

}  // namespace

RegbCorrelation build_regb_correlation(const PowerDelayProfile& pdp,
                                       const OfdmNumerology& numerology,
                                       std::span<const int> dmrs_subcarriers) {
  const auto d = static_cast<Eigen::Index>(dmrs_subcarriers.size());
  RegbCorrelation corr{CMatrix(d, d)};
  for (Eigen::Index u = 0; u < d; ++u) {
    corr.matrix(u, u) = cplx(1.0, 0.0);
    for (Eigen::Index v = 0; v < u; ++v) {
      const cplx r = freq_autocorrelation(pdp, numerology,
                                          dmrs_subcarriers[static_cast<std::size_t>(u)] -
                                              dmrs_subcarriers[static_cast<std::size_t>(v)]);
      corr.matrix(u, v) = r;
      corr.matrix(v, u) = std::conj(r);
    }
  }
  return corr;
}

EstimationResult ls_estimate(const DmrsObservation& obs) {
  check_observation(obs);
  EstimationResult result;
  result.method = EstimationMethod::kLs;
  result.estimate = obs.pilots.conjugate().cwiseProduct(obs.received);
  result.snr = estimate_snr(obs, result.estimate);
  return result;
}

CVector mmse_weights(const DmrsObservation& obs, const RegbCorrelation& corr,
                     const RVector& noise_variance) {
  check_observation(obs);
  const Eigen::Index d = obs.received.size();
  if (corr.matrix.rows() != d || corr.matrix.cols() != d || noise_variance.size() != d) {
    throw std::invalid_argument("correlation matrix does not match the DMRS count");
  }
  if ((noise_variance.array() < 0.0).any()) {
    throw std::invalid_argument("noise variance must be >= 0");
  }
  // X R X^H: (u, v) -> x_u R_uv conj(x_v).
  CMatrix a = obs.pilots.asDiagonal() * corr.matrix * obs.pilots.conjugate().asDiagonal();
  for (Eigen::Index k = 0; k < d; ++k) {
    a(k, k) += noise_variance[k] < kRidge ? noise_variance[k] + kRidge : noise_variance[k];
  }
  const Eigen::LDLT<CMatrix> ldlt(a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < kMinRcond) {
    throw std::runtime_error("ill-conditioned MMSE system");
  }
  return ldlt.solve(obs.received);
}

namespace {

EstimationResult mmse_with(const DmrsObservation& obs, const RegbCorrelation& corr,
                           const RVector& noise_variance) {
  const CVector w = mmse_weights(obs, corr, noise_variance);
  EstimationResult result;
  result.method = EstimationMethod::kMmse;
  result.estimate = corr.matrix * obs.pilots.conjugate().cwiseProduct(w);
  result.snr = estimate_snr(obs, result.estimate);
  return result;
}

}  // namespace

EstimationResult mmse_estimate(const DmrsObservation& obs, const RegbCorrelation& corr) {
  if (obs.re_noise_variance.size() == obs.received.size()) {
    return mmse_with(obs, corr, obs.re_noise_variance);
  }
  return mmse_with(obs, corr, RVector::Constant(obs.received.size(), obs.noise_variance));
}

EstimationResult mmse_estimate(const DmrsObservation& obs, const RegbCorrelation& corr,
                               double noise_variance) {
  return mmse_with(obs, corr, RVector::Constant(obs.received.size(), noise_variance));
}

double estimate_noise_variance(const EstimationResult& ls, const DmrsObservation& obs,
                               const RegbCorrelation& corr) {
  check_observation(obs);
  const Eigen::Index d = ls.estimate.size();
  if (corr.matrix.rows() != d) {
    throw std::invalid_argument("correlation matrix does not match the DMRS count");
  }
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(corr.matrix);
  const RVector& values = eig.eigenvalues();  // ascending
  const double cutoff = kSubspaceThreshold * values.maxCoeff();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < d; ++k) rank += values[k] >= cutoff ? 1 : 0;
  if (rank >= d) throw std::domain_error("no noise subspace; use genie variance");

  const CMatrix signal_basis = eig.eigenvectors().rightCols(rank);
  const CVector residual =
      ls.estimate - signal_basis * (signal_basis.adjoint() * ls.estimate);
  return residual.squaredNorm() / static_cast<double>(d - rank);
}

SnrTerms snr_terms(const DmrsObservation& obs, const CVector& estimate) {
  check_observation(obs);
  if (estimate.size() != obs.received.size()) {
    throw std::invalid_argument("estimate length does not match the observation");
  }
  SnrTerms terms;
  terms.signal = estimate.cwiseAbs2();
  terms.residual = (obs.received - obs.pilots.cwiseProduct(estimate)).cwiseAbs2();
  return terms;
}

RVector estimate_snr(const DmrsObservation& obs, const CVector& estimate) {
  const SnrTerms terms = snr_terms(obs, estimate);
  if (terms.signal.size() == 0) return {};
  const double denominator = std::max(terms.residual.mean(), kResidualFloor);
  return terms.signal / denominator;
}

}  // namespace linksim

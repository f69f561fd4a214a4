#pragma once

#include <complex>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "linksim/rng.hpp"

namespace linksim {

using cplx = std::complex<double>;

struct Tap {
  double delay_s = 0.0;
  double power = 0.0;  // linear
};

/// Tapped-delay-line statistics. Construction sorts taps by delay and
/// normalizes the powers to unit sum.
class PowerDelayProfile {
 public:
  PowerDelayProfile(std::string name, std::vector<Tap> taps);

  const std::string& name() const { return name_; }
  const std::vector<Tap>& taps() const { return taps_; }
  std::size_t size() const { return taps_.size(); }

 private:
  std::string name_;
  std::vector<Tap> taps_;
};

struct OfdmNumerology {
  double subcarrier_spacing_hz = 15e3;
  int fft_size = 2048;

  double sample_rate_hz() const { return subcarrier_spacing_hz * fft_size; }
  double sample_duration_s() const { return 1.0 / sample_rate_hz(); }
};

/// Throws std::invalid_argument unless fft_size is a power of two and the
/// spacing is positive.
void validate(const OfdmNumerology& numerology);

/// R_h(dk) = sum_l p_l exp(-j 2 pi dk tau_l / (K tau_s)), delays in fractional samples.
cplx freq_autocorrelation(const PowerDelayProfile& pdp, const OfdmNumerology& numerology,
                          int delta_k);

/// One fading draw: a complex gain per (tx, rx, tap).
class ChannelRealization {
 public:
  ChannelRealization(const PowerDelayProfile& pdp, const OfdmNumerology& numerology, int n_tx,
                     int n_rx, std::vector<cplx> tap_gains);

  int n_tx() const { return n_tx_; }
  int n_rx() const { return n_rx_; }
  std::size_t n_taps() const { return delays_samples_.size(); }
  int fft_size() const { return fft_size_; }
  cplx tap_gain(int tx, int rx, std::size_t tap) const;

  /// h_k = sum_l a_l exp(-j 2 pi k tau_l / K) for subcarrier k in [0, K).
  cplx freq_response(int tx, int rx, int subcarrier) const;

 private:
  std::size_t offset(int tx, int rx) const;

  int n_tx_;
  int n_rx_;
  int fft_size_;
  std::vector<double> delays_samples_;
  std::vector<cplx> tap_gains_;  // [tx][rx][tap]
};

/// Independent a_l ~ CN(0, p_l) for every tap of every antenna pair.
ChannelRealization draw_realization(const PowerDelayProfile& pdp, const OfdmNumerology& numerology,
                                    int n_tx, int n_rx, RngStream& rng);

/// Parses the plain-text profile format:
///   # name <label>
///   # delay_scaling_ns <real>
///   <normalized_delay> <power_dB>
/// Other lines starting with '#' are comments.
PowerDelayProfile parse_pdp(std::istream& in, std::string_view source = "<stream>");
PowerDelayProfile load_pdp_file(const std::filesystem::path& path);

}  // namespace linksim

#include "linksim/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace linksim {

PowerDelayProfile::PowerDelayProfile(std::string name, std::vector<Tap> taps)
    : name_(std::move(name)), taps_(std::move(taps)) {
  if (taps_.empty()) throw std::invalid_argument("power delay profile has no taps");
  double total = 0.0;
  for (const Tap& t : taps_) {
    if (!(t.delay_s >= 0.0) || !std::isfinite(t.delay_s)) {
      throw std::invalid_argument("tap delays must be finite and non-negative");
    }
    if (!(t.power > 0.0) || !std::isfinite(t.power)) {
      throw std::invalid_argument("tap powers must be finite and positive");
    }
    total += t.power;
  }
  std::stable_sort(taps_.begin(), taps_.end(),
                   [](const Tap& a, const Tap& b) { return a.delay_s < b.delay_s; });
  for (Tap& t : taps_) t.power /= total;
}

void validate(const OfdmNumerology& numerology) {
  const int k = numerology.fft_size;
  if (k <= 0 || (k & (k - 1)) != 0) {
    throw std::invalid_argument("fft_size must be a power of two");
  }
  if (!(numerology.subcarrier_spacing_hz > 0.0)) {
    throw std::invalid_argument("subcarrier spacing must be positive");
  }
}

cplx freq_autocorrelation(const PowerDelayProfile& pdp, const OfdmNumerology& numerology,
                          int delta_k) {
  const double ts = numerology.sample_duration_s();
  const double k = numerology.fft_size;
  cplx sum{0.0, 0.0};
  for (const Tap& t : pdp.taps()) {
    const double phase = -2.0 * std::numbers::pi * delta_k * (t.delay_s / ts) / k;
    sum += t.power * std::polar(1.0, phase);
  }
  return sum;
}

ChannelRealization::ChannelRealization(const PowerDelayProfile& pdp,
                                       const OfdmNumerology& numerology, int n_tx, int n_rx,
                                       std::vector<cplx> tap_gains)
    : n_tx_(n_tx), n_rx_(n_rx), fft_size_(numerology.fft_size), tap_gains_(std::move(tap_gains)) {
  if (n_tx < 1 || n_rx < 1) throw std::invalid_argument("antenna counts must be >= 1");
  const double ts = numerology.sample_duration_s();
  delays_samples_.reserve(pdp.size());
  for (const Tap& t : pdp.taps()) delays_samples_.push_back(t.delay_s / ts);
  if (tap_gains_.size() != static_cast<std::size_t>(n_tx) * n_rx * pdp.size()) {
    throw std::invalid_argument("tap gain count does not match n_tx * n_rx * taps");
  }
}

std::size_t ChannelRealization::offset(int tx, int rx) const {
  if (tx < 0 || tx >= n_tx_ || rx < 0 || rx >= n_rx_) {
    throw std::out_of_range("antenna index out of range");
  }
  return (static_cast<std::size_t>(tx) * n_rx_ + rx) * delays_samples_.size();
}

cplx ChannelRealization::tap_gain(int tx, int rx, std::size_t tap) const {
  if (tap >= delays_samples_.size()) throw std::out_of_range("tap index out of range");
  return tap_gains_[offset(tx, rx) + tap];
}

cplx ChannelRealization::freq_response(int tx, int rx, int subcarrier) const {
  const std::size_t base = offset(tx, rx);
  if (subcarrier < 0 || subcarrier >= fft_size_) {
    throw std::out_of_range("subcarrier index out of range");
  }
  const double w = -2.0 * std::numbers::pi * subcarrier / fft_size_;
  cplx h{0.0, 0.0};
  for (std::size_t l = 0; l < delays_samples_.size(); ++l) {
    h += tap_gains_[base + l] * std::polar(1.0, w * delays_samples_[l]);
  }
  return h;
}

ChannelRealization draw_realization(const PowerDelayProfile& pdp, const OfdmNumerology& numerology,
                                    int n_tx, int n_rx, RngStream& rng) {
  std::vector<cplx> gains;
  gains.reserve(static_cast<std::size_t>(std::max(n_tx, 0)) * std::max(n_rx, 0) * pdp.size());
  for (int tx = 0; tx < n_tx; ++tx) {
    for (int rx = 0; rx < n_rx; ++rx) {
      for (const Tap& t : pdp.taps()) gains.push_back(rng.complex_normal(t.power));
    }
  }
  return ChannelRealization(pdp, numerology, n_tx, n_rx, std::move(gains));
}

PowerDelayProfile parse_pdp(std::istream& in, std::string_view source) {
  std::string name{source};
  double scaling_ns = 1.0;
  std::vector<Tap> taps;
  std::string line;
  int line_no = 0;
  const auto fail = [&](const std::string& what) {
    throw std::runtime_error(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::istringstream fields(line.substr(first));
    if (line[first] == '#') {
      std::string hash, key;
      fields >> hash >> key;
      if (hash != "#") continue;
      if (key == "name") {
        std::string rest;
        std::getline(fields >> std::ws, rest);
        while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' ')) rest.pop_back();
        if (!rest.empty()) name = rest;
      } else if (key == "delay_scaling_ns") {
        if (!(fields >> scaling_ns) || !(scaling_ns >= 0.0)) {
          fail("delay_scaling_ns must be a non-negative number");
        }
      }
      continue;
    }
    double delay_norm = 0.0;
    double power_db = 0.0;
    std::string extra;
    if (!(fields >> delay_norm >> power_db) || (fields >> extra && extra[0] != '#')) {
      fail("expected '<normalized_delay> <power_dB>'");
    }
    if (!std::isfinite(delay_norm) || delay_norm < 0.0) fail("delay must be non-negative");
    if (!std::isfinite(power_db)) fail("power must be finite");
    taps.push_back({delay_norm * scaling_ns * 1e-9, std::pow(10.0, power_db / 10.0)});
  }
  if (taps.empty()) throw std::runtime_error(std::string(source) + ": profile has no taps");
  return PowerDelayProfile(std::move(name), std::move(taps));
}

PowerDelayProfile load_pdp_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open power delay profile '" + path.string() + "'");
  return parse_pdp(in, path.string());
}

}  // namespace linksim

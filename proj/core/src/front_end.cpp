#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "uwbsd/waveform.hpp"

namespace uwbsd::waveform {

namespace {

std::size_t to_samples(double duration, double dt) {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

/// Continuous-time convolution approximated on the sample grid.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b, double dt) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  for (double& v : out) v *= dt;
  return out;
}

double sum_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_bits(std::span<const int> bits) {
  if (bits.size() < 2) throw std::invalid_argument("need at least b_0 and b_1");
  for (int b : bits) {
    if (b != 1 && b != -1) throw std::invalid_argument("channel symbols must be +1 or -1");
  }
}

}  // namespace

void FrontEndConfig::validate() const {
  if (!(symbol_duration > 0.0) || !(integration_time > 0.0)) {
    throw std::invalid_argument("FrontEndConfig: durations must be positive");
  }
  if (integration_time > symbol_duration) {
    throw std::invalid_argument("FrontEndConfig: integration time exceeds symbol duration");
  }
  if (block_size == 0) throw std::invalid_argument("FrontEndConfig: block size must be >= 1");
  if (std::isnan(ebn0_db)) throw std::invalid_argument("FrontEndConfig: Eb/N0 is NaN");
}

double FrontEndConfig::n0() const noexcept {
  if (std::isinf(ebn0_db) && ebn0_db > 0.0) return 0.0;
  return std::pow(10.0, -ebn0_db / 10.0);
}

double LinkCalibration::noise_noise_variance() const noexcept {
  const double s2 = sigma_n2();
  return 2.0 * integration_time * b_eq * s2 * s2;
}

SampledSignal shaped_pulse(const PulseSpec& spec) {
  const SampledSignal tx = transmit_pulse(spec);
  const SampledSignal rx = receive_filter(spec);
  return {convolve(rx.samples, tx.samples, spec.dt()), spec.dt()};
}

SampledSignal make_receive_pulse(const PulseSpec& spec, const ChannelRealization& ch,
                                 double symbol_duration) {
  return make_receive_pulse(shaped_pulse(spec), ch, symbol_duration);
}

SampledSignal make_receive_pulse(const SampledSignal& shaped_signal, const ChannelRealization& ch,
                                 double symbol_duration) {
  if (ch.taps.empty()) throw std::invalid_argument("make_receive_pulse: channel has no taps");
  const double dt = shaped_signal.dt;
  const std::vector<double>& shaped = shaped_signal.samples;

  std::size_t last_shift = 0;
  for (const auto& t : ch.taps) {
    if (!(t.delay >= 0.0)) throw std::invalid_argument("make_receive_pulse: negative tap delay");
    last_shift = std::max(last_shift, to_samples(t.delay, dt));
  }
  SampledSignal p;
  p.dt = dt;
  p.samples.assign(last_shift + shaped.size(), 0.0);
  for (const auto& t : ch.taps) {
    const std::size_t shift = to_samples(t.delay, dt);
    for (std::size_t k = 0; k < shaped.size(); ++k) p.samples[shift + k] += t.gain * shaped[k];
  }
  if (p.duration() > symbol_duration) {
    throw std::invalid_argument("make_receive_pulse: pulse support exceeds the symbol duration");
  }
  const double e = p.energy();
  if (!(e > 0.0)) throw std::invalid_argument("make_receive_pulse: pulse has zero energy");
  const double g = 1.0 / std::sqrt(e);
  for (double& v : p.samples) v *= g;
  return p;
}

LinkCalibration calibrate(const SampledSignal& pulse, const SampledSignal& rx_filter,
                          const FrontEndConfig& cfg) {
  cfg.validate();
  const double dt = pulse.dt;
  const std::size_t window = std::min(to_samples(cfg.integration_time, dt), pulse.samples.size());
  const std::span<const double> captured(pulse.samples.data(), window);

  LinkCalibration cal;
  cal.integration_time = cfg.integration_time;
  cal.n0 = cfg.n0();
  cal.captured_energy = sum_squares(captured) * dt;
  if (!(cal.captured_energy > 0.0)) {
    throw std::invalid_argument("calibrate: integration window captures no pulse energy");
  }

  // ∫ |H|² |Q|² df = ∫ (h * q)² dt
  const auto filtered = convolve(rx_filter.samples, captured, dt);
  cal.filter_gain = sum_squares(filtered) * dt / cal.captured_energy;

  // ∫ |H|⁴ df = ∫ ρ(τ)² dτ with ρ the autocorrelation of h
  std::vector<double> reversed(rx_filter.samples.rbegin(), rx_filter.samples.rend());
  const auto autocorr = convolve(rx_filter.samples, reversed, dt);
  const double h4 = sum_squares(autocorr) * dt;
  cal.b_eq = h4 / (2.0 * cal.filter_gain * cal.filter_gain);
  return cal;
}

SampledSignal synthesize_block(std::span<const int> bits, const SampledSignal& pulse,
                               const SampledSignal& rx_filter, const FrontEndConfig& cfg,
                               std::uint64_t noise_seed) {
  cfg.validate();
  check_bits(bits);
  if (bits[0] != 1) throw std::invalid_argument("synthesize_block: reference symbol b_0 must be +1");
  const double dt = pulse.dt;
  const std::size_t sps = to_samples(cfg.symbol_duration, dt);
  if (pulse.samples.size() > sps) {
    throw std::invalid_argument("synthesize_block: pulse longer than a symbol");
  }

  SampledSignal r;
  r.dt = dt;
  r.samples.assign(bits.size() * sps, 0.0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    for (std::size_t k = 0; k < pulse.samples.size(); ++k) {
      r.samples[i * sps + k] += bits[i] * pulse.samples[k];
    }
  }

  const double n0 = cfg.n0();
  if (n0 > 0.0) {
    // w ~ N(0, N_0 / 2dt) filtered as dt · (w * h): PSD N_0/2 |H(f)|².
    std::mt19937_64 rng(noise_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto& h = rx_filter.samples;
    std::vector<double> white(r.samples.size() + h.size() - 1);
    for (double& w : white) w = normal(rng);
    const double gain = std::sqrt(0.5 * n0 * dt);
    for (std::size_t k = 0; k < r.samples.size(); ++k) {
      double acc = 0.0;
      for (std::size_t m = 0; m < h.size(); ++m) acc += h[m] * white[k + h.size() - 1 - m];
      r.samples[k] += gain * acc;
    }
  }
  return r;
}

AcrMatrix acr_front_end(const SampledSignal& r, const FrontEndConfig& cfg, double sigma_n2,
                        std::size_t first_symbol) {
  cfg.validate();
  const std::size_t sps = to_samples(cfg.symbol_duration, r.dt);
  const std::size_t window = to_samples(cfg.integration_time, r.dt);
  const std::size_t L = cfg.block_size;
  if ((first_symbol + L) * sps + window > r.samples.size()) {
    throw std::invalid_argument("acr_front_end: waveform does not span the block");
  }
  AcrMatrix z(L, sigma_n2);
  for (std::size_t i = 1; i <= L; ++i) {
    const double* ri = r.samples.data() + (first_symbol + i) * sps;
    for (std::size_t l = 0; l < i; ++l) {
      const double* rl = r.samples.data() + (first_symbol + l) * sps;
      double acc = 0.0;
      for (std::size_t k = 0; k < window; ++k) acc += ri[k] * rl[k];
      z.set(l, i, acc * r.dt);
    }
  }
  return z;
}

namespace {

AcrMatrix semi_analytic_block(std::span<const int> bits, std::span<const double> info_noise,
                              const LinkCalibration& cal, std::mt19937_64& rng) {
  const std::size_t L = bits.size() - 1;
  AcrMatrix z(L, cal.sigma_n2());
  const double nn_sd = std::sqrt(cal.noise_noise_variance());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 1; i <= L; ++i) {
    for (std::size_t l = 0; l < i; ++l) {
      double v = bits[l] * bits[i] * cal.captured_energy + bits[l] * info_noise[i] +
                 bits[i] * info_noise[l];
      if (nn_sd > 0.0) v += nn_sd * normal(rng);
      z.set(l, i, v);
    }
  }
  return z;
}

std::vector<double> draw_info_noise(std::size_t count, const LinkCalibration& cal,
                                    std::mt19937_64& rng) {
  std::vector<double> u(count, 0.0);
  const double sd = std::sqrt(cal.sigma_n2() * cal.captured_energy);
  if (sd > 0.0) {
    std::normal_distribution<double> normal(0.0, sd);
    for (double& x : u) x = normal(rng);
  }
  return u;
}

}  // namespace

AcrMatrix semi_analytic_z(std::span<const int> bits, const LinkCalibration& cal,
                          std::uint64_t noise_seed) {
  check_bits(bits);
  std::mt19937_64 rng(noise_seed);
  const auto u = draw_info_noise(bits.size(), cal, rng);
  return semi_analytic_block(bits, u, cal, rng);
}

std::vector<AcrMatrix> semi_analytic_frame(std::span<const int> bits, std::size_t block_size,
                                           const LinkCalibration& cal, std::mt19937_64& rng) {
  check_bits(bits);
  if (block_size == 0) throw std::invalid_argument("semi_analytic_frame: block size must be >= 1");
  const auto u = draw_info_noise(bits.size(), cal, rng);
  const std::size_t symbols = bits.size() - 1;
  std::vector<AcrMatrix> blocks;
  blocks.reserve((symbols + block_size - 1) / block_size);
  for (std::size_t start = 0; start < symbols; start += block_size) {
    const std::size_t len = std::min(block_size, symbols - start);
    blocks.push_back(semi_analytic_block(bits.subspan(start, len + 1),
                                         std::span<const double>(u).subspan(start, len + 1), cal,
                                         rng));
  }
  return blocks;
}

std::vector<AcrMatrix> acr_frame(const SampledSignal& r, std::size_t symbol_count,
                                 std::size_t block_size, const FrontEndConfig& cfg,
                                 double sigma_n2) {
  if (block_size == 0) throw std::invalid_argument("acr_frame: block size must be >= 1");
  std::vector<AcrMatrix> blocks;
  FrontEndConfig block_cfg = cfg;
  for (std::size_t start = 0; start < symbol_count; start += block_size) {
    block_cfg.block_size = std::min(block_size, symbol_count - start);
    blocks.push_back(acr_front_end(r, block_cfg, sigma_n2, start));
  }
  return blocks;
}

}  // namespace uwbsd::waveform

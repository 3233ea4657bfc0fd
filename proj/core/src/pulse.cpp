#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "uwbsd/waveform.hpp"

namespace uwbsd::waveform {

double SampledSignal::energy() const noexcept {
  double e = 0.0;
  for (double v : samples) e += v * v;
  return e * dt;
}

void PulseSpec::validate() const {
  if (!(center_frequency > 0.0) || !(bandwidth_10db > 0.0) || !(sample_rate > 0.0)) {
    throw std::invalid_argument("PulseSpec: frequencies must be positive");
  }
  if (sample_rate < 4.0 * (center_frequency + 0.5 * bandwidth_10db)) {
    throw std::invalid_argument("PulseSpec: sample_rate below 4x the upper band edge");
  }
}

namespace {

// Envelope spread s of exp(-t²/2s²): the power spectrum falls 10 dB at
// f_c ± sqrt(ln 10) / (2π s).
double envelope_sigma(const PulseSpec& spec) {
  return std::sqrt(std::log(10.0)) / (std::numbers::pi * spec.bandwidth_10db);
}

void scale_to_unit_energy(SampledSignal& s) {
  const double e = s.energy();
  if (!(e > 0.0)) throw std::invalid_argument("signal has zero energy");
  const double g = 1.0 / std::sqrt(e);
  for (double& v : s.samples) v *= g;
}

double peak_gain(const SampledSignal& h) {
  constexpr int kGrid = 4096;
  const double nyquist = 0.5 / h.dt;
  double peak = 0.0;
  for (int m = 0; m <= kGrid; ++m) {
    const double f = nyquist * m / kGrid;
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < h.samples.size(); ++k) {
      acc += h.samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * f * k * h.dt);
    }
    peak = std::max(peak, std::abs(acc) * h.dt);
  }
  return peak;
}

}  // namespace

SampledSignal transmit_pulse(const PulseSpec& spec) {
  spec.validate();
  const double s = envelope_sigma(spec);
  const double dt = spec.dt();
  const auto half = static_cast<long>(std::ceil(5.0 * s / dt));
  SampledSignal p;
  p.dt = dt;
  p.samples.reserve(static_cast<std::size_t>(2 * half + 1));
  for (long k = -half; k <= half; ++k) {
    const double t = k * dt;
    p.samples.push_back(std::exp(-t * t / (2.0 * s * s)) *
                        std::cos(2.0 * std::numbers::pi * spec.center_frequency * t));
  }
  scale_to_unit_energy(p);
  return p;
}

SampledSignal receive_filter(const PulseSpec& spec) {
  SampledSignal h = transmit_pulse(spec);
  std::reverse(h.samples.begin(), h.samples.end());
  const double g = 1.0 / peak_gain(h);
  for (double& v : h.samples) v *= g;
  return h;
}

}  // namespace uwbsd::waveform

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "uwbsd/types.hpp"

namespace uwbsd::waveform {

/// Uniformly sampled real signal.
struct SampledSignal {
  std::vector<double> samples;
  double dt = 0.0;

  double energy() const noexcept;
  double duration() const noexcept { return static_cast<double>(samples.size()) * dt; }
};

enum class PulseShape { gaussian_monocycle };

/// Transmit pulse parameters. The monocycle is realized as a Gaussian-windowed
/// carrier so that center frequency and 10 dB bandwidth can be set
/// independently.
struct PulseSpec {
  double center_frequency = 2.25e9;
  double bandwidth_10db = 3.3e9;
  double sample_rate = 20e9;
  PulseShape shape = PulseShape::gaussian_monocycle;

  /// Throws std::invalid_argument unless sample_rate >= 4 (f_c + B/2).
  void validate() const;
  double dt() const noexcept { return 1.0 / sample_rate; }
};

/// Unit-energy transmit pulse p_TX, centered in its support.
SampledSignal transmit_pulse(const PulseSpec& spec);

/// Receive filter matched to p_TX, scaled to unity peak gain |H_RX(f)|.
SampledSignal receive_filter(const PulseSpec& spec);

struct ChannelTap {
  double delay = 0.0;  ///< seconds
  double gain = 0.0;
};

struct ChannelRealization {
  std::vector<ChannelTap> taps;  ///< sorted by delay, Σ gain² = 1
  std::uint64_t rng_seed = 0;

  /// Sorts taps and rescales gains to unit energy. Throws on empty/zero taps
  /// or negative delays.
  void normalize();
};

/// Saleh-Valenzuela cluster model (Poisson cluster and ray arrivals, double
/// exponential power decay, log-normal amplitudes, random polarity).
/// Defaults follow the IEEE 802.15.3a CM2 parameter set; taps beyond
/// max_excess_delay are dropped. This approximates CM2 delay statistics,
/// it is not a fitted reproduction of the standard model.
struct SvChannelModel {
  double cluster_rate = 0.4e9;      ///< 1/s
  double ray_rate = 0.5e9;          ///< 1/s
  double cluster_decay = 24e-9;     ///< s
  double ray_decay = 12e-9;         ///< s
  double sigma_cluster_db = 3.3941;
  double sigma_ray_db = 3.3941;
  double max_excess_delay = 80e-9;  ///< s

  void validate() const;
};

ChannelRealization draw_channel(const SvChannelModel& model, std::uint64_t seed);

/// Single-tap channel (delay 0, gain 1).
ChannelRealization line_of_sight_channel();

/// Text format: '#' comments, a "seed <n>" line, then one "<delay_ns> <gain>"
/// line per tap.
void write_channel(std::ostream& out, const ChannelRealization& ch);
ChannelRealization read_channel(std::istream& in);
void save_channel(const std::string& path, const ChannelRealization& ch);
ChannelRealization load_channel(const std::string& path);

struct FrontEndConfig {
  double symbol_duration = 100e-9;  ///< T
  double integration_time = 30e-9;  ///< T_i
  std::size_t block_size = 1;       ///< L
  double ebn0_db = 10.0;            ///< +inf disables noise

  void validate() const;
  /// N_0 for E_b = 1.
  double n0() const noexcept;
};

/// Composite receive pulse p = h_CH * h_RX * p_TX, unit energy, starting at t = 0.
/// Throws std::invalid_argument on an empty channel or if the support exceeds T.
SampledSignal make_receive_pulse(const PulseSpec& spec, const ChannelRealization& ch,
                                 double symbol_duration);

/// h_RX * p_TX, the channel-independent part of the receive pulse.
SampledSignal shaped_pulse(const PulseSpec& spec);

/// Composite pulse from a precomputed shaped_pulse().
SampledSignal make_receive_pulse(const SampledSignal& shaped, const ChannelRealization& ch,
                                 double symbol_duration);

/// Quantities linking the waveform front end to the Z statistics.
///
/// With q = p restricted to [0, T_i), E_c = ∫q², and S(f) = N_0/2 |H_RX(f)|²:
///   sigma_n2 = ∫ S |Q|² df / E_c   (noise level seen through the pulse)
///   b_eq     = ∫ S² df / (2 sigma_n2²)
/// so that Var[∫ q n] = sigma_n2 E_c and Var[∫ n_l n_i] ≈ 2 T_i b_eq sigma_n2².
/// For a flat filter of bandwidth B this reduces to sigma_n2 = N_0/2, b_eq = B.
struct LinkCalibration {
  double captured_energy = 0.0;  ///< E_c
  double filter_gain = 0.0;      ///< sigma_n2 / (N_0/2)
  double b_eq = 0.0;             ///< Hz
  double integration_time = 0.0;
  double n0 = 0.0;

  double sigma_n2() const noexcept { return 0.5 * n0 * filter_gain; }
  /// Variance of the noise×noise term, 2 T_i b_eq sigma_n2².
  double noise_noise_variance() const noexcept;
};

LinkCalibration calibrate(const SampledSignal& pulse, const SampledSignal& rx_filter,
                          const FrontEndConfig& cfg);

/// r(t) = Σ_i b_i p(t - iT) + n(t) on [0, (n+1)T) for b_0..b_n, n >= 1.
/// n(t) is white Gaussian noise of PSD N_0/2 passed through h_RX.
/// Requires |b_i| = 1 and b_0 = +1.
SampledSignal synthesize_block(std::span<const int> bits, const SampledSignal& pulse,
                               const SampledSignal& rx_filter, const FrontEndConfig& cfg,
                               std::uint64_t noise_seed);

/// L-branch autocorrelation receiver over symbols first..first+L of r:
/// Z_{l,i} = ∫_0^{T_i} r(t + (first+i)T) r(t + (first+l)T) dt.
AcrMatrix acr_front_end(const SampledSignal& r, const FrontEndConfig& cfg, double sigma_n2,
                        std::size_t first_symbol = 0);

/// Gaussian model of the ACR output:
///   Z_{l,i} = b_l b_i E_c + b_l u_i + b_i u_l + w_{l,i}
/// with u_i ~ N(0, sigma_n2 E_c) per symbol and w_{l,i} ~ N(0, 2 T_i b_eq sigma_n2²),
/// so each entry has variance 2 E_c sigma_n2 + 2 T_i b_eq sigma_n2² and the
/// shared information×noise terms keep the cross-entry correlation.
AcrMatrix semi_analytic_z(std::span<const int> bits, const LinkCalibration& cal,
                          std::uint64_t noise_seed);

/// Frame-level generator: bits b_0..b_N are cut into blocks of `block_size`
/// symbols sharing their boundary reference symbol (last block may be
/// shorter). Per-symbol noise u_i is shared between adjacent blocks.
std::vector<AcrMatrix> semi_analytic_frame(std::span<const int> bits, std::size_t block_size,
                                           const LinkCalibration& cal, std::mt19937_64& rng);

/// Same segmentation over a synthesized frame waveform.
std::vector<AcrMatrix> acr_frame(const SampledSignal& r, std::size_t symbol_count,
                                 std::size_t block_size, const FrontEndConfig& cfg,
                                 double sigma_n2);

}  // namespace uwbsd::waveform

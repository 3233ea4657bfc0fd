#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uwbsd/coding.hpp"
#include "uwbsd/waveform.hpp"

namespace uwbsd::sim {

enum class DetectorKind { dd_hard, dd_soft, hosd, sosd, msdd_exhaustive };
enum class FrontEndMode { semi_analytic, waveform };

std::string_view to_string(DetectorKind kind) noexcept;
std::string_view to_string(FrontEndMode mode) noexcept;
/// Throws std::invalid_argument on unknown names.
DetectorKind parse_detector(std::string_view name);
/// Accepts "semi", "semi_analytic" and "waveform".
FrontEndMode parse_front_end(std::string_view name);

struct ExperimentConfig {
  std::vector<double> ebn0_grid_db{4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0,
                                   8.5, 9.0, 9.5, 10.0, 10.5, 11.0, 11.5, 12.0};
  std::vector<std::size_t> block_sizes{10};
  DetectorKind detector = DetectorKind::sosd;
  double llr_max = 10.0;
  bool stopping = false;
  int nu = 6;
  std::size_t interleaver_bits = 1000;  ///< information bits per frame
  waveform::SvChannelModel channel;
  waveform::PulseSpec pulse;
  double symbol_duration = 100e-9;
  double integration_time = 30e-9;
  std::uint64_t min_bit_errors = 500;
  std::uint64_t max_bits = 20'000'000;
  /// Channel realizations per point before the error target may end it.
  std::uint64_t min_frames = 1000;
  std::uint64_t seed = 1;
  FrontEndMode front_end = FrontEndMode::semi_analytic;

  double target_ber = 1e-3;
  /// A block size's sweep ends after the first point with BER < stop_ber
  /// (0 runs the whole grid).
  double stop_ber = 0.0;
  /// Clipping levels of the tradeoff and overall-complexity studies.
  std::vector<double> llr_max_grid{10.0, 2.0, 1.0, 0.5, 0.25, 0.1, 0.05, 0.0};
  int nu_ref = 7;
  std::vector<int> candidate_nu{3, 4, 5, 6};
  /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// One detector configuration inside an experiment.
struct DetectorSetting {
  DetectorKind kind = DetectorKind::sosd;
  double llr_max = 10.0;
  bool stopping = false;
  int nu = 6;
};

struct ResultRow {
  double ebn0_db = 0.0;
  std::size_t L = 1;
  std::string detector;
  double ber = 0.0;
  double avg_c_sd = 0.0;
  double max_c_sd = 0.0;
  double c_o_soft = 0.0;
  double c_o_max = 0.0;
  std::uint64_t bits_simulated = 0;
  std::uint64_t errors_counted = 0;
  int nu = 0;
  double llr_max = 0.0;
  bool stopping = false;
  bool feasible = true;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Accumulated counts of one grid point.
struct PointStats {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  std::uint64_t frames = 0;
  std::uint64_t blocks = 0;  ///< full-length detector blocks
  std::uint64_t nodes_sum = 0;
  std::uint64_t nodes_max = 0;

  double ber() const noexcept;
  double avg_nodes() const noexcept;
};

/// 2^nu + c_sd / L.
double overall_complexity(int nu, double c_sd, std::size_t block_size) noexcept;
/// 2^nu + (2^{L+1} - 2) / L.
double worst_case_overall_complexity(int nu, std::size_t block_size) noexcept;

/// Simulates one (detector, L, Eb/N0) point of the coded chain until
/// min_bit_errors (and min_frames) or max_bits. Channel realizations and data
/// depend only on (seed, frame); the noise also on `point_index`. Equal
/// indices therefore give matched runs across detectors and block sizes.
PointStats simulate_point(const ExperimentConfig& cfg, const DetectorSetting& det,
                          std::size_t block_size, std::size_t point_index, double ebn0_db);

/// BER vs Eb/N0 for cfg.detector at every block size (DD detectors use L = 1).
std::vector<ResultRow> run_ber_sweep(const ExperimentConfig& cfg);

/// Same, for an explicit detector setting and a single block size.
std::vector<ResultRow> sweep(const ExperimentConfig& cfg, const DetectorSetting& det,
                             std::size_t block_size);

struct RequiredPoint {
  double ebn0_db = 0.0;
  double avg_c_sd = 0.0;
  double max_c_sd = 0.0;
};

/// Eb/N0 where the sweep crosses `target` (log-BER linear interpolation
/// between adjacent points; avg C_SD interpolated linearly, max C_SD the
/// larger of the two). nullopt if the grid never brackets the target.
std::optional<RequiredPoint> required_ebn0(std::span<const ResultRow> sweep, double target);

/// For every L and clipping level (stopping off and on): required Eb/N0 at
/// cfg.target_ber and the average complexity there. Unreachable targets are
/// emitted with feasible = false.
std::vector<ResultRow> run_tradeoff(const ExperimentConfig& cfg);

/// Overall-complexity trajectories against a DD reference with nu_ref.
/// First row: the reference (C_o^ref = 2^nu_ref + 1). Then, per L, the
/// lowest-Eb/N0 candidate (nu, llr_max) with C_o^soft <= C_o^ref ("sosd"),
/// and the same restricted to llr_max = 0 ("hosd").
std::vector<ResultRow> run_overall_complexity(const ExperimentConfig& cfg);

/// Fixed CSV schema, '.' decimal separator, header row first.
void write_csv(std::ostream& out, std::span<const ResultRow> rows);
std::string_view csv_header() noexcept;

/// JSON manifest: every config field, the seed, the subcommand and the
/// library version.
std::string manifest_json(const ExperimentConfig& cfg, std::string_view command);

std::string_view library_version() noexcept;

}  // namespace uwbsd::sim

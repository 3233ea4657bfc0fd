#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uwbsd/sim.hpp"

namespace uwbsd::cli {

/// Configuration error: exit code 2. The message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies one `key=value` setting. Keys are flat ("L", "llr_max") or
/// section-qualified ("channel.ray_decay_ns"); see README for the table.
void apply_setting(sim::ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Reads an INI/TOML-style file with [experiment], [channel], [pulse] and
/// [frontend] sections. Keys outside a section belong to [experiment].
void apply_config_file(sim::ExperimentConfig& cfg, const std::filesystem::path& path);

/// Every key accepted by apply_setting.
std::vector<std::string> known_keys();

enum class PlotKind { ber, tradeoff, overall };

/// Writes the plot-ready data files of one study into `dir` and returns
/// their paths. Throws std::invalid_argument on empty rows.
std::vector<std::filesystem::path> emit_plot_data(std::span<const sim::ResultRow> rows,
                                                  PlotKind kind,
                                                  const std::filesystem::path& dir);

/// Oracle-equivalence checks of the detectors; prints one line per check.
/// Returns true when all pass.
bool run_selftest(std::ostream& out, std::uint64_t seed);

/// Entry point of `uwbsim`: 0 on success, 1 on runtime failure, 2 on
/// configuration or usage errors.
int parse_and_dispatch(int argc, const char* const* argv);
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uwbsd::cli

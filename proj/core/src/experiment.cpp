#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "uwbsd/sim.hpp"

namespace uwbsd::sim {

std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::dd_hard: return "dd_hard";
    case DetectorKind::dd_soft: return "dd_soft";
    case DetectorKind::hosd: return "hosd";
    case DetectorKind::sosd: return "sosd";
    case DetectorKind::msdd_exhaustive: return "msdd_exhaustive";
  }
  return "unknown";
}

std::string_view to_string(FrontEndMode mode) noexcept {
  return mode == FrontEndMode::waveform ? "waveform" : "semi_analytic";
}

DetectorKind parse_detector(std::string_view name) {
  for (auto k : {DetectorKind::dd_hard, DetectorKind::dd_soft, DetectorKind::hosd,
                 DetectorKind::sosd, DetectorKind::msdd_exhaustive}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown detector '" + std::string(name) + "'");
}

FrontEndMode parse_front_end(std::string_view name) {
  if (name == "semi" || name == "semi_analytic") return FrontEndMode::semi_analytic;
  if (name == "waveform") return FrontEndMode::waveform;
  throw std::invalid_argument("unknown front end '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + ": " + why);
  };
  if (ebn0_grid_db.empty()) fail("ebn0_grid", "grid is empty");
  for (double v : ebn0_grid_db) {
    if (!std::isfinite(v)) fail("ebn0_grid", "values must be finite");
  }
  if (block_sizes.empty()) fail("L", "list is empty");
  for (auto L : block_sizes) {
    if (L == 0 || L > 62) fail("L", "block sizes must be in 1..62");
    if (detector == DetectorKind::msdd_exhaustive && L > 20) {
      fail("L", "exhaustive MSDD is limited to L <= 20");
    }
  }
  if (!(llr_max >= 0.0)) fail("llr_max", "must be >= 0");
  for (double v : llr_max_grid) {
    if (!(v >= 0.0)) fail("llr_max_grid", "values must be >= 0");
  }
  if (nu < 2 || nu > 7) fail("nu", "catalog covers 2..7");
  if (nu_ref < 2 || nu_ref > 7) fail("nu_ref", "catalog covers 2..7");
  for (int n : candidate_nu) {
    if (n < 2 || n > 7) fail("candidate_nu", "catalog covers 2..7");
  }
  if (interleaver_bits == 0) fail("interleaver_bits", "must be >= 1");
  if (min_bit_errors < 50) fail("min_bit_errors", "must be >= 50 for reported points");
  if (max_bits == 0) fail("max_bits", "must be >= 1");
  if (!(target_ber > 0.0 && target_ber < 1.0)) fail("target_ber", "must be in (0, 1)");
  if (!(stop_ber >= 0.0 && stop_ber < 1.0)) fail("stop_ber", "must be in [0, 1)");
  if (!(integration_time > 0.0) || integration_time > symbol_duration) {
    fail("integration_time", "must be in (0, symbol_duration]");
  }
  pulse.validate();
  channel.validate();
}

double PointStats::ber() const noexcept {
  return bits == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(bits);
}

double PointStats::avg_nodes() const noexcept {
  return blocks == 0 ? 0.0 : static_cast<double>(nodes_sum) / static_cast<double>(blocks);
}

double overall_complexity(int nu, double c_sd, std::size_t block_size) noexcept {
  return std::ldexp(1.0, nu) + c_sd / static_cast<double>(block_size);
}

double worst_case_overall_complexity(int nu, std::size_t block_size) noexcept {
  return overall_complexity(nu, static_cast<double>(max_tree_nodes(block_size)), block_size);
}

std::optional<RequiredPoint> required_ebn0(std::span<const ResultRow> sweep, double target) {
  for (std::size_t k = 0; k + 1 < sweep.size(); ++k) {
    const auto& a = sweep[k];
    const auto& b = sweep[k + 1];
    if (!(a.ber >= target && b.ber < target)) continue;
    if (a.ber == target) return RequiredPoint{a.ebn0_db, a.avg_c_sd, a.max_c_sd};
    if (!(b.ber > 0.0)) return std::nullopt;
    const double t = (std::log(a.ber) - std::log(target)) / (std::log(a.ber) - std::log(b.ber));
    return RequiredPoint{a.ebn0_db + t * (b.ebn0_db - a.ebn0_db),
                         a.avg_c_sd + t * (b.avg_c_sd - a.avg_c_sd),
                         std::max(a.max_c_sd, b.max_c_sd)};
  }
  return std::nullopt;
}

}  // namespace uwbsd::sim

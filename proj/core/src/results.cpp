#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uwbsd/sim.hpp"

#ifndef UWBSD_VERSION
#define UWBSD_VERSION "unknown"
#endif

namespace uwbsd::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_dd(DetectorKind k) { return k == DetectorKind::dd_hard || k == DetectorKind::dd_soft; }

ResultRow make_row(const DetectorSetting& det, std::size_t L, double ebn0_db,
                   const PointStats& stats) {
  ResultRow row;
  row.ebn0_db = ebn0_db;
  row.L = L;
  row.detector = std::string(to_string(det.kind));
  row.ber = stats.ber();
  row.avg_c_sd = stats.avg_nodes();
  row.max_c_sd = static_cast<double>(stats.nodes_max);
  row.c_o_soft = overall_complexity(det.nu, row.avg_c_sd, L);
  row.c_o_max = overall_complexity(det.nu, row.max_c_sd, L);
  row.bits_simulated = stats.bits;
  row.errors_counted = stats.errors;
  row.nu = det.nu;
  row.llr_max = det.llr_max;
  row.stopping = det.stopping;
  return row;
}

/// Collapses a sweep into one row at the required Eb/N0.
ResultRow required_row(const DetectorSetting& det, std::size_t L,
                       std::span<const ResultRow> rows, double target) {
  ResultRow row;
  row.L = L;
  row.detector = std::string(to_string(det.kind));
  row.nu = det.nu;
  row.llr_max = det.llr_max;
  row.stopping = det.stopping;
  for (const auto& r : rows) {
    row.bits_simulated += r.bits_simulated;
    row.errors_counted += r.errors_counted;
  }
  if (const auto req = required_ebn0(rows, target)) {
    row.ebn0_db = req->ebn0_db;
    row.ber = target;
    row.avg_c_sd = req->avg_c_sd;
    row.max_c_sd = req->max_c_sd;
    row.c_o_soft = overall_complexity(det.nu, row.avg_c_sd, L);
    row.c_o_max = overall_complexity(det.nu, row.max_c_sd, L);
  } else {
    row.ebn0_db = kNaN;
    row.ber = kNaN;
    row.avg_c_sd = row.max_c_sd = row.c_o_soft = row.c_o_max = kNaN;
    row.feasible = false;
  }
  return row;
}

std::vector<double> descending(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<ResultRow> sweep(const ExperimentConfig& cfg, const DetectorSetting& det,
                             std::size_t block_size) {
  std::vector<ResultRow> rows;
  for (std::size_t p = 0; p < cfg.ebn0_grid_db.size(); ++p) {
    const double ebn0 = cfg.ebn0_grid_db[p];
    const auto stats = simulate_point(cfg, det, block_size, p, ebn0);
    rows.push_back(make_row(det, block_size, ebn0, stats));
    if (cfg.stop_ber > 0.0 && rows.back().ber < cfg.stop_ber) break;
  }
  return rows;
}

std::vector<ResultRow> run_ber_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const DetectorSetting det{cfg.detector, cfg.llr_max, cfg.stopping, cfg.nu};
  std::vector<ResultRow> rows;
  if (is_dd(cfg.detector)) return sweep(cfg, det, 1);
  for (auto L : cfg.block_sizes) {
    auto part = sweep(cfg, det, L);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::vector<ResultRow> run_tradeoff(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentConfig local = cfg;
  if (local.stop_ber == 0.0) local.stop_ber = cfg.target_ber;
  std::vector<ResultRow> rows;
  for (auto L : cfg.block_sizes) {
    for (bool stopping : {false, true}) {
      for (double llr_max : descending(cfg.llr_max_grid)) {
        const DetectorSetting det{DetectorKind::sosd, llr_max, stopping, cfg.nu};
        const auto points = sweep(local, det, L);
        rows.push_back(required_row(det, L, points, cfg.target_ber));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> run_overall_complexity(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentConfig local = cfg;
  if (local.stop_ber == 0.0) local.stop_ber = cfg.target_ber;

  const DetectorSetting reference{DetectorKind::dd_soft, kInfinity, false, cfg.nu_ref};
  const double c_ref = overall_complexity(cfg.nu_ref, 1.0, 1);
  std::vector<ResultRow> rows;
  rows.push_back(required_row(reference, 1, sweep(local, reference, 1), cfg.target_ber));

  for (auto L : cfg.block_sizes) {
    std::optional<ResultRow> best_soft;
    std::optional<ResultRow> best_hard;
    for (int nu : cfg.candidate_nu) {
      // Every search visits at least L nodes, so C_o >= 2^nu + 1.
      if (overall_complexity(nu, static_cast<double>(L), L) > c_ref) continue;
      for (double llr_max : descending(cfg.llr_max_grid)) {
        const DetectorSetting det{DetectorKind::sosd, llr_max, cfg.stopping, nu};
        auto row = required_row(det, L, sweep(local, det, L), cfg.target_ber);
        if (!row.feasible || row.c_o_soft > c_ref) continue;
        auto better = [&](const std::optional<ResultRow>& cur) {
          return !cur || row.ebn0_db < cur->ebn0_db;
        };
        if (better(best_soft)) best_soft = row;
        if (llr_max == 0.0 && better(best_hard)) best_hard = row;
      }
    }
    auto emit = [&](std::optional<ResultRow> chosen, DetectorKind label) {
      if (!chosen) {
        chosen = ResultRow{};
        chosen->L = L;
        chosen->ebn0_db = chosen->ber = chosen->avg_c_sd = chosen->max_c_sd = kNaN;
        chosen->c_o_soft = chosen->c_o_max = kNaN;
        chosen->feasible = false;
      }
      chosen->detector = std::string(to_string(label));
      rows.push_back(*chosen);
    };
    emit(best_soft, DetectorKind::sosd);
    emit(best_hard, DetectorKind::hosd);
  }
  return rows;
}

std::string_view csv_header() noexcept {
  return "ebn0_db,L,detector,ber,avg_c_sd,max_c_sd,c_o_soft,c_o_max,bits_simulated,"
         "errors_counted,nu,llr_max,stopping,feasible";
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf << std::setprecision(10);
  buf << csv_header() << '\n';
  for (const auto& r : rows) {
    buf << r.ebn0_db << ',' << r.L << ',' << r.detector << ',' << r.ber << ',' << r.avg_c_sd
        << ',' << r.max_c_sd << ',' << r.c_o_soft << ',' << r.c_o_max << ',' << r.bits_simulated
        << ',' << r.errors_counted << ',' << r.nu << ',' << r.llr_max << ','
        << (r.stopping ? 1 : 0) << ',' << (r.feasible ? 1 : 0) << '\n';
  }
  out << buf.str();
}

std::string_view library_version() noexcept { return UWBSD_VERSION; }

std::string manifest_json(const ExperimentConfig& cfg, std::string_view command) {
  using nlohmann::json;
  auto finite_or_string = [](double v) -> json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  json llr_grid = json::array();
  for (double v : cfg.llr_max_grid) llr_grid.push_back(finite_or_string(v));

  json j;
  j["tool"] = "uwbsim";
  j["version"] = std::string(library_version());
  j["command"] = std::string(command);
  j["seed"] = cfg.seed;
  j["experiment"] = {
      {"ebn0_grid", cfg.ebn0_grid_db},
      {"L", cfg.block_sizes},
      {"detector", std::string(to_string(cfg.detector))},
      {"llr_max", finite_or_string(cfg.llr_max)},
      {"stopping", cfg.stopping},
      {"nu", cfg.nu},
      {"interleaver_bits", cfg.interleaver_bits},
      {"min_bit_errors", cfg.min_bit_errors},
      {"max_bits", cfg.max_bits},
      {"min_frames", cfg.min_frames},
      {"front_end", std::string(to_string(cfg.front_end))},
      {"target_ber", cfg.target_ber},
      {"stop_ber", cfg.stop_ber},
      {"llr_max_grid", llr_grid},
      {"nu_ref", cfg.nu_ref},
      {"candidate_nu", cfg.candidate_nu},
  };
  j["channel"] = {
      {"cluster_rate_per_ns", cfg.channel.cluster_rate * 1e-9},
      {"ray_rate_per_ns", cfg.channel.ray_rate * 1e-9},
      {"cluster_decay_ns", cfg.channel.cluster_decay * 1e9},
      {"ray_decay_ns", cfg.channel.ray_decay * 1e9},
      {"sigma_cluster_db", cfg.channel.sigma_cluster_db},
      {"sigma_ray_db", cfg.channel.sigma_ray_db},
      {"max_excess_delay_ns", cfg.channel.max_excess_delay * 1e9},
  };
  j["pulse"] = {
      {"center_frequency_ghz", cfg.pulse.center_frequency * 1e-9},
      {"bandwidth_10db_ghz", cfg.pulse.bandwidth_10db * 1e-9},
      {"sample_rate_ghz", cfg.pulse.sample_rate * 1e-9},
  };
  j["frontend"] = {
      {"symbol_duration_ns", cfg.symbol_duration * 1e9},
      {"integration_time_ns", cfg.integration_time * 1e9},
  };
  return j.dump(2) + "\n";
}

}  // namespace uwbsd::sim

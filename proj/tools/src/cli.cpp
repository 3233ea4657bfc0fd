#include "uwbsd/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uwbsd/detect.hpp"
#include "uwbsd/metrics.hpp"

namespace uwbsd::cli {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what) {
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) +
                    "': " + std::string(what));
}

double parse_double(std::string_view key, std::string_view text) {
  const auto s = unquote(text);
  if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || std::isnan(v)) {
    bad_value(key, text, "expected a number");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  const auto s = unquote(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    // Accept integral floating notation such as 2e7.
    const double d = parse_double(key, text);
    if (d < 0 || d != std::floor(d) || d > 1.8e19) bad_value(key, text, "expected an integer");
    return static_cast<std::uint64_t>(d);
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const auto v = parse_unsigned(key, text);
  if (v > 1'000'000) bad_value(key, text, "out of range");
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto s = unquote(text);
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  bad_value(key, text, "expected on/off");
}

std::vector<std::string_view> split_list(std::string_view text) {
  auto s = trim(text);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string_view> parts;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) parts.push_back(item);
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return parts;
}

/// "a,b,c" or "start:stop:step" (inclusive).
std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
  const auto s = unquote(text);
  if (s.find(':') != std::string_view::npos && s.find(',') == std::string_view::npos) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string_view::npos) bad_value(key, text, "range needs start:stop:step");
    const double start = parse_double(key, s.substr(0, c1));
    const double stop = parse_double(key, s.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(key, s.substr(c2 + 1));
    if (!(step > 0) || stop < start || !std::isfinite(stop)) bad_value(key, text, "bad range");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
  }
  std::vector<double> out;
  for (auto part : split_list(s)) out.push_back(parse_double(key, part));
  if (out.empty()) bad_value(key, text, "empty list");
  return out;
}

template <typename T, typename F>
std::vector<T> parse_list(std::string_view key, std::string_view text, F parse_one) {
  std::vector<T> out;
  for (auto part : split_list(unquote(text))) out.push_back(static_cast<T>(parse_one(key, part)));
  if (out.empty()) bad_value(key, text, "empty list");
  return out;
}

using Setter = std::function<void(sim::ExperimentConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  using C = sim::ExperimentConfig;
  static const std::map<std::string, Setter, std::less<>> table = {
      {"ebn0_grid", [](C& c, auto k, auto v) { c.ebn0_grid_db = parse_double_list(k, v); }},
      {"L",
       [](C& c, auto k, auto v) {
         c.block_sizes = parse_list<std::size_t>(k, v, parse_unsigned);
       }},
      {"detector",
       [](C& c, auto k, auto v) {
         try {
           c.detector = sim::parse_detector(unquote(v));
         } catch (const std::invalid_argument&) {
           bad_value(k, v, "unknown detector");
         }
       }},
      {"llr_max", [](C& c, auto k, auto v) { c.llr_max = parse_double(k, v); }},
      {"stopping", [](C& c, auto k, auto v) { c.stopping = parse_bool(k, v); }},
      {"nu", [](C& c, auto k, auto v) { c.nu = parse_int(k, v); }},
      {"interleaver_bits",
       [](C& c, auto k, auto v) { c.interleaver_bits = parse_unsigned(k, v); }},
      {"min_bit_errors", [](C& c, auto k, auto v) { c.min_bit_errors = parse_unsigned(k, v); }},
      {"max_bits", [](C& c, auto k, auto v) { c.max_bits = parse_unsigned(k, v); }},
      {"min_frames", [](C& c, auto k, auto v) { c.min_frames = parse_unsigned(k, v); }},
      {"seed", [](C& c, auto k, auto v) { c.seed = parse_unsigned(k, v); }},
      {"front_end",
       [](C& c, auto k, auto v) {
         try {
           c.front_end = sim::parse_front_end(unquote(v));
         } catch (const std::invalid_argument&) {
           bad_value(k, v, "expected waveform or semi");
         }
       }},
      {"target_ber", [](C& c, auto k, auto v) { c.target_ber = parse_double(k, v); }},
      {"stop_ber", [](C& c, auto k, auto v) { c.stop_ber = parse_double(k, v); }},
      {"llr_max_grid", [](C& c, auto k, auto v) { c.llr_max_grid = parse_double_list(k, v); }},
      {"nu_ref", [](C& c, auto k, auto v) { c.nu_ref = parse_int(k, v); }},
      {"candidate_nu",
       [](C& c, auto k, auto v) { c.candidate_nu = parse_list<int>(k, v, parse_int); }},
      {"threads",
       [](C& c, auto k, auto v) { c.threads = static_cast<unsigned>(parse_int(k, v)); }},
      {"channel.cluster_rate_per_ns",
       [](C& c, auto k, auto v) { c.channel.cluster_rate = parse_double(k, v) * 1e9; }},
      {"channel.ray_rate_per_ns",
       [](C& c, auto k, auto v) { c.channel.ray_rate = parse_double(k, v) * 1e9; }},
      {"channel.cluster_decay_ns",
       [](C& c, auto k, auto v) { c.channel.cluster_decay = parse_double(k, v) * 1e-9; }},
      {"channel.ray_decay_ns",
       [](C& c, auto k, auto v) { c.channel.ray_decay = parse_double(k, v) * 1e-9; }},
      {"channel.sigma_cluster_db",
       [](C& c, auto k, auto v) { c.channel.sigma_cluster_db = parse_double(k, v); }},
      {"channel.sigma_ray_db",
       [](C& c, auto k, auto v) { c.channel.sigma_ray_db = parse_double(k, v); }},
      {"channel.max_excess_delay_ns",
       [](C& c, auto k, auto v) { c.channel.max_excess_delay = parse_double(k, v) * 1e-9; }},
      {"pulse.center_frequency_ghz",
       [](C& c, auto k, auto v) { c.pulse.center_frequency = parse_double(k, v) * 1e9; }},
      {"pulse.bandwidth_10db_ghz",
       [](C& c, auto k, auto v) { c.pulse.bandwidth_10db = parse_double(k, v) * 1e9; }},
      {"pulse.sample_rate_ghz",
       [](C& c, auto k, auto v) { c.pulse.sample_rate = parse_double(k, v) * 1e9; }},
      {"frontend.symbol_duration_ns",
       [](C& c, auto k, auto v) { c.symbol_duration = parse_double(k, v) * 1e-9; }},
      {"frontend.integration_time_ns",
       [](C& c, auto k, auto v) { c.integration_time = parse_double(k, v) * 1e-9; }},
  };
  return table;
}

void validate_or_config_error(const sim::ExperimentConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.imbue(std::locale::classic());
  f << std::setprecision(10);
  return f;
}


}  // namespace

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

void apply_setting(sim::ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  std::string_view k = trim(key);
  if (k.starts_with("experiment.")) k.remove_prefix(std::string_view("experiment.").size());
  const auto& table = setters();
  const auto it = table.find(k);
  if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second(cfg, k, value);
}

void apply_config_file(sim::ExperimentConfig& cfg, const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path.string());
  } catch (const CLI::Error& e) {
    throw ConfigError("cannot parse config file " + path.string() + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    auto parents = item.parents;
    if (!parents.empty() && (parents.front() == "default" || parents.front() == "experiment")) {
      parents.erase(parents.begin());
    }
    std::string key;
    for (const auto& p : parents) key += p + ".";
    key += item.name;
    std::string value;
    for (std::size_t n = 0; n < item.inputs.size(); ++n) {
      if (n > 0) value += ',';
      value += item.inputs[n];
    }
    apply_setting(cfg, key, value);
  }
}

std::vector<fs::path> emit_plot_data(std::span<const sim::ResultRow> rows, PlotKind kind,
                                     const fs::path& dir) {
  if (rows.empty()) throw std::invalid_argument("emit_plot_data: no rows to write");
  fs::create_directories(dir);
  std::vector<fs::path> written;
  switch (kind) {
    case PlotKind::ber: {
      const auto path = dir / "ber_curves.dat";
      auto f = open_output(path);
      f << "# ebn0_db ber detector L\n";
      for (const auto& r : rows) {
        f << r.ebn0_db << ' ' << r.ber << ' ' << r.detector << ' ' << r.L << '\n';
      }
      written.push_back(path);
      break;
    }
    case PlotKind::tradeoff: {
      std::vector<sim::ResultRow> sorted(rows.begin(), rows.end());
      std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.L != b.L) return a.L < b.L;
        if (a.stopping != b.stopping) return !a.stopping;
        return a.llr_max > b.llr_max;
      });
      const auto path = dir / "tradeoff.dat";
      auto f = open_output(path);
      f << "# L stopping llr_max required_ebn0_db avg_c_sd feasible\n";
      for (const auto& r : sorted) {
        f << r.L << ' ' << (r.stopping ? "on" : "off") << ' ' << r.llr_max << ' ' << r.ebn0_db
          << ' ' << r.avg_c_sd << ' ' << (r.feasible ? 1 : 0) << '\n';
      }
      written.push_back(path);
      break;
    }
    case PlotKind::overall: {
      const auto perf = dir / "trajectory_ebn0.dat";
      const auto cost = dir / "trajectory_complexity.dat";
      auto f1 = open_output(perf);
      auto f2 = open_output(cost);
      f1 << "# L detector required_ebn0_db nu llr_max feasible\n";
      f2 << "# L detector c_o_soft c_o_max nu llr_max feasible\n";
      for (const auto& r : rows) {
        f1 << r.L << ' ' << r.detector << ' ' << r.ebn0_db << ' ' << r.nu << ' ' << r.llr_max
           << ' ' << (r.feasible ? 1 : 0) << '\n';
        f2 << r.L << ' ' << r.detector << ' ' << r.c_o_soft << ' ' << r.c_o_max << ' ' << r.nu
           << ' ' << r.llr_max << ' ' << (r.feasible ? 1 : 0) << '\n';
      }
      written.push_back(perf);
      written.push_back(cost);
      break;
    }
  }
  return written;
}

bool run_selftest(std::ostream& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> sigma(0.1, 2.0);
  constexpr int kInstances = 200;
  bool all_ok = true;

  auto report = [&](std::string_view name, bool ok, std::string_view detail) {
    out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
    all_ok = all_ok && ok;
  };

  for (std::size_t L = 1; L <= 8; ++L) {
    int llr_ok = 0, hosd_ok = 0, stop_ok = 0, clip_ok = 0, budget_ok = 0;
    double worst = 0.0;
    for (int n = 0; n < kInstances; ++n) {
      AcrMatrix z(L, sigma(rng));
      for (std::size_t i = 1; i <= L; ++i) {
        for (std::size_t l = 0; l < i; ++l) z.set(l, i, gauss(rng));
      }
      const auto oracle = detect::msdd_exhaustive(z);

      const auto soft = detect::sosd(z, DetectorConfig{L, kInfinity, false});
      double err = 0.0;
      for (std::size_t i = 0; i < L; ++i) err = std::max(err, std::abs(soft.llr[i] - oracle.llr[i]));
      worst = std::max(worst, err);
      llr_ok += err <= 1e-9;
      budget_ok += soft.nodes_visited <= max_tree_nodes(L);

      const auto hard = detect::hosd(z, DetectorConfig{L, 0.0, false});
      hosd_ok += std::abs(hard.lambda_best - oracle.lambda_best) <= 1e-12 * (1 + oracle.lambda_best);

      const auto stop = detect::sosd(z, DetectorConfig{L, kInfinity, true});
      stop_ok += std::abs(stop.lambda_best - oracle.lambda_best) <= 1e-12 * (1 + oracle.lambda_best);

      const auto clipped = detect::sosd(z, DetectorConfig{L, 0.25, false});
      clip_ok += std::all_of(clipped.llr.begin(), clipped.llr.end(),
                             [](double v) { return std::abs(v) <= 0.25 + 1e-12; });
    }
    std::ostringstream detail;
    detail << "L=" << L << " instances=" << kInstances << " max|dLLR|=" << worst;
    report("sosd-llr-oracle", llr_ok == kInstances, detail.str());
    report("hosd-metric-oracle", hosd_ok == kInstances, "L=" + std::to_string(L));
    report("stopping-optimal", stop_ok == kInstances, "L=" + std::to_string(L));
    report("clipping-bound", clip_ok == kInstances, "L=" + std::to_string(L));
    report("node-budget", budget_ok == kInstances, "L=" + std::to_string(L));
  }
  out << (all_ok ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
  return all_ok;
}

namespace {

struct CliOptions {
  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  std::string front_end;
  std::string detector;
  std::string block_sizes;
  std::string llr_max;
  std::string stopping;
  int nu = -1;
};

void write_outputs(const std::string& command, const sim::ExperimentConfig& cfg,
                   std::span<const sim::ResultRow> rows, PlotKind kind, const fs::path& dir,
                   std::ostream& out) {
  fs::create_directories(dir);
  const auto csv = dir / (command + ".csv");
  {
    auto f = open_output(csv);
    sim::write_csv(f, rows);
  }
  auto files = emit_plot_data(rows, kind, dir);
  files.insert(files.begin(), csv);

  auto manifest = nlohmann::json::parse(sim::manifest_json(cfg, command));
  manifest["files"] = nlohmann::json::array();
  for (const auto& p : files) manifest["files"].push_back(p.filename().string());
  const auto manifest_path = dir / (command + ".manifest.json");
  {
    auto f = open_output(manifest_path);
    f << manifest.dump(2) << '\n';
  }
  for (const auto& p : files) out << "wrote " << p.string() << '\n';
  out << "wrote " << manifest_path.string() << '\n';
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv) {
  return parse_and_dispatch(argc, argv, std::cout, std::cerr);
}

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coded IR-UWB link simulator with sphere-decoder MSDD", "uwbsim"};
  app.set_version_flag("--version", std::string(sim::library_version()));
  app.require_subcommand(1, 1);

  CliOptions o;
  const char* env_out = std::getenv("UWBSIM_OUT");
  o.out_dir = env_out != nullptr && *env_out != '\0' ? env_out : "results";

  auto* ber = app.add_subcommand("ber", "BER vs Eb/N0 sweep");
  auto* tradeoff = app.add_subcommand("tradeoff", "Required Eb/N0 vs search complexity over LLR clipping levels");
  auto* overall = app.add_subcommand("overall", "Overall receiver complexity trajectories");
  auto* selftest = app.add_subcommand("selftest", "Detector oracle-equivalence checks");

  for (auto* sub : {ber, tradeoff, overall}) {
    sub->add_option("--config", o.config, "Config file (INI/TOML sections)");
    sub->add_option("--out", o.out_dir, "Output directory (default $UWBSIM_OUT or ./results)");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--override", o.overrides, "key=value, repeatable")->take_all();
    sub->add_option("--front-end", o.front_end, "waveform|semi");
    sub->add_option("--detector", o.detector, "dd_hard|dd_soft|hosd|sosd|msdd_exhaustive");
    sub->add_option("--L", o.block_sizes, "Block size(s), comma separated");
    sub->add_option("--llr-max", o.llr_max, "LLR clipping level (inf allowed)");
    sub->add_option("--stopping", o.stopping, "on|off");
    sub->add_option("--nu", o.nu, "Convolutional code memory");
  }
  selftest->add_option("--seed", o.seed, "Seed of the random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << sim::library_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "uwbsim: " << e.what() << '\n';
    return 2;
  }

  if (selftest->parsed()) {
    try {
      return run_selftest(out, o.seed == 0 ? 1 : o.seed) ? 0 : 1;
    } catch (const std::exception& e) {
      err << "uwbsim: " << e.what() << '\n';
      return 1;
    }
  }

  sim::ExperimentConfig cfg;
  try {
    if (!o.config.empty()) apply_config_file(cfg, o.config);
    for (const auto& kv : o.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("override '" + kv + "' is not key=value");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed != 0) cfg.seed = o.seed;
    if (!o.front_end.empty()) apply_setting(cfg, "front_end", o.front_end);
    if (!o.detector.empty()) apply_setting(cfg, "detector", o.detector);
    if (!o.block_sizes.empty()) apply_setting(cfg, "L", o.block_sizes);
    if (!o.llr_max.empty()) apply_setting(cfg, "llr_max", o.llr_max);
    if (!o.stopping.empty()) apply_setting(cfg, "stopping", o.stopping);
    if (o.nu >= 0) cfg.nu = o.nu;
    validate_or_config_error(cfg);
  } catch (const ConfigError& e) {
    err << "uwbsim: " << e.what() << '\n';
    return 2;
  }

  try {
    const fs::path dir = o.out_dir;
    if (ber->parsed()) {
      write_outputs("ber", cfg, sim::run_ber_sweep(cfg), PlotKind::ber, dir, out);
    } else if (tradeoff->parsed()) {
      write_outputs("tradeoff", cfg, sim::run_tradeoff(cfg), PlotKind::tradeoff, dir, out);
    } else {
      write_outputs("overall", cfg, sim::run_overall_complexity(cfg), PlotKind::overall, dir, out);
    }
  } catch (const std::exception& e) {
    err << "uwbsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace uwbsd::cli

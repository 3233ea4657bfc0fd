#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "uwbsd/waveform.hpp"

namespace uwbsd::waveform {

void ChannelRealization::normalize() {
  if (taps.empty()) throw std::invalid_argument("channel realization has no taps");
  double energy = 0.0;
  for (const auto& t : taps) {
    if (!(t.delay >= 0.0) || !std::isfinite(t.delay) || !std::isfinite(t.gain)) {
      throw std::invalid_argument("channel taps need finite gains and delays >= 0");
    }
    energy += t.gain * t.gain;
  }
  if (!(energy > 0.0)) throw std::invalid_argument("channel realization has zero energy");
  std::stable_sort(taps.begin(), taps.end(),
                   [](const ChannelTap& a, const ChannelTap& b) { return a.delay < b.delay; });
  const double g = 1.0 / std::sqrt(energy);
  for (auto& t : taps) t.gain *= g;
}

void SvChannelModel::validate() const {
  if (!(cluster_rate > 0.0) || !(ray_rate > 0.0) || !(cluster_decay > 0.0) ||
      !(ray_decay > 0.0) || !(max_excess_delay > 0.0) || sigma_cluster_db < 0.0 ||
      sigma_ray_db < 0.0) {
    throw std::invalid_argument("SvChannelModel: rates, decays and delay span must be positive");
  }
}

ChannelRealization draw_channel(const SvChannelModel& model, std::uint64_t seed) {
  model.validate();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> next_cluster(model.cluster_rate);
  std::exponential_distribution<double> next_ray(model.ray_rate);
  std::normal_distribution<double> fading_db(
      0.0, std::hypot(model.sigma_cluster_db, model.sigma_ray_db));
  std::bernoulli_distribution polarity(0.5);

  ChannelRealization ch;
  ch.rng_seed = seed;
  for (double cluster = 0.0; cluster < model.max_excess_delay; cluster += next_cluster(rng)) {
    for (double ray = 0.0; cluster + ray < model.max_excess_delay; ray += next_ray(rng)) {
      const double mean_power =
          std::exp(-cluster / model.cluster_decay) * std::exp(-ray / model.ray_decay);
      const double amplitude = std::sqrt(mean_power) * std::pow(10.0, fading_db(rng) / 20.0);
      ch.taps.push_back({cluster + ray, polarity(rng) ? amplitude : -amplitude});
    }
  }
  ch.normalize();
  return ch;
}

ChannelRealization line_of_sight_channel() {
  ChannelRealization ch;
  ch.taps.push_back({0.0, 1.0});
  return ch;
}

void write_channel(std::ostream& out, const ChannelRealization& ch) {
  out << "# uwbsd channel realization: delay_ns gain\n";
  out << "seed " << ch.rng_seed << '\n';
  out << std::setprecision(17);
  for (const auto& t : ch.taps) out << t.delay * 1e9 << ' ' << t.gain << '\n';
}

ChannelRealization read_channel(std::istream& in) {
  ChannelRealization ch;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    if (line.compare(first, 4, "seed") == 0) {
      std::string key;
      fields >> key >> ch.rng_seed;
    } else {
      double delay_ns = 0.0;
      double gain = 0.0;
      fields >> delay_ns >> gain;
      if (fields.fail()) {
        throw std::runtime_error("channel file line " + std::to_string(line_no) +
                                 ": expected '<delay_ns> <gain>'");
      }
      ch.taps.push_back({delay_ns * 1e-9, gain});
    }
  }
  ch.normalize();
  return ch;
}

void save_channel(const std::string& path, const ChannelRealization& ch) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.imbue(std::locale::classic());
  write_channel(out, ch);
}

ChannelRealization load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_channel(in);
}

}  // namespace uwbsd::waveform

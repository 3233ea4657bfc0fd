#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

#include "uwbsd/detect.hpp"
#include "uwbsd/sim.hpp"

namespace uwbsd::sim {

namespace {

/// Experiment-wide invariants shared by every frame of a point.
struct LinkContext {
  LinkContext(const ExperimentConfig& cfg, const DetectorSetting& det)
      : code(coding::ConvCode::max_free_distance(det.nu)),
        interleaver(2 * (cfg.interleaver_bits + static_cast<std::size_t>(det.nu)),
                    cfg.seed ^ 0x9e3779b97f4a7c15ull),
        shaped(waveform::shaped_pulse(cfg.pulse)),
        rx_filter(waveform::receive_filter(cfg.pulse)) {}

  coding::ConvCode code;
  coding::Interleaver interleaver;
  waveform::SampledSignal shaped;
  waveform::SampledSignal rx_filter;
};

bool is_dd(DetectorKind k) { return k == DetectorKind::dd_hard || k == DetectorKind::dd_soft; }

struct BlockOutput {
  std::vector<double> llr;
  std::uint64_t nodes = 0;
};

BlockOutput detect_block(const AcrMatrix& z, const DetectorSetting& det) {
  const std::size_t L = z.block_size();
  BlockOutput out;
  auto hard_llrs = [](const Hypothesis& a) {
    std::vector<double> v(a.size());
    for (std::size_t i = 1; i <= a.size(); ++i) v[i - 1] = a.at(i);
    return v;
  };
  DetectorConfig dcfg{L, det.llr_max, det.stopping};
  switch (det.kind) {
    case DetectorKind::dd_hard:
      out.llr = hard_llrs(detect::dd_hard(z));
      out.nodes = L;
      break;
    case DetectorKind::dd_soft:
      out.llr = detect::dd_soft(z);
      out.nodes = L;
      break;
    case DetectorKind::hosd: {
      const auto r = detect::hosd(z, dcfg);
      out.llr = hard_llrs(r.best);
      out.nodes = r.nodes_visited;
      break;
    }
    case DetectorKind::sosd: {
      auto r = detect::sosd(z, dcfg);
      out.llr = det.llr_max == 0.0 ? hard_llrs(r.hard) : std::move(r.llr);
      out.nodes = r.nodes_visited;
      break;
    }
    case DetectorKind::msdd_exhaustive:
      out.llr = detect::msdd_exhaustive(z).llr;
      out.nodes = max_tree_nodes(L);
      break;
  }
  return out;
}

enum class Stream : std::uint32_t { link = 1, noise = 2 };

/// Channel realization and data depend on (master, frame) only, so every
/// detector and every Eb/N0 point sees the same channels and bits; the noise
/// stream also depends on the grid point.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::size_t point,
                          std::uint64_t frame) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(point),
                    static_cast<std::uint32_t>(frame), static_cast<std::uint32_t>(frame >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

PointStats simulate_frame(const ExperimentConfig& cfg, const LinkContext& ctx,
                          const DetectorSetting& det, std::size_t block_size, double ebn0_db,
                          std::size_t point_index, std::uint64_t frame) {
  std::mt19937_64 rng(derive_seed(cfg.seed, Stream::link, 0, frame));
  const std::uint64_t channel_seed = rng();
  const std::uint64_t noise_seed = derive_seed(cfg.seed, Stream::noise, point_index, frame);

  std::vector<coding::Bit> info(cfg.interleaver_bits);
  for (auto& b : info) b = static_cast<coding::Bit>(rng() >> 63);
  const auto coded = coding::conv_encode(ctx.code, info);
  const auto permuted = ctx.interleaver.interleave<coding::Bit>(coded);
  const auto symbols = coding::bits_to_symbols(permuted);
  const auto channel_symbols = coding::map_differential(symbols);

  const auto channel = waveform::draw_channel(cfg.channel, channel_seed);
  const auto pulse = waveform::make_receive_pulse(ctx.shaped, channel, cfg.symbol_duration);
  waveform::FrontEndConfig fe{cfg.symbol_duration, cfg.integration_time, block_size, ebn0_db};
  const auto cal = waveform::calibrate(pulse, ctx.rx_filter, fe);

  std::vector<AcrMatrix> blocks;
  if (cfg.front_end == FrontEndMode::semi_analytic) {
    std::mt19937_64 noise_rng(noise_seed);
    blocks = waveform::semi_analytic_frame(channel_symbols, block_size, cal, noise_rng);
  } else {
    const auto r = waveform::synthesize_block(channel_symbols, pulse, ctx.rx_filter, fe, noise_seed);
    blocks = waveform::acr_frame(r, symbols.size(), block_size, fe, cal.sigma_n2());
  }

  PointStats stats;
  std::vector<double> llrs;
  llrs.reserve(symbols.size());
  for (const auto& z : blocks) {
    auto out = detect_block(z, det);
    for (double v : out.llr) {
      if (!std::isfinite(v)) throw std::runtime_error("detector produced a non-finite LLR");
    }
    llrs.insert(llrs.end(), out.llr.begin(), out.llr.end());
    if (z.block_size() == block_size) {
      ++stats.blocks;
      stats.nodes_sum += out.nodes;
      stats.nodes_max = std::max(stats.nodes_max, out.nodes);
    }
  }

  const auto deinterleaved = ctx.interleaver.deinterleave<double>(llrs);
  const auto decoded = coding::viterbi_decode(ctx.code, deinterleaved);
  stats.frames = 1;
  stats.bits = info.size();
  for (std::size_t k = 0; k < info.size(); ++k) stats.errors += decoded.bits[k] != info[k];
  return stats;
}

void accumulate(PointStats& total, const PointStats& part) {
  total.bits += part.bits;
  total.errors += part.errors;
  total.frames += part.frames;
  total.blocks += part.blocks;
  total.nodes_sum += part.nodes_sum;
  total.nodes_max = std::max(total.nodes_max, part.nodes_max);
}

constexpr std::size_t kFramesPerRound = 8;

}  // namespace

PointStats simulate_point(const ExperimentConfig& cfg, const DetectorSetting& det,
                          std::size_t block_size, std::size_t point_index, double ebn0_db) {
  cfg.validate();
  if (block_size == 0) throw std::invalid_argument("simulate_point: block size must be >= 1");
  if (is_dd(det.kind) && block_size != 1) {
    throw std::invalid_argument("simulate_point: DD detectors operate on L = 1");
  }
  const LinkContext ctx(cfg, det);
  const unsigned workers = std::max(
      1u, std::min<unsigned>(cfg.threads ? cfg.threads : std::thread::hardware_concurrency(),
                             kFramesPerRound));

  PointStats total;
  std::uint64_t frame = 0;
  std::vector<PointStats> round(kFramesPerRound);
  while ((total.errors < cfg.min_bit_errors || total.frames < cfg.min_frames) &&
         total.bits < cfg.max_bits) {
    std::vector<std::exception_ptr> failures(workers);
    auto run = [&](unsigned worker) {
      try {
        for (std::size_t j = worker; j < kFramesPerRound; j += workers) {
          round[j] = simulate_frame(cfg, ctx, det, block_size, ebn0_db, point_index, frame + j);
        }
      } catch (...) {
        failures[worker] = std::current_exception();
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
    for (const auto& part : round) accumulate(total, part);
    frame += kFramesPerRound;
  }
  return total;
}

}  // namespace uwbsd::sim

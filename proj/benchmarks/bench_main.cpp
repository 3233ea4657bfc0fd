#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "uwbsd/coding.hpp"
#include "uwbsd/detect.hpp"
#include "uwbsd/waveform.hpp"

using namespace uwbsd;

namespace {

std::vector<AcrMatrix> link_blocks(std::size_t L, double ebn0_db, std::size_t count) {
  const waveform::PulseSpec spec;
  const auto p = waveform::make_receive_pulse(spec, waveform::draw_channel({}, 1), 100e-9);
  const auto cal = waveform::calibrate(p, waveform::receive_filter(spec),
                                       waveform::FrontEndConfig{100e-9, 30e-9, L, ebn0_db});
  std::mt19937_64 rng(7);
  std::vector<AcrMatrix> out;
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<int> b(L + 1, 1);
    for (std::size_t i = 1; i <= L; ++i) b[i] = (rng() & 1u) ? -b[i - 1] : b[i - 1];
    out.push_back(waveform::semi_analytic_z(b, cal, rng()));
  }
  return out;
}

// args: L, llr_max x 100 (-1 = inf), stopping
void BM_Sosd(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const double llr_max = state.range(1) < 0 ? kInfinity : state.range(1) / 100.0;
  const bool stopping = state.range(2) != 0;
  const auto blocks = link_blocks(L, 10.0, 256);
  std::size_t k = 0;
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const auto r = detect::sosd(blocks[k++ % blocks.size()], DetectorConfig{L, llr_max, stopping});
    nodes += r.nodes_visited;
    benchmark::DoNotOptimize(r.llr.data());
  }
  state.counters["nodes"] = benchmark::Counter(static_cast<double>(nodes) / state.iterations());
}
BENCHMARK(BM_Sosd)
    ->ArgsProduct({{5, 10, 15}, {-1, 1000, 100, 10, 0}, {0, 1}})
    ->ArgNames({"L", "llr_max_x100", "stop"});

void BM_Exhaustive(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const auto blocks = link_blocks(L, 10.0, 64);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(detect::msdd_exhaustive(blocks[k++ % blocks.size()]).llr.data());
  }
}
BENCHMARK(BM_Exhaustive)->Arg(5)->Arg(10);

void BM_Viterbi(benchmark::State& state) {
  const auto code = coding::ConvCode::max_free_distance(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.8);
  std::vector<coding::Bit> info(1000);
  for (auto& b : info) b = static_cast<coding::Bit>(rng() & 1u);
  const auto coded = coding::conv_encode(code, info);
  std::vector<double> llr(coded.size());
  for (std::size_t k = 0; k < llr.size(); ++k) llr[k] = (coded[k] ? -1.0 : 1.0) + noise(rng);
  for (auto _ : state) benchmark::DoNotOptimize(coding::viterbi_decode(code, llr).bits.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(info.size()));
}
BENCHMARK(BM_Viterbi)->DenseRange(2, 7);

void BM_SemiAnalyticFrame(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const waveform::PulseSpec spec;
  const auto p = waveform::make_receive_pulse(spec, waveform::draw_channel({}, 1), 100e-9);
  const auto cal = waveform::calibrate(p, waveform::receive_filter(spec),
                                       waveform::FrontEndConfig{100e-9, 30e-9, L, 10.0});
  std::vector<int> symbols(2012, 1);
  const auto b = coding::map_differential(symbols);
  std::mt19937_64 rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(waveform::semi_analytic_frame(b, L, cal, rng).data());
  }
}
BENCHMARK(BM_SemiAnalyticFrame)->Arg(1)->Arg(10);

}  // namespace



BENCHMARK_MAIN();

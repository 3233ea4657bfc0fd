#include "uwbsd/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "uwbsd/metrics.hpp"

namespace uwbsd::detect {

namespace {

void require_positive_noise(const AcrMatrix& z, const char* who) {
  if (!(z.sigma_n2() > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": sigma_n2 must be > 0 for LLR scaling");
  }
}

}  // namespace

Hypothesis dd_hard(const AcrMatrix& z) {
  Hypothesis a(z.block_size());
  for (std::size_t i = 1; i <= z.block_size(); ++i) a.set(i, sign_of(z(i - 1, i)));
  return a;
}

std::vector<double> dd_soft(const AcrMatrix& z) {
  require_positive_noise(z, "dd_soft");
  std::vector<double> llr(z.block_size());
  for (std::size_t i = 1; i <= z.block_size(); ++i) llr[i - 1] = z(i - 1, i) / z.sigma_n2();
  return llr;
}

ExhaustiveResult msdd_exhaustive(const AcrMatrix& z) {
  const std::size_t L = z.block_size();
  if (L > kExhaustiveMaxBlockSize) {
    throw std::invalid_argument("msdd_exhaustive: block size " + std::to_string(L) +
                                " exceeds enumeration guard " +
                                std::to_string(kExhaustiveMaxBlockSize));
  }
  require_positive_noise(z, "msdd_exhaustive");

  const std::uint64_t count = std::uint64_t{1} << L;
  std::vector<double> metrics(count);
  Hypothesis a(L);
  auto decode = [&](std::uint64_t index) {
    // bit (L - i) of the index set means a_i = -1
    for (std::size_t i = 1; i <= L; ++i) a.set(i, ((index >> (L - i)) & 1u) ? -1 : +1);
  };

  ExhaustiveResult out;
  std::uint64_t best_index = 0;
  for (std::uint64_t index = 0; index < count; ++index) {
    decode(index);
    metrics[index] = lambda_metric(z, a);
    if (metrics[index] < out.lambda_best) {
      out.lambda_best = metrics[index];
      best_index = index;
    }
  }
  decode(best_index);
  out.best = a;

  out.lambda_counter.assign(L, kInfinity);
  for (std::uint64_t index = 0; index < count; ++index) {
    const std::uint64_t differing = index ^ best_index;
    for (std::size_t i = 1; i <= L; ++i) {
      if ((differing >> (L - i)) & 1u) {
        out.lambda_counter[i - 1] = std::min(out.lambda_counter[i - 1], metrics[index]);
      }
    }
  }

  const double scale = z.sigma_n2() * static_cast<double>(L + 1);
  out.llr.resize(L);
  for (std::size_t i = 1; i <= L; ++i) {
    out.llr[i - 1] = out.best.at(i) * (out.lambda_counter[i - 1] - out.lambda_best) / scale;
  }
  return out;
}

double stopping_radius(const AcrMatrix& z) {
  double smallest = kInfinity;
  for (double v : z.entries()) smallest = std::min(smallest, std::abs(v));
  return static_cast<double>(z.block_size()) * smallest;
}

HardDecision hosd(const AcrMatrix& z, const DetectorConfig& cfg, SearchTrace* trace) {
  DetectorConfig hard = cfg;
  hard.llr_max = 0.0;
  SoftDecision soft = sosd(z, hard, trace);
  return {std::move(soft.hard), soft.lambda_best, soft.nodes_visited, soft.terminated_early};
}

}  // namespace uwbsd::detect

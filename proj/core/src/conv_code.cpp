#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <string>

#include "uwbsd/coding.hpp"

namespace uwbsd::coding {

namespace {

constexpr std::array<ConvCode, 6> kCatalog{{
    {2, 07, 05},
    {3, 017, 015},
    {4, 035, 023},
    {5, 075, 053},
    {6, 0171, 0133},
    {7, 0371, 0247},
}};

int parity(std::uint32_t v) { return std::popcount(v) & 1; }

}  // namespace

ConvCode ConvCode::max_free_distance(int nu) {
  for (const auto& c : kCatalog) {
    if (c.nu == nu) return c;
  }
  throw std::invalid_argument("no catalog code for nu = " + std::to_string(nu) +
                              " (supported 2..7)");
}

void ConvCode::validate() const {
  if (nu < 1 || nu > 12) throw std::invalid_argument("ConvCode: nu outside 1..12");
  const std::uint32_t top = 1u << nu;
  if (g0 >= (top << 1) || g1 >= (top << 1) || ((g0 | g1) & top) == 0) {
    throw std::invalid_argument("ConvCode: generator degree does not match nu");
  }
}

std::vector<Bit> conv_encode(const ConvCode& code, std::span<const Bit> info) {
  code.validate();
  std::vector<Bit> out;
  out.reserve(2 * (info.size() + code.nu));
  std::uint32_t state = 0;  // bit nu-1 holds the most recent input
  auto push = [&](Bit u) {
    const std::uint32_t reg = (static_cast<std::uint32_t>(u & 1u) << code.nu) | state;
    out.push_back(static_cast<Bit>(parity(reg & code.g0)));
    out.push_back(static_cast<Bit>(parity(reg & code.g1)));
    state = reg >> 1;
  };
  for (Bit u : info) push(u);
  for (int k = 0; k < code.nu; ++k) push(0);
  return out;
}

ViterbiResult viterbi_decode(const ConvCode& code, std::span<const double> llrs) {
  code.validate();
  if (llrs.size() % 2 != 0 || llrs.size() < 2 * static_cast<std::size_t>(code.nu)) {
    throw std::invalid_argument("viterbi_decode: expected 2 (K + nu) LLRs");
  }
  const std::size_t steps = llrs.size() / 2;
  const std::size_t info_len = steps - code.nu;
  const std::size_t S = code.states();
  constexpr double kUnreached = -std::numeric_limits<double>::infinity();

  // Branch outputs for (state, input).
  std::vector<std::array<int, 2>> out0(S), out1(S);
  for (std::uint32_t s = 0; s < S; ++s) {
    for (std::uint32_t u = 0; u < 2; ++u) {
      const std::uint32_t reg = (u << code.nu) | s;
      out0[s][u] = parity(reg & code.g0);
      out1[s][u] = parity(reg & code.g1);
    }
  }

  std::vector<double> metric(S, kUnreached), next(S);
  metric[0] = 0.0;
  // decision[t][s'] = predecessor state; tie[t][s'] marks equal competitors
  std::vector<std::uint32_t> decision(steps * S);
  std::vector<std::uint8_t> tie(steps * S, 0);

  for (std::size_t t = 0; t < steps; ++t) {
    const double l0 = llrs[2 * t];
    const double l1 = llrs[2 * t + 1];
    std::fill(next.begin(), next.end(), kUnreached);
    const bool tail = t >= info_len;
    for (std::uint32_t s = 0; s < S; ++s) {
      if (metric[s] == kUnreached) continue;
      for (std::uint32_t u = 0; u < (tail ? 1u : 2u); ++u) {
        const std::uint32_t ns = ((u << code.nu) | s) >> 1;
        const double m = metric[s] + l0 * (1 - 2 * out0[s][u]) + l1 * (1 - 2 * out1[s][u]);
        const std::size_t idx = t * S + ns;
        if (m > next[ns]) {
          next[ns] = m;
          decision[idx] = s;
          tie[idx] = 0;
        } else if (m == next[ns]) {
          tie[idx] = 1;
        }
      }
    }
    metric.swap(next);
  }

  ViterbiResult result;
  result.bits.assign(info_len, 0);
  std::uint32_t state = 0;
  for (std::size_t t = steps; t-- > 0;) {
    const std::size_t idx = t * S + state;
    if (tie[idx]) result.ambiguous = true;
    // The input that led into `state` is its most significant register bit.
    const Bit u = static_cast<Bit>((state >> (code.nu - 1)) & 1u);
    if (t < info_len) result.bits[t] = u;
    state = decision[idx];
  }
  return result;
}

}  // namespace uwbsd::coding

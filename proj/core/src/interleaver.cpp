#include <algorithm>
#include <numeric>
#include <random>
#include <utility>

#include "uwbsd/coding.hpp"

namespace uwbsd::coding {

Interleaver::Interleaver(std::size_t size, std::uint64_t seed) : permutation_(size) {
  std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(permutation_.begin(), permutation_.end(), rng);
}

Interleaver Interleaver::identity(std::size_t size) {
  Interleaver il;
  il.permutation_.resize(size);
  std::iota(il.permutation_.begin(), il.permutation_.end(), std::size_t{0});
  return il;
}

std::vector<int> bits_to_symbols(std::span<const Bit> bits) {
  std::vector<int> a(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) a[k] = bits[k] ? -1 : +1;
  return a;
}

std::vector<int> map_differential(std::span<const int> symbols) {
  std::vector<int> b(symbols.size() + 1);
  b[0] = 1;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] != 1 && symbols[i] != -1) {
      throw std::invalid_argument("map_differential: symbols must be +1 or -1");
    }
    b[i + 1] = b[i] * symbols[i];
  }
  return b;
}

std::vector<int> differential_decode(std::span<const int> channel_symbols) {
  if (channel_symbols.empty()) return {};
  std::vector<int> a(channel_symbols.size() - 1);
  for (std::size_t i = 1; i < channel_symbols.size(); ++i) {
    a[i - 1] = channel_symbols[i - 1] * channel_symbols[i];
  }
  return a;
}

}  // namespace uwbsd::coding

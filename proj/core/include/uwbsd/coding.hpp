#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace uwbsd::coding {

using Bit = std::uint8_t;

/// Rate-1/2 feedforward convolutional code with 2^nu states.
///
/// Generators are octal with the most significant tap on the current input.
struct ConvCode {
  int nu = 2;
  std::uint32_t g0 = 07;
  std::uint32_t g1 = 05;

  /// Maximum-free-distance code for nu in 2..7:
  /// (7,5) (17,15) (35,23) (75,53) (171,133) (371,247).
  static ConvCode max_free_distance(int nu);

  std::size_t states() const noexcept { return std::size_t{1} << nu; }
  void validate() const;
};

/// Encodes `info` followed by nu zero tail bits: 2 (K + nu) output bits.
std::vector<Bit> conv_encode(const ConvCode& code, std::span<const Bit> info);

struct ViterbiResult {
  std::vector<Bit> bits;  ///< K information bits (tail removed)
  /// The surviving path passed through an add-compare-select tie, i.e. the
  /// decision is not unique (e.g. all-zero input).
  bool ambiguous = false;
};

/// Soft-input Viterbi decoder, correlation metric Σ llr (1 - 2c) with
/// llr > 0 favouring c = 0. Expects 2 (K + nu) LLRs of a zero-terminated
/// codeword. For hard-input decoding pass ±1 values.
ViterbiResult viterbi_decode(const ConvCode& code, std::span<const double> llrs);

/// Seeded pseudo-random permutation on [0, size).
class Interleaver {
 public:
  Interleaver(std::size_t size, std::uint64_t seed);
  static Interleaver identity(std::size_t size);

  std::size_t size() const noexcept { return permutation_.size(); }
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

  /// out[k] = in[π(k)]
  template <typename T>
  std::vector<T> interleave(std::span<const T> in) const {
    check(in.size());
    std::vector<T> out(in.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = in[permutation_[k]];
    return out;
  }

  /// Inverse of interleave.
  template <typename T>
  std::vector<T> deinterleave(std::span<const T> in) const {
    check(in.size());
    std::vector<T> out(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) out[permutation_[k]] = in[k];
    return out;
  }

 private:
  Interleaver() = default;
  void check(std::size_t n) const {
    if (n != permutation_.size()) throw std::invalid_argument("interleaver length mismatch");
  }

  std::vector<std::size_t> permutation_;
};

/// Coded bit c -> antipodal symbol a = 1 - 2c.
std::vector<int> bits_to_symbols(std::span<const Bit> bits);

/// b_0 = +1, b_i = b_{i-1} a_i; returns N + 1 channel symbols.
std::vector<int> map_differential(std::span<const int> symbols);

/// a_i = b_{i-1} b_i.
std::vector<int> differential_decode(std::span<const int> channel_symbols);

}  // namespace uwbsd::coding

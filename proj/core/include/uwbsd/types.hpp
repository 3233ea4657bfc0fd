#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace uwbsd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Antipodal information-symbol hypothesis a_1..a_L.
///
/// Public accessors use the 1-based symbol index i = 1..L; the reference
/// symbol b_0 is implicit and never stored.
class Hypothesis {
 public:
  Hypothesis() = default;
  explicit Hypothesis(std::size_t block_size, int value = +1);
  Hypothesis(std::initializer_list<int> symbols);
  explicit Hypothesis(std::span<const int> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }

  /// Symbol a_i, i in 1..size(). Throws std::out_of_range.
  int at(std::size_t i) const;
  void set(std::size_t i, int value);
  void flip(std::size_t i);

  /// Contiguous storage, index 0 holds a_1.
  std::span<const std::int8_t> symbols() const noexcept { return symbols_; }
  std::span<std::int8_t> symbols() noexcept { return symbols_; }

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

 private:
  std::vector<std::int8_t> symbols_;
};

/// Autocorrelation statistics Z_{l,i}, 0 <= l < i <= L, of an L-branch
/// autocorrelation receiver together with the noise level σ_n².
///
/// Storage is column-wise: column i holds Z_{0,i} .. Z_{i-1,i} contiguously,
/// which is exactly the set of terms entering the depth-i branch metric.
class AcrMatrix {
 public:
  AcrMatrix() = default;
  AcrMatrix(std::size_t block_size, double sigma_n2);

  std::size_t block_size() const noexcept { return block_size_; }
  double sigma_n2() const noexcept { return sigma_n2_; }
  void set_sigma_n2(double sigma_n2);

  /// Z_{l,i}. Throws std::out_of_range unless 0 <= l < i <= L.
  double operator()(std::size_t l, std::size_t i) const;
  /// Sets Z_{l,i}; rejects non-finite values.
  void set(std::size_t l, std::size_t i, double value);

  /// Z_{0,i} .. Z_{i-1,i}, i in 1..L.
  std::span<const double> column(std::size_t i) const;

  /// All L(L+1)/2 entries, column by column.
  std::span<const double> entries() const noexcept { return values_; }

  static constexpr std::size_t entry_count(std::size_t block_size) noexcept {
    return block_size * (block_size + 1) / 2;
  }

 private:
  static constexpr std::size_t offset(std::size_t i) noexcept { return i * (i - 1) / 2; }
  void check_index(std::size_t l, std::size_t i) const;

  std::size_t block_size_ = 0;
  double sigma_n2_ = 1.0;
  std::vector<double> values_;
};

struct DetectorConfig {
  std::size_t block_size = 1;
  /// LLR clipping level. +inf disables clipping, 0 gives hard output.
  double llr_max = kInfinity;
  bool use_stopping_criterion = false;

  /// Throws std::invalid_argument on llr_max < 0 (or NaN) or block_size == 0.
  void validate() const;
};

/// Output of the soft-output detectors.
struct SoftDecision {
  std::vector<double> llr;             ///< LLR_1..LLR_L at index 0..L-1
  Hypothesis hard;                     ///< GLRT sequence a^MSDD
  double lambda_best = kInfinity;      ///< Λ^MSDD
  std::vector<double> lambda_counter;  ///< Λ̄_i after clipping (may be +inf)
  std::vector<bool> unresolved;        ///< Λ̄_i never reached; LLR_i is the ceiling sentinel
  std::uint64_t nodes_visited = 0;     ///< C_SD
  bool terminated_early = false;
};

/// Worst-case number of visited nodes of the binary search tree, 2^{L+1} - 2.
constexpr std::uint64_t max_tree_nodes(std::size_t block_size) noexcept {
  return (std::uint64_t{1} << (block_size + 1)) - 2;
}

}  // namespace uwbsd

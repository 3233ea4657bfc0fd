#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uwbsd/types.hpp"

namespace uwbsd::detect {

/// Schnorr-Euchner branch enumeration over the L-level binary MSDD tree.
///
/// Holds the current path a_1..a_i and the per-depth child counters n_i.
/// At depth i the branch metric is δ(a_i) = S_i - a_i c_i with
/// S_i = Σ_l |Z_{l,i}| and c_i = Σ_l Z_{l,i} ∏_{k=l+1..i-1} a_k, so the
/// cheaper child is a_i = sign(c_i) and its sibling costs S_i + |c_i|.
class SearchTree {
 public:
  struct Step {
    std::size_t depth = 0;  ///< 0 once the tree is exhausted
    double delta = 0.0;
  };

  explicit SearchTree(const AcrMatrix& z);

  /// First child at `depth` given the current prefix a_1..a_{depth-1}.
  /// Ties (c_i == 0) take +1. Sets n_depth = 1.
  Step find_best(std::size_t depth);

  /// Sibling of the node at `depth`; ascends while n == 2. Returns depth 0
  /// when the root has been exhausted.
  Step find_next(std::size_t depth);

  std::size_t block_size() const noexcept { return block_size_; }
  int symbol(std::size_t i) const noexcept { return path_[i - 1]; }
  int count(std::size_t i) const noexcept { return counts_[i - 1]; }
  const std::vector<std::int8_t>& path() const noexcept { return path_; }

  /// Identity of the node a_1..a_depth: a unique integer per tree node
  /// (heap numbering). Valid for block sizes up to 62.
  std::uint64_t node_id(std::size_t depth) const noexcept;

 private:
  const AcrMatrix& z_;
  std::size_t block_size_;
  std::vector<double> abs_sums_;      // S_i
  std::vector<double> correlations_;  // c_i of the current prefix
  std::vector<std::int8_t> path_;
  std::vector<int> counts_;
};

}  // namespace uwbsd::detect

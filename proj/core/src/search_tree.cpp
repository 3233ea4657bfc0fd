#include "uwbsd/search_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uwbsd/metrics.hpp"

namespace uwbsd::detect {

SearchTree::SearchTree(const AcrMatrix& z)
    : z_(z),
      block_size_(z.block_size()),
      abs_sums_(block_size_, 0.0),
      correlations_(block_size_, 0.0),
      path_(block_size_, 1),
      counts_(block_size_, 0) {
  for (std::size_t i = 1; i <= block_size_; ++i) {
    double s = 0.0;
    for (double v : z.column(i)) s += std::abs(v);
    abs_sums_[i - 1] = s;
  }
}

SearchTree::Step SearchTree::find_best(std::size_t depth) {
  if (depth == 0 || depth > block_size_) throw std::out_of_range("find_best: depth outside 1..L");
  const auto col = z_.column(depth);
  double c = 0.0;
  int product = 1;
  for (std::size_t l = depth - 1; l-- > 0;) {
    // product = ∏_{k=l+1..depth-1} a_k
    product *= path_[l];
    c += col[l] * product;
  }
  c += col[depth - 1];  // l = depth-1: empty product
  correlations_[depth - 1] = c;
  const int a = sign_of(c);
  path_[depth - 1] = static_cast<std::int8_t>(a);
  counts_[depth - 1] = 1;
  // Rounding can push S_i - |c_i| a hair below zero when every term matches.
  return {depth, std::max(0.0, abs_sums_[depth - 1] - std::abs(c))};
}

SearchTree::Step SearchTree::find_next(std::size_t depth) {
  if (depth > block_size_) throw std::out_of_range("find_next: depth outside 0..L");
  while (depth > 0 && counts_[depth - 1] == 2) --depth;
  if (depth == 0) return {0, 0.0};
  path_[depth - 1] = static_cast<std::int8_t>(-path_[depth - 1]);
  counts_[depth - 1] += 1;
  return {depth, abs_sums_[depth - 1] - path_[depth - 1] * correlations_[depth - 1]};
}

std::uint64_t SearchTree::node_id(std::size_t depth) const noexcept {
  std::uint64_t id = std::uint64_t{1} << depth;
  for (std::size_t k = 0; k < depth; ++k) {
    if (path_[k] < 0) id |= std::uint64_t{1} << k;
  }
  return id;
}

}  // namespace uwbsd::detect

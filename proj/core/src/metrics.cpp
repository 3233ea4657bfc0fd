#include "uwbsd/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace uwbsd {

namespace {

void require_matching(const AcrMatrix& z, const Hypothesis& a) {
  if (a.size() != z.block_size()) {
    throw std::invalid_argument("hypothesis length does not match AcrMatrix block size");
  }
}

}  // namespace

double gamma_metric(const AcrMatrix& z, const Hypothesis& a) {
  require_matching(z, a);
  const auto sym = a.symbols();
  double gamma = 0.0;
  for (std::size_t i = 1; i <= z.block_size(); ++i) {
    const auto col = z.column(i);
    int product = 1;
    // l runs downwards so the product ∏_{k=l+1..i} a_k grows by one factor per step.
    for (std::size_t l = i; l-- > 0;) {
      product *= sym[l];
      gamma += product * col[l];
    }
  }
  return gamma;
}

double branch_metric(const AcrMatrix& z, std::span<const std::int8_t> prefix,
                     std::size_t depth) {
  if (depth == 0 || depth > z.block_size() || prefix.size() < depth) {
    throw std::out_of_range("branch_metric: depth outside 1..L or prefix too short");
  }
  const auto col = z.column(depth);
  double delta = 0.0;
  int product = 1;
  for (std::size_t l = depth; l-- > 0;) {
    product *= prefix[l];
    delta += std::abs(col[l]) * (1 - sign_of(col[l]) * product);
  }
  return delta;
}

double lambda_metric(const AcrMatrix& z, const Hypothesis& a) {
  require_matching(z, a);
  const auto sym = a.symbols();
  double lambda = 0.0;
  for (std::size_t i = 1; i <= z.block_size(); ++i) {
    const auto col = z.column(i);
    for (std::size_t l = 0; l < i; ++l) {
      int product = 1;
      for (std::size_t k = l + 1; k <= i; ++k) product *= sym[k - 1];
      lambda += std::abs(col[l]) * (1 - sign_of(col[l]) * product);
    }
  }
  return lambda;
}

double abs_sum(const AcrMatrix& z) {
  double s = 0.0;
  for (double v : z.entries()) s += std::abs(v);
  return s;
}

}  // namespace uwbsd

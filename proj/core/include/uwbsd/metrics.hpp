#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "uwbsd/types.hpp"

namespace uwbsd {

/// +1 for x >= 0, -1 otherwise. sign(0) is +1 throughout the library.
constexpr int sign_of(double x) noexcept { return x >= 0.0 ? +1 : -1; }

/// GLRT correlation metric Γ(a) = Σ_i Σ_{l<i} (∏_{k=l+1..i} a_k) Z_{l,i}.
double gamma_metric(const AcrMatrix& z, const Hypothesis& a);

/// Sphere-decoder metric Λ(a) = Σ_i Σ_{l<i} |Z_{l,i}| (1 - sign(Z_{l,i}) ∏ a_k) >= 0.
double lambda_metric(const AcrMatrix& z, const Hypothesis& a);

/// Depth-i increment δ_i of Λ; depends only on a_1..a_i.
/// `prefix` holds a_1..a_k (k >= depth) at indices 0..k-1.
double branch_metric(const AcrMatrix& z, std::span<const std::int8_t> prefix,
                     std::size_t depth);

/// Σ_{l<i} |Z_{l,i}|, the upper bound of Γ. Λ + Γ equals this for every a.
double abs_sum(const AcrMatrix& z);

}  // namespace uwbsd

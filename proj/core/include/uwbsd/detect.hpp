#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uwbsd/types.hpp"

namespace uwbsd::detect {

/// Symbol-by-symbol differential detection: a_i = sign(Z_{i-1,i}).
Hypothesis dd_hard(const AcrMatrix& z);

/// Soft-output DD: LLR_i = Z_{i-1,i} / σ_n². Requires σ_n² > 0.
std::vector<double> dd_soft(const AcrMatrix& z);

/// Largest block size accepted by msdd_exhaustive (2^L hypotheses).
inline constexpr std::size_t kExhaustiveMaxBlockSize = 20;

struct ExhaustiveResult {
  Hypothesis best;
  double lambda_best = kInfinity;
  std::vector<double> lambda_counter;
  std::vector<double> llr;
};

/// GLRT-optimal MSDD by enumerating every hypothesis. Ties in Λ keep the
/// first hypothesis in enumeration order (all +1 first, bit 1 toggling
/// slowest). Throws std::invalid_argument for L > kExhaustiveMaxBlockSize
/// or σ_n² <= 0.
ExhaustiveResult msdd_exhaustive(const AcrMatrix& z);

/// Packing-radius stopping bound R_stop = L · min |Z_{l,i}|.
double stopping_radius(const AcrMatrix& z);

/// Records every node the tree search evaluates, for the single-visit check.
struct SearchTrace {
  std::vector<std::uint64_t> visited;
};

/// Single-tree-search soft-output sphere decoder.
///
/// Finds Λ^MSDD, the best sequence and all counterhypothesis metrics Λ̄_i in
/// one depth-first Schnorr-Euchner traversal. The radius admits only nodes
/// that can still improve Λ^MSDD or a counterhypothesis the subtree can
/// reach; Λ̄_i are clipped to Λ^MSDD + σ_n²(L+1)·llr_max after every leaf.
/// With the stopping criterion enabled the search ends at the first best
/// sequence with Λ^MSDD <= R_stop.
SoftDecision sosd(const AcrMatrix& z, const DetectorConfig& cfg, SearchTrace* trace = nullptr);

struct HardDecision {
  Hypothesis best;
  double lambda_best = kInfinity;
  std::uint64_t nodes_visited = 0;
  bool terminated_early = false;
};

/// Hard-output sphere decoder: the same search with llr_max = 0.
HardDecision hosd(const AcrMatrix& z, const DetectorConfig& cfg, SearchTrace* trace = nullptr);

}  // namespace uwbsd::detect
